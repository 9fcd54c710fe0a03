"""Offspring distributions.

Every family exposes exact rational weights ``weight(i)``.  Families whose
true probabilities carry an irrational common factor (``PolyExp``) keep that
factor as a symbolic scale: ``mu(i) = scale * weight(i)`` with ``scale_power``
recording how many scale factors one weight carries.  All conditional laws in
this package are ratios of homogeneous expressions, so the scale cancels.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np
from scipy import special

from .errors import SpecParseError


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


class OffspringWeights:
    family = "abstract"
    scale_power = 0

    def __post_init__(self):
        object.__setattr__(self, "_cache", [])

    # exact part ---------------------------------------------------------
    def _extend(self, cache, upto):
        raise NotImplementedError

    def weights(self, N: int):
        """Tuple of exact weights for i = 0..N."""
        cache = self._cache
        if len(cache) <= N:
            self._extend(cache, N)
        return tuple(cache[:N + 1])

    def weight(self, i: int) -> Fraction:
        if i < 0:
            return Fraction(0)
        return self.weights(i)[i]

    def max_index(self):
        """Largest i with positive weight, None for infinite support."""
        return None

    def support_upto(self, N: int):
        return {i for i, w in enumerate(self.weights(N)) if w > 0}

    # float part ---------------------------------------------------------
    @property
    def scale(self) -> float:
        return 1.0

    def total_mass(self) -> float:
        """Sum of scale**scale_power * weight(i) over all i."""
        return 1.0

    def pmf(self, N: int) -> np.ndarray:
        """Normalised float probabilities for i = 0..N."""
        w = np.array([float(x) for x in self.weights(N)])
        return w * self.scale / self.total_mass()

    def tail(self, N: int) -> float:
        """P(X > N) as a float."""
        return max(0.0, 1.0 - math.fsum(self.pmf(N)))

    def mean(self):
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.spec()


def _fmt(x):
    return str(as_fraction(x))


@dataclass(frozen=True, eq=True)
class Finite(OffspringWeights):
    values: tuple
    _cache: list = field(default=None, init=False, repr=False, compare=False, hash=False)
    family = "finite"

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        if not vals or any(v < 0 for v in vals) or sum(vals) == 0:
            raise ValueError("finite weights must be nonnegative and not all zero")
        object.__setattr__(self, "values", vals)
        super().__post_init__()

    def _extend(self, cache, upto):
        for i in range(len(cache), upto + 1):
            cache.append(self.values[i] if i < len(self.values) else Fraction(0))

    def max_index(self):
        return max(i for i, v in enumerate(self.values) if v > 0)

    def total_mass(self):
        return float(sum(self.values))

    def tail(self, N):
        s = sum(self.values[N + 1:], Fraction(0))
        return float(s / sum(self.values))

    def mean(self):
        return sum(i * v for i, v in enumerate(self.values)) / sum(self.values)

    def spec(self):
        return "finite:[" + ",".join(_fmt(v) for v in self.values) + "]"


@dataclass(frozen=True, eq=True)
class Geometric(OffspringWeights):
    """mu(i) = p (1-p)^i."""
    p: Fraction
    _cache: list = field(default=None, init=False, repr=False, compare=False, hash=False)
    family = "geometric"

    def __post_init__(self):
        p = as_fraction(self.p)
        if not 0 < p <= 1:
            raise ValueError("geometric parameter must lie in (0, 1]")
        object.__setattr__(self, "p", p)
        super().__post_init__()

    def _extend(self, cache, upto):
        q = 1 - self.p
        if not cache:
            cache.append(self.p)
        while len(cache) <= upto:
            cache.append(cache[-1] * q)

    def max_index(self):
        return 0 if self.p == 1 else None

    def tail(self, N):
        return float(1 - self.p) ** (N + 1)

    def mean(self):
        return (1 - self.p) / self.p

    def spec(self):
        return f"geometric:p={_fmt(self.p)}"


@dataclass(frozen=True, eq=True)
class PolyExp(OffspringWeights):
    """mu(i) = c [z^i] exp(P(z)) with P(z) = sum_j a_j z^j and c = exp(-P(1)).

    ``weight`` returns the rational part [z^i] exp(P); the constant c is the
    scale.  Coefficients follow n f_n = sum_j j a_j f_{n-j}.
    """
    a: tuple
    _cache: list = field(default=None, init=False, repr=False, compare=False, hash=False)
    family = "polyexp"
    scale_power = 1

    def __post_init__(self):
        a = tuple(as_fraction(x) for x in self.a)
        while a and a[-1] == 0:
            a = a[:-1]
        if not a or any(x < 0 for x in a):
            raise ValueError("polyexp coefficients must be nonnegative with a_p > 0")
        if reduce(math.gcd, [j for j, x in enumerate(a, 1) if x]) != 1:
            raise ValueError("gcd of the exponents carrying nonzero a_j must be 1")
        object.__setattr__(self, "a", a)
        super().__post_init__()

    @property
    def degree(self):
        return len(self.a)

    def poly(self):
        """Coefficients of P, index 0 is the constant term (zero)."""
        return (Fraction(0),) + self.a

    def _extend(self, cache, upto):
        ja = [(j, j * x) for j, x in enumerate(self.a, 1) if x]
        if not cache:
            cache.append(Fraction(1))
        for n in range(len(cache), upto + 1):
            s = sum((c * cache[n - j] for j, c in ja if j <= n), Fraction(0))
            cache.append(s / n)

    @property
    def scale(self):
        return math.exp(-float(sum(self.a)))

    def pmf(self, N):
        # float recurrence directly, avoids huge rationals for big N
        ja = [(j, float(j * x)) for j, x in enumerate(self.a, 1) if x]
        f = np.zeros(N + 1)
        f[0] = self.scale
        for n in range(1, N + 1):
            f[n] = sum(c * f[n - j] for j, c in ja if j <= n) / n
        return f

    def mean(self):
        return sum(j * x for j, x in enumerate(self.a, 1))

    def spec(self):
        return "polyexp:a=[" + ",".join(_fmt(x) for x in self.a) + "]"


@dataclass(frozen=True, eq=True)
class StableTail(OffspringWeights):
    """Offspring law with generating function z + m(1-z)^2 + c(1-z)^alpha."""
    alpha: Fraction
    m: Fraction
    c: Fraction
    _cache: list = field(default=None, init=False, repr=False, compare=False, hash=False)
    family = "stabletail"

    def __post_init__(self):
        al, m, c = as_fraction(self.alpha), as_fraction(self.m), as_fraction(self.c)
        if not 1 < al < 2:
            raise ValueError("alpha must lie in (1, 2)")
        if c <= 0 or m <= -1:
            raise ValueError("need c > 0 and m > -1")
        object.__setattr__(self, "alpha", al)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "c", c)
        super().__post_init__()

    def _extend(self, cache, upto):
        al, m, c = self.alpha, self.m, self.c
        if not cache:
            cache.extend([c, 1 - m - c * al, m + c * al * (al - 1) / 2])
            # signed binomial (-1)^i binom(alpha, i) at i = 2
            object.__setattr__(self, "_b", al * (al - 1) / 2)
            object.__setattr__(self, "_bi", 2)
        while len(cache) <= upto:
            i = self._bi
            b = -self._b * (al - i) / (i + 1)
            object.__setattr__(self, "_b", b)
            object.__setattr__(self, "_bi", i + 1)
            cache.append(c * b)

    def pmf(self, N):
        al, c = float(self.alpha), float(self.c)
        out = np.zeros(N + 1)
        head = [float(x) for x in self.weights(min(N, 2))]
        out[:len(head)] = head
        if N >= 3:
            i = np.arange(2, N)
            ratios = -(al - i) / (i + 1)
            b = al * (al - 1) / 2 * np.cumprod(ratios)
            out[3:] = c * b
        return out

    def tail(self, N):
        """P(X > N); for N >= 2 this is c (-1)^(N+1) binom(alpha-1, N)."""
        if N < 2:
            return max(0.0, 1.0 - math.fsum(self.pmf(N)))
        x = float(self.alpha) - 1
        # |binom(x, N)| for 0 < x < 1 equals x * prod_{j=1}^{N-1} (j - x) / N!
        logb = math.log(x) + special.gammaln(N - x) - special.gammaln(1 - x) - special.gammaln(N + 1)
        return float(self.c) * math.exp(logb)

    def mean(self):
        return 1 + self.m

    def spec(self):
        return f"stabletail:alpha={_fmt(self.alpha)},m={_fmt(self.m)},c={_fmt(self.c)}"


@dataclass(frozen=True, eq=True)
class PowerLaw(OffspringWeights):
    """Unnormalised weights w0 at 0 and c / i^(1+beta) for i >= 1.

    When 1+beta is an integer the weights are exact rationals; otherwise they
    are the exact binary values of the double precision evaluation.
    """
    beta: Fraction
    c: Fraction = Fraction(1)
    w0: Fraction = Fraction(1, 2)
    _cache: list = field(default=None, init=False, repr=False, compare=False, hash=False)
    family = "powerlaw"

    def __post_init__(self):
        b, c, w0 = as_fraction(self.beta), as_fraction(self.c), as_fraction(self.w0)
        if b <= 0 or c <= 0 or w0 <= 0:
            raise ValueError("need beta, c, w0 > 0")
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "w0", w0)
        super().__post_init__()

    def _extend(self, cache, upto):
        e = 1 + self.beta
        if not cache:
            cache.append(self.w0)
        for i in range(len(cache), upto + 1):
            if e.denominator == 1:
                cache.append(self.c / Fraction(i) ** e.numerator)
            else:
                cache.append(Fraction(float(self.c) * float(i) ** -float(e)))

    def total_mass(self):
        return float(self.w0) + float(self.c) * float(special.zeta(1 + float(self.beta)))

    def pmf(self, N):
        out = np.zeros(N + 1)
        out[0] = float(self.w0)
        if N >= 1:
            out[1:] = float(self.c) * np.arange(1, N + 1, dtype=float) ** -(1 + float(self.beta))
        return out / self.total_mass()

    def tail(self, N):
        z = float(special.zeta(1 + float(self.beta), N + 1))
        return float(self.c) * z / self.total_mass()

    def mean(self):
        if self.beta <= 1:
            return math.inf
        return float(self.c) * float(special.zeta(float(self.beta))) / self.total_mass()

    def spec(self):
        return f"powerlaw:beta={_fmt(self.beta)},c={_fmt(self.c)},w0={_fmt(self.w0)}"


# -- validation -----------------------------------------------------------------

def validate_for(d: OffspringWeights, mode: str):
    """List of human readable problems with using d in the given mode."""
    probs = []
    w = d.weights(3)
    if w[0] <= 0:
        probs.append("mu(0) must be positive")
    top = d.max_index()
    if top is not None and top < 2 and mode in ("leaves", "internal"):
        probs.append("support must reach outdegree 2 or more")
    if isinstance(d, StableTail):
        if w[1] < 0:
            probs.append("mu(1) = 1 - m - c*alpha is negative")
        if w[2] < 0:
            probs.append("mu(2) = m + c*alpha*(alpha-1)/2 is negative")
    if mode == "leaves" and w[1] <= 0:
        probs.append("leaves conditioning here needs mu(1) > 0")
    if mode == "internal" and w[0] >= 1 and top == 0:
        probs.append("mu(0) < 1 is required")
    return probs


# -- text specs -------------------------------------------------------------------

_NUM = re.compile(r"\s*(-?\d+(?:/\d+|\.\d+)?)\s*")


def _parse_list(text, pos):
    if pos >= len(text) or text[pos] != "[":
        raise SpecParseError(text, pos, "expected '['")
    end = text.find("]", pos)
    if end < 0:
        raise SpecParseError(text, pos, "missing ']'")
    items = []
    i = pos + 1
    body = text[i:end]
    if body.strip():
        for part in body.split(","):
            if not _NUM.fullmatch(part):
                raise SpecParseError(text, i, f"not a number: {part.strip()!r}")
            items.append(Fraction(part.strip()))
            i += len(part) + 1
    return items, end + 1


def _parse_kv(text, pos, allowed):
    out = {}
    while pos < len(text):
        eq = text.find("=", pos)
        if eq < 0:
            raise SpecParseError(text, pos, "expected key=value")
        key = text[pos:eq].strip()
        if key not in allowed:
            raise SpecParseError(text, pos, f"unknown parameter {key!r}")
        if key in out:
            raise SpecParseError(text, pos, f"duplicate parameter {key!r}")
        vpos = eq + 1
        if text[vpos:vpos + 1] == "[":
            out[key], pos = _parse_list(text, vpos)
        else:
            comma = text.find(",", vpos)
            comma = len(text) if comma < 0 else comma
            raw = text[vpos:comma]
            if not _NUM.fullmatch(raw):
                raise SpecParseError(text, vpos, f"not a number: {raw.strip()!r}")
            out[key] = Fraction(raw.strip())
            pos = comma
        if pos < len(text):
            if text[pos] != ",":
                raise SpecParseError(text, pos, "expected ','")
            pos += 1
    return out


def parse_family(text: str) -> OffspringWeights:
    """Parse e.g. ``geometric:p=1/2`` or ``finite:[1/2,0,1/2]``."""
    if ":" not in text:
        raise SpecParseError(text, 0, "expected '<family>:<parameters>'")
    name, rest = text.split(":", 1)
    name = name.strip().lower()
    pos = len(name) + 1
    try:
        if name == "finite":
            vals, end = _parse_list(text, pos)
            if end != len(text.rstrip()):
                raise SpecParseError(text, end, "trailing characters")
            return Finite(tuple(vals))
        if name == "geometric":
            kv = _parse_kv(text, pos, {"p"})
            return Geometric(kv["p"])
        if name == "polyexp":
            kv = _parse_kv(text, pos, {"a"})
            return PolyExp(tuple(kv["a"]))
        if name == "stabletail":
            kv = _parse_kv(text, pos, {"alpha", "m", "c"})
            return StableTail(kv["alpha"], kv.get("m", Fraction(0)), kv["c"])
        if name == "powerlaw":
            kv = _parse_kv(text, pos, {"beta", "c", "w0"})
            return PowerLaw(kv["beta"], kv.get("c", Fraction(1)), kv.get("w0", Fraction(1, 2)))
    except KeyError as exc:
        raise SpecParseError(text, len(text), f"missing parameter {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(text, pos, str(exc)) from None
    raise SpecParseError(text, 0, f"unknown family {name!r}")
