"""Exact truncated power series and the generating functions G^a."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from math import comb, factorial

import numpy as np

from ._bigpoly import integerize, polymul
from .offspring import OffspringWeights, PolyExp
from .trees import PlaneTree


class TruncSeries:
    """sum_{i<=N} (nums[i] / den) z^i, every coefficient carrying
    ``scale_power`` copies of the family scale."""

    __slots__ = ("nums", "den", "scale_power")

    def __init__(self, nums, den=1, scale_power=0):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            nums, den = [-x for x in nums], -den
        self.nums = [int(x) for x in nums]
        self.den = int(den)
        self.scale_power = scale_power

    @classmethod
    def from_fractions(cls, coeffs, scale_power=0):
        nums, den = integerize([Fraction(c) for c in coeffs])
        return cls(nums, den, scale_power)

    @classmethod
    def from_offspring(cls, d: OffspringWeights, N: int):
        return cls.from_fractions(d.weights(N), d.scale_power)

    @property
    def order(self) -> int:
        return len(self.nums) - 1

    def coeff(self, i: int) -> Fraction:
        if i < 0 or i > self.order:
            raise IndexError(i)
        return Fraction(self.nums[i], self.den)

    @property
    def coeffs(self):
        return tuple(Fraction(x, self.den) for x in self.nums)

    def truncate(self, N):
        if N > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncSeries(self.nums[:N + 1], self.den, self.scale_power)

    def _same_scale(self, other):
        if self.scale_power != other.scale_power:
            raise ValueError("adding series with different scale powers")

    def __add__(self, other):
        self._same_scale(other)
        N = min(self.order, other.order)
        return TruncSeries([self.nums[i] * other.den + other.nums[i] * self.den for i in range(N + 1)],
                           self.den * other.den, self.scale_power)

    def __neg__(self):
        return TruncSeries([-x for x in self.nums], self.den, self.scale_power)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scalar_mul(other)
        N = min(self.order, other.order)
        return TruncSeries(polymul(self.nums, other.nums, N), self.den * other.den,
                           self.scale_power + other.scale_power)

    def scalar_mul(self, q):
        q = Fraction(q)
        return TruncSeries([x * q.numerator for x in self.nums], self.den * q.denominator,
                           self.scale_power)

    def derivative(self):
        return TruncSeries([i * self.nums[i] for i in range(1, len(self.nums))],
                           self.den, self.scale_power)

    def shift_div_z(self, constant=None):
        """(A - constant) / z; the constant defaults to A(0)."""
        if constant is not None and Fraction(constant) != self.coeff(0):
            raise ValueError("series is not divisible by z after subtracting the constant")
        return TruncSeries(self.nums[1:], self.den, self.scale_power)

    def pow(self, m: int):
        if m < 0:
            raise ValueError("negative power")
        result = TruncSeries([1] + [0] * self.order, 1, 0)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def normalized(self):
        from ._bigpoly import content
        g = math.gcd(content(self.nums), self.den)
        if g > 1:
            return TruncSeries([x // g for x in self.nums], self.den // g, self.scale_power)
        return self

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.order != other.order or self.scale_power != other.scale_power:
            return False
        return all(a * other.den == b * self.den for a, b in zip(self.nums, other.nums))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order >= 6 else ""
        return f"TruncSeries([{head}{more}], order={self.order}, scale_power={self.scale_power})"

    def to_json(self):
        return json.dumps({"coeffs": [str(c) for c in self.coeffs], "scale_power": self.scale_power})


def from_offspring(d, N):
    return TruncSeries.from_offspring(d, N)


def build_Ga(d: OffspringWeights, a: PlaneTree, N: int) -> TruncSeries:
    """G^a = Ftilde^{phi_0(a)} * prod_{internal u} F^{(c_u)}, to order N.

    Ftilde = (F - mu(0)) / z.  The scale power equals |a|.
    """
    cmax = max(a.degrees)
    F = TruncSeries.from_offspring(d, N + max(cmax, 1))
    ders = {0: F.shift_div_z().truncate(N)}
    cur = F
    for c in range(1, cmax + 1):
        cur = cur.derivative()
        if c in a.degrees:
            ders[c] = cur.truncate(N)
    out = None
    for c in a.degrees:
        out = ders[c] if out is None else out * ders[c]
    return out


def zeta_weight(a: PlaneTree) -> Fraction:
    """1 / prod_u c_u!."""
    p = 1
    for c in a.degrees:
        p *= factorial(c)
    return Fraction(1, p)


# -- polynomial-exponential factorisation ---------------------------------------

def _padd(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def _pder(p):
    return [i * p[i] for i in range(1, len(p))] or [Fraction(0)]


def derivative_polys(P, jmax):
    """Polynomials P_j with F^{(j)} = P_j F when F = exp(P):
    P_1 = P', P_{j+1} = P_j' + P' P_j."""
    dP = _pder(list(P))
    out = {0: [Fraction(1)], 1: dP}
    for j in range(1, jmax):
        out[j + 1] = _padd(_pder(out[j]), _pmul(dP, out[j]))
    return out


def Qa_numerator(d: PolyExp, a: PlaneTree):
    """Polynomial prod_{internal u} P_{c_u}; Q_a is this times z^{-phi_0(a)}."""
    polys = derivative_polys(d.poly(), max(a.degrees))
    out = [Fraction(1)]
    for c in a.degrees:
        if c:
            out = _pmul(out, polys[c])
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def Qa_degree_leading(d: PolyExp, a: PlaneTree):
    """(degree of Q_a, leading coefficient)."""
    num = Qa_numerator(d, a)
    return len(num) - 1 - a.phi(0), num[-1]


def check_polyexp_factorization(d: PolyExp, a: PlaneTree, N: int, signed=True) -> bool:
    """Exact check, to order N, of

        G^a = Q_a(z) * sum_j binom(phi_0, j) (-mu(0))^j F^{k-j}.

    With ``signed=False`` the alternating sign is dropped.
    """
    k, f0 = len(a), a.phi(0)
    M = N + f0
    G = build_Ga(d, a, N)
    F = TruncSeries.from_offspring(d, M)
    mu0 = F.coeff(0)
    S = None
    for j in range(f0 + 1):
        term = F.pow(k - j).scalar_mul(comb(f0, j) * mu0 ** j * ((-1) ** j if signed else 1))
        # every term carries k scale factors: mu(0)^j F^{k-j}
        term.scale_power = k * d.scale_power
        S = term if S is None else S + term
    R = TruncSeries.from_fractions(Qa_numerator(d, a) + [0] * M).truncate(M) * S
    rc = R.coeffs
    if any(c != 0 for c in rc[:f0]):
        return False
    return all(rc[f0 + i] == G.coeff(i) for i in range(N + 1)) and R.scale_power == G.scale_power


# -- coefficient asymptotics ------------------------------------------------------

def coeff_ratio_probe(d: PolyExp, m: int, n_grid):
    """For e_n = [z^n] exp(m P(z)) return n -> (e_{n+1}/e_n) / (m p a_p)^{1/p} n^{-1/p}.

    Runs the recurrence n e_n = sum_j j m a_j e_{n-j} in floats with a
    rescaled window, so nothing under- or overflows.
    """
    p = d.degree
    ja = [(j, float(j * m * x)) for j, x in enumerate(d.a, 1) if x]
    nmax = max(n_grid) + 1
    want = set(n_grid)
    win = [0.0] * (p - 1) + [1.0]   # e_{n-p+1..n}, rescaled
    logs = [0.0]                   # log e_n up to the rescaling
    logscale = 0.0
    out = {}
    lead = float(m * p * d.a[-1]) ** (1.0 / p)
    for n in range(1, nmax + 1):
        val = sum(c * win[-j] for j, c in ja if j <= len(win)) / n
        win = win[1:] + [val]
        big = max(abs(x) for x in win)
        if big > 0:
            win = [x / big for x in win]
            logscale += math.log(big)
        logs.append(logscale + math.log(win[-1]) if win[-1] > 0 else -math.inf)
    for n in sorted(want):
        ratio = math.exp(logs[n + 1] - logs[n])
        out[n] = ratio * n ** (1.0 / p) / lead
    return out


def coefficient_array(series: TruncSeries) -> np.ndarray:
    return np.array([float(c) for c in series.coeffs])
