"""Exact laws of reduced trees, outdegree vectors and limit objects."""
from __future__ import annotations

import itertools
import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

import numpy as np

from ._bigpoly import integerize, polymul
from .errors import EmptyConditioning, InadmissibleK, ShapeMismatch
from .offspring import OffspringWeights
from .series import TruncSeries, build_Ga, zeta_weight
from .trees import PlaneTree, enumerate_trees, no_unary_trees, rotate_to_path, star


class Dist:
    """Finite exact law, atoms -> Fraction probabilities summing to 1."""

    def __init__(self, atoms):
        atoms = {x: Fraction(p) for x, p in dict(atoms).items() if p != 0}
        if any(p < 0 for p in atoms.values()):
            raise ValueError("negative probability")
        self.atoms = atoms

    @classmethod
    def from_masses(cls, masses):
        total = sum(masses.values(), Fraction(0))
        if total == 0:
            raise EmptyConditioning("all masses vanish")
        return cls({x: Fraction(m) / total for x, m in masses.items()})

    def __getitem__(self, x):
        return self.atoms.get(x, Fraction(0))

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def items(self):
        return self.atoms.items()

    def __eq__(self, other):
        return isinstance(other, Dist) and self.atoms == other.atoms

    def total(self):
        return sum(self.atoms.values(), Fraction(0))

    def support(self):
        return sorted(self.atoms)

    def _key(self, x):
        return x.key() if isinstance(x, PlaneTree) else ",".join(map(str, x))

    def to_json(self):
        rows = [{"atom": self._key(x), "prob": str(p), "float": float(p)}
                for x, p in sorted(self.atoms.items())]
        return json.dumps(rows, indent=1)

    def __repr__(self):
        inner = ", ".join(f"{self._key(x)}: {p}" for x, p in sorted(self.atoms.items())[:8])
        return f"{type(self).__name__}({{{inner}{', ...' if len(self) > 8 else ''}}})"


class TreeDist(Dist):
    pass


class IntSeqDist(Dist):
    pass


# -- maximal profiles -----------------------------------------------------------

@dataclass(frozen=True)
class MaxProfile:
    b: dict            # outdegree (>= 2) -> count
    pmax: int
    admissible: bool

    def full_profile(self, k):
        out = {0: k}
        out.update(self.b)
        return out


def bmax(support, k: int) -> MaxProfile:
    """Maximise sum_{j>=2} b_j subject to sum_j b_j (j-1) = k-1, b_j > 0 only on support."""
    js = sorted(j for j in support if 2 <= j <= k)
    target = k - 1
    # best[s] = (count, profile) maximal count reaching sum s
    best = {0: (0, ())}
    for s in range(1, target + 1):
        cand = None
        for j in js:
            prev = best.get(s - (j - 1))
            if prev is None:
                continue
            c = prev[0] + 1
            prof = tuple(sorted(prev[1] + (j,)))
            if cand is None or c > cand[0] or (c == cand[0] and prof < cand[1]):
                cand = (c, prof)
        if cand is not None:
            best[s] = cand
    if target not in best:
        return MaxProfile({}, 0, False)
    cnt, prof = best[target]
    b = {}
    for j in prof:
        b[j] = b.get(j, 0) + 1
    return MaxProfile(dict(sorted(b.items())), cnt, True)


def support_of(d: OffspringWeights, k: int):
    return d.support_upto(max(k, 2))


# -- leaves conditioning ----------------------------------------------------------

@lru_cache(maxsize=128)
def reduced_dist_leaves(d: OffspringWeights, n: int, k: int) -> TreeDist:
    """Law of the tree obtained by erasing unary vertices from a BGW tree
    conditioned to have n vertices and k leaves."""
    if k < 1 or n < k:
        raise EmptyConditioning(f"no tree with {n} vertices and {k} leaves")
    mu = d.weights(max(2 * k, 2))
    masses = {}
    for a in no_unary_trees(k, max_size=n):
        m = len(a)
        if m > n:
            continue
        w = comb(n - 1, m - 1) * mu[0] ** k * d.weight(1) ** (n - m)
        for c in a.degrees:
            if c >= 2:
                w *= mu[c]
        if w:
            masses[a] = w
    if not masses:
        raise EmptyConditioning(f"T^{k}_{n} has zero probability")
    return TreeDist.from_masses(masses)


def prob_total_leaves(d: OffspringWeights, n: int, k: int):
    """P(T has n vertices and k leaves) as (rational part, scale power)."""
    if n < 1 or k < 1:
        return Fraction(0), 0
    mu0 = d.weight(0)
    Ft = TruncSeries.from_fractions(d.weights(k)[1:k + 1])
    inner = Ft.pow(n - k).coeff(k - 1) if n >= k else Fraction(0)
    val = mu0 ** k * Fraction(comb(n, k), n) * inner
    return val, n * d.scale_power


# -- internal conditioning --------------------------------------------------------

@lru_cache(maxsize=128)
def reduced_dist_internal(d: OffspringWeights, n: int, k: int) -> TreeDist:
    """Law of the tree obtained by erasing leaves from a BGW tree conditioned
    to have n vertices, k of them internal."""
    if k < 1 or n < k + 1:
        raise EmptyConditioning(f"no tree with {n} vertices and {k} internal vertices")
    masses = {}
    for a in enumerate_trees(k, bound=None):
        M = n - k - a.phi(0)
        if M < 0:
            continue
        w = zeta_weight(a) * build_Ga(d, a, M).coeff(M)
        if w:
            masses[a] = w
    if not masses:
        raise EmptyConditioning(f"T_({n},{k}) has zero probability")
    return TreeDist.from_masses(masses)


def _partitions(total, parts, cap):
    """Non-increasing tuples of `parts` nonnegative ints summing to total, entries <= cap."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    lo = -(-total // parts)
    for first in range(min(total, cap), lo - 1, -1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _perm_count(u):
    out = factorial(len(u))
    for _, g in itertools.groupby(u):
        out //= factorial(len(list(g)))
    return out


@lru_cache(maxsize=64)
def outdegree_sorted_dist(d: OffspringWeights, n: int, k: int) -> IntSeqDist:
    """Law of the decreasing rearrangement of (c_u - 1) over the k internal
    vertices of a tree conditioned on n vertices and k internal vertices."""
    S = n - k - 1
    if k < 1 or S < 0:
        raise EmptyConditioning("need n >= k + 1")
    mu = d.weights(S + 1)
    masses = {}
    for u in _partitions(S, k, S):
        w = Fraction(_perm_count(u))
        for y in u:
            w *= mu[y + 1]
            if not w:
                break
        if w:
            masses[u] = w
    if not masses:
        raise EmptyConditioning("zero probability")
    return IntSeqDist.from_masses(masses)


class LeafTotals:
    """Per-vertex numbers of extra leaves for a fixed reduced tree a.

    Vertex u of a receives i_u leaves beyond those forced (one for each leaf
    of a) with joint weight prod_u binom(c_u + i_u, c_u) mu(ctilde_u + i_u),
    ctilde_u = max(c_u, 1), over sum_u i_u = M = n - k - phi_0(a).

    Weights are held as integers over per-vertex common denominators.  The
    suffix tables B_j(s) = weight of vertices j..k-1 sharing s leaves give the
    total and drive exact backward sampling.
    """

    def __init__(self, d: OffspringWeights, a: PlaneTree, n: int):
        self.a, self.n = a, n
        k = len(a)
        self.M = M = n - k - a.phi(0)
        self.nums, self.dens = [], []
        if M < 0:
            self.total = Fraction(0)
            self.total_int = 0
            return
        mu = d.weights(M + max(a.degrees) + 1)
        for c in a.degrees:
            ct = max(c, 1)
            nums, den = integerize([comb(c + i, c) * mu[ct + i] for i in range(M + 1)])
            self.nums.append(nums)
            self.dens.append(den)
        suffix = [None] * (k + 1)
        suffix[k] = [1] + [0] * M
        suffix[k - 1] = self.nums[k - 1]
        for j in range(k - 2, 0, -1):
            suffix[j] = polymul(self.nums[j], suffix[j + 1], M)
        self.suffix = suffix
        if k == 1:
            self.total_int = self.nums[0][M]
        else:
            self.total_int = sum(x * y for x, y in zip(self.nums[0], reversed(suffix[1])))
        self.total = Fraction(self.total_int, prod(self.dens))

    def marginal(self, j: int):
        """Exact law of i_j as a list of Fractions over 0..M."""
        others = [1] + [0] * self.M
        for t, nums in enumerate(self.nums):
            if t != j:
                others = polymul(others, nums, self.M)
        w = [self.nums[j][i] * others[self.M - i] for i in range(self.M + 1)]
        tot = sum(w)
        return [Fraction(x, tot) for x in w]

    def sample_many(self, rng, size: int) -> np.ndarray:
        """size x k integer array of totals (i_u), drawn exactly."""
        k = len(self.a)
        if self.total_int == 0:
            raise EmptyConditioning("reduced tree has zero weight")
        out = np.zeros((size, k), dtype=np.int64)
        rem = np.full(size, self.M, dtype=np.int64)
        for j in range(k - 1):
            tail = self.suffix[j + 1]
            for s in np.unique(rem):
                idx = np.nonzero(rem == s)[0]
                s = int(s)
                h = self.nums[j]
                cum = list(itertools.accumulate(h[i] * tail[s - i] for i in range(s + 1)))
                tot = cum[-1]
                draws = [bisect_right(cum, rng.randbelow(tot)) for _ in range(len(idx))]
                out[idx, j] = draws
            rem -= out[:, j]
        out[:, k - 1] = rem
        return out


@lru_cache(maxsize=32)
def leaf_totals(d: OffspringWeights, a: PlaneTree, n: int) -> LeafTotals:
    return LeafTotals(d, a, n)


def pervertex_leaf_totals(d, a, n) -> LeafTotals:
    return leaf_totals(d, a, n)


def reduced_dist_internal_tables(d, n, k) -> TreeDist:
    """Same law as reduced_dist_internal, computed through LeafTotals."""
    masses = {}
    for a in enumerate_trees(k, bound=None):
        t = leaf_totals(d, a, n).total
        if t:
            masses[a] = t
    return TreeDist.from_masses(masses)


# -- limit laws -------------------------------------------------------------------

@dataclass(frozen=True)
class LeavesMax:
    dist: OffspringWeights
    k: int


@dataclass(frozen=True)
class Star:
    k: int


@dataclass(frozen=True)
class Transfer:
    alpha: Fraction
    k: int


@dataclass(frozen=True)
class PoissonType:
    k: int


def rising(x, m):
    out = Fraction(1)
    for j in range(m):
        out *= x + j
    return out


def falling(x, m):
    out = Fraction(1)
    for j in range(m):
        out *= x - j
    return out


def trees_with_profile(profile):
    """All plane trees with the given outdegree profile, through rotations of
    the distinct arrangements of the step multiset."""
    steps = []
    for j, c in sorted(profile.items()):
        steps.extend([j - 1] * c)
    if sum(steps) != -1:
        return []
    seen = set()
    out = []
    for perm in _multiset_perms(sorted(steps)):
        t = PlaneTree.from_steps(rotate_to_path(perm))
        if t not in seen:
            seen.add(t)
            out.append(t)
    return sorted(out)


def _multiset_perms(items):
    # classic next-permutation walk over a sorted list
    a = list(items)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def limit_reduced(mode) -> TreeDist:
    if isinstance(mode, LeavesMax):
        prof = bmax(support_of(mode.dist, mode.k), mode.k)
        if not prof.admissible:
            raise InadmissibleK(f"k={mode.k} admits no maximal profile for this support")
        trees = trees_with_profile(prof.full_profile(mode.k))
        return TreeDist({t: Fraction(1, len(trees)) for t in trees})
    if isinstance(mode, Star):
        return TreeDist({star(mode.k): 1})
    if isinstance(mode, Transfer):
        al = Fraction(mode.alpha)
        masses = {}
        for a in enumerate_trees(mode.k, bound=None):
            masses[a] = prod((rising(al, c) / factorial(c) for c in a.degrees), start=Fraction(1))
        return TreeDist.from_masses(masses)
    if isinstance(mode, PoissonType):
        return TreeDist.from_masses({a: zeta_weight(a) for a in enumerate_trees(mode.k, bound=None)})
    raise TypeError(f"unknown limit mode {mode!r}")


def uniform_on(trees) -> TreeDist:
    trees = list(trees)
    return TreeDist({t: Fraction(1, len(trees)) for t in trees})


# -- identities -------------------------------------------------------------------

def _integer_partitions(p, maxpart=None):
    if maxpart is None:
        maxpart = p
    if p == 0:
        yield ()
        return
    for first in range(min(p, maxpart), 0, -1):
        for rest in _integer_partitions(p - first, first):
            yield (first,) + rest


def gamma_ratio_identity_check(p: int, alpha) -> bool:
    """sum over multiplicity vectors m with sum_i i m_i = p of
    p!/prod m_i! * alpha (alpha-1) ... (alpha-|m|+1)  ==  alpha (alpha+1) ... (alpha+p-1)."""
    al = Fraction(alpha)
    lhs = Fraction(0)
    for part in _integer_partitions(p):
        mult = {}
        for x in part:
            mult[x] = mult.get(x, 0) + 1
        coef = factorial(p)
        for c in mult.values():
            coef //= factorial(c)
        lhs += coef * falling(al, len(part))
    return lhs == rising(al, p)


def dirichlet_moment(params, exps) -> Fraction:
    """E[prod X_j^{e_j}] for X ~ Dirichlet(params), exact for rational params."""
    params = [Fraction(x) for x in params]
    num = prod((rising(a, e) for a, e in zip(params, exps)), start=Fraction(1))
    return num / rising(sum(params), sum(exps))


def dirichlet_aggregation_moment_check(alphas, k, lambdas, split=None) -> bool:
    """Compare mixed moments of (X_1 Y_1, ..., X_1 Y_k, X_2, ..., X_n), with
    X ~ Dir(alphas) and independent Y ~ Dir(split), against those of
    Dir(alpha_1/k, ..., alpha_1/k, alpha_2, ..., alpha_n).

    ``lambdas`` is (first block of k exponents, remaining n-1 exponents).
    ``split`` defaults to (1, ..., 1).
    """
    first, rest = lambdas
    alphas = [Fraction(x) for x in alphas]
    if len(first) != k or len(rest) != len(alphas) - 1:
        raise ShapeMismatch("exponent blocks do not match k and the number of alphas")
    split = [Fraction(1)] * k if split is None else [Fraction(x) for x in split]
    lhs = dirichlet_moment(split, first) * dirichlet_moment(alphas, [sum(first)] + list(rest))
    target = [alphas[0] / k] * k + alphas[1:]
    rhs = dirichlet_moment(target, list(first) + list(rest))
    return lhs == rhs
