"""Random generation: plain and conditioned BGW trees, Dirichlet vectors,
the approximating trees D_{n,k} and uniform maximal-profile trees.

Samplers called "exact" draw from the exact rational law: every discrete
choice is an inverse-CDF lookup of a uniform integer below an exact integer
total.  Floats appear only in proposals (rejection, ``sample_bgw``) and in
the approximating construction ``sample_Dnk``.
"""
from __future__ import annotations

import time
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate

import numpy as np

from ._bigpoly import integerize
from .errors import EmptyConditioning, GaveUp, InadmissibleK
from .exact import bmax, leaf_totals, reduced_dist_leaves, support_of
from .offspring import OffspringWeights
from .trees import (CoreLeafDecomp, LeafAncestorDecomp, PlaneTree, decompose_leaves,
                    enumerate_trees, recompose_leaves, recompose_unary, rotate_to_path, star)


class RngStream:
    """Seeded PCG64 stream; substreams come from SeedSequence spawn keys, so a
    (seed, substream) pair gives the same draws on every platform."""

    algorithm = "numpy.PCG64+SeedSequence"

    def __init__(self, seed: int = 0, substream: int | tuple = ()):
        key = substream if isinstance(substream, tuple) else (substream,)
        self.seed = seed
        self.key = key
        self.gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))

    def substream(self, i: int) -> "RngStream":
        return RngStream(self.seed, self.key + (i,))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), exact for arbitrarily large n."""
        n = int(n)
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        if n < 2 ** 62:
            return int(self.gen.integers(0, n))
        bits = n.bit_length()
        words = (bits + 63) // 64
        shift = words * 64 - bits
        while True:
            raw = self.gen.integers(0, 2 ** 64, size=words, dtype=np.uint64, endpoint=False)
            x = int.from_bytes(raw.tobytes(), "little") >> shift
            if x < n:
                return x

    def random(self, size=None):
        return self.gen.random(size)

    def describe(self):
        return f"{self.algorithm} seed={self.seed} substream={list(self.key)}"


@dataclass
class SamplerReport:
    samples: int = 0
    rejections: int = 0
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Overflow:
    """Returned by sample_bgw when the tree exceeds the vertex budget."""
    vertices: int


class ExactCategorical:
    """Exact draws from finitely many outcomes with rational weights."""

    def __init__(self, outcomes, weights):
        self.outcomes = list(outcomes)
        nums, _ = integerize([Fraction(w) for w in weights])
        self.cum = list(accumulate(nums))
        if not self.cum or self.cum[-1] <= 0:
            raise EmptyConditioning("all weights vanish")

    @classmethod
    def from_dist(cls, dist):
        items = sorted(dist.items())
        return cls([x for x, _ in items], [p for _, p in items])

    def sample(self, rng: RngStream):
        return self.outcomes[bisect_right(self.cum, rng.randbelow(self.cum[-1]))]


@lru_cache(maxsize=64)
def _cat_for(builder, *args):
    return ExactCategorical.from_dist(builder(*args))


# -- elementary pieces ------------------------------------------------------------

def sample_composition(total: int, parts: int, rng: RngStream):
    """Uniform weak composition of total into parts nonnegative summands."""
    if parts < 1:
        raise ValueError("need at least one part")
    if total < 0:
        raise ValueError("negative total")
    if parts == 1:
        return (total,)
    bars = np.sort(rng.gen.choice(total + parts - 1, size=parts - 1, replace=False))
    edges = np.concatenate(([-1], bars, [total + parts - 1]))
    return tuple(int(x) for x in np.diff(edges) - 1)


def sample_dirichlet(params, rng: RngStream):
    g = rng.gen.standard_gamma(np.asarray(params, dtype=float))
    return g / g.sum()


class _FloatOffspring:
    """Inverse-CDF float sampler for the offspring law, table grown on demand."""

    def __init__(self, d: OffspringWeights, cap: int):
        self.d, self.cap = d, cap
        self._grow(min(cap, 1024) if d.max_index() is None else min(cap, d.max_index()))

    def _grow(self, N):
        self.N = N
        self.cdf = np.cumsum(self.d.pmf(N))
        top = self.d.max_index()
        if top is not None and N >= top:
            self.cdf[-1] = max(self.cdf[-1], 1.0)

    def draw(self, rng: RngStream, size: int):
        u = rng.random(size)
        while self.N < self.cap and u.max() >= self.cdf[-1]:
            self._grow(min(self.cap, 4 * self.N))
        x = np.searchsorted(self.cdf, u, side="right")
        return x  # values > cap mean "larger than cap"


def sample_bgw(d: OffspringWeights, rng: RngStream, max_vertices: int = 10 ** 6):
    """Unconditioned BGW tree, generated in depth-first order (offspring
    numbers read along the Lukasiewicz path).  Returns Overflow past the budget."""
    sampler = _FloatOffspring(d, max_vertices)
    degrees = []
    pending = 1
    chunk = 64
    while pending > 0:
        xs = sampler.draw(rng, chunk)
        for x in xs:
            x = int(x)
            degrees.append(x)
            pending += x - 1
            if pending == 0:
                break
            if len(degrees) + pending > max_vertices or x > max_vertices:
                return Overflow(len(degrees) + pending)
        chunk = min(4 * chunk, 1 << 16)
    return PlaneTree(tuple(degrees))


# -- leaves conditioning ------------------------------------------------------------

def sample_leaves_decomp(d, n, k, rng) -> LeafAncestorDecomp:
    cat = _cat_for(reduced_dist_leaves, d, n, k)
    a = cat.sample(rng)
    anc = sample_composition(n - len(a), len(a), rng)
    return LeafAncestorDecomp(a, anc)


def sample_leaves_exact(d: OffspringWeights, n: int, k: int, rng: RngStream) -> PlaneTree:
    """BGW tree conditioned on n vertices and k leaves: draw the reduced tree
    from its exact law, then the unary chain lengths uniformly."""
    return recompose_unary(sample_leaves_decomp(d, n, k, rng))


@lru_cache(maxsize=32)
def _step_tables(d, n, k):
    """S_j(s): weight of j i.i.d. nonnegative steps (weight mu(y+1)) summing to s <= k-1."""
    K = k - 1
    nu = [d.weight(y + 1) for y in range(K + 1)]
    tables = [[Fraction(1)] + [Fraction(0)] * K]
    for _ in range(n - k):
        prev = tables[-1]
        tables.append([sum((nu[y] * prev[s - y] for y in range(s + 1)), Fraction(0))
                       for s in range(K + 1)])
    return nu, tables


def sample_leaves_cycle(d: OffspringWeights, n: int, k: int, rng: RngStream) -> PlaneTree:
    """Cycle-lemma sampler: draw the n-k nonnegative steps conditioned on
    summing to k-1, place the k down-steps at uniform positions, then rotate
    to the unique valid path."""
    if n == k:
        if n == 1:
            return PlaneTree((0,))
        raise EmptyConditioning("no tree with all vertices leaves")
    nu, tables = _step_tables(d, n, k)
    if tables[n - k][k - 1] == 0:
        raise EmptyConditioning("zero probability")
    ups = []
    s = k - 1
    for j in range(n - k, 0, -1):
        rest = tables[j - 1]
        if s == 0:
            ups.extend([0] * j)
            break
        w = [nu[y] * rest[s - y] for y in range(s + 1)]
        y = ExactCategorical(range(s + 1), w).sample(rng)
        ups.append(y)
        s -= y
    down = set(int(i) for i in rng.gen.choice(n, size=k, replace=False))
    seq = []
    it = iter(ups)
    for i in range(n):
        seq.append(-1 if i in down else next(it))
    return PlaneTree.from_steps(rotate_to_path(seq))


# -- internal conditioning ------------------------------------------------------------

@lru_cache(maxsize=32)
def _internal_core_law(d, n, k):
    cores, totals = [], []
    for a in enumerate_trees(k, bound=None):
        lt = leaf_totals(d, a, n)
        if lt.total:
            cores.append(a)
            totals.append(lt.total)
    if not cores:
        raise EmptyConditioning(f"T_({n},{k}) has zero probability")
    return ExactCategorical(cores, totals)


def sample_internal_decomps(d: OffspringWeights, n: int, k: int, rng: RngStream, size: int):
    """List of CoreLeafDecomp for `size` independent trees conditioned on n
    vertices and k internal vertices."""
    law = _internal_core_law(d, n, k)
    cores = [law.sample(rng) for _ in range(size)]
    out = [None] * size
    groups = {}
    for i, a in enumerate(cores):
        groups.setdefault(a, []).append(i)
    for a, idx in groups.items():
        totals = leaf_totals(d, a, n).sample_many(rng, len(idx))
        for row, i in zip(totals, idx):
            seq = []
            for c, extra in zip(a.degrees, row):
                seq.extend(sample_composition(int(extra), c + 1, rng))
            out[i] = CoreLeafDecomp(a, tuple(seq))
    return out


def sample_internal_exact(d: OffspringWeights, n: int, k: int, rng: RngStream) -> PlaneTree:
    return recompose_leaves(sample_internal_decomps(d, n, k, rng, 1)[0])


def sample_exact(d, n, k, mode, rng):
    if mode == "leaves":
        return sample_leaves_exact(d, n, k, rng)
    if mode == "internal":
        return sample_internal_exact(d, n, k, rng)
    raise ValueError(f"unknown mode {mode!r}")


# -- rejection ---------------------------------------------------------------------

def sample_rejection_batch(d: OffspringWeights, n: int, k: int, mode: str, rng: RngStream,
                           size: int, max_tries: int = 10 ** 9, batch: int = 100_000):
    """Independent BGW trees accepted on having n vertices and k leaves
    (mode "leaves") or k internal vertices (mode "internal").

    Each candidate is a BGW tree explored depth-first and cut off after n
    offspring draws, which is all the information needed to decide whether
    it has exactly n vertices; candidates are generated in vectorised blocks.
    """
    if mode not in ("leaves", "internal"):
        raise ValueError(f"unknown mode {mode!r}")
    target_leaves = k if mode == "leaves" else n - k
    sampler = _FloatOffspring(d, n)
    out = []
    tries = 0
    t0 = time.perf_counter()
    while len(out) < size:
        if tries >= max_tries:
            raise GaveUp(tries)
        b = min(batch, max_tries - tries)
        X = sampler.draw(rng, b * n).reshape(b, n)
        tries += b
        W = np.cumsum(X - 1, axis=1)
        ok = (W[:, :-1] >= 0).all(axis=1) & (W[:, -1] == -1)
        ok &= (X == 0).sum(axis=1) == target_leaves
        for row in X[ok]:
            out.append(PlaneTree(tuple(int(x) for x in row)))
            if len(out) == size:
                break
    rep = SamplerReport(len(out), tries - len(out), time.perf_counter() - t0)
    return out, rep


def sample_rejection(d, n, k, mode, rng, max_tries=10 ** 9) -> PlaneTree:
    trees, _ = sample_rejection_batch(d, n, k, mode, rng, 1, max_tries, batch=4096)
    return trees[0]


# -- approximating trees and limit objects -----------------------------------------

def default_fallback(n: int, k: int) -> PlaneTree:
    """Fixed tree with n vertices and k internal vertices: the star of k-1
    one-leaf stars when n >= 2k - 1, a leafy caterpillar otherwise."""
    if n >= 2 * k - 1:
        L = (n - 2 * k + 1,) + (0,) * (2 * k - 2)
        return recompose_leaves(CoreLeafDecomp(star(k), L))
    if n < k + 1:
        raise EmptyConditioning("need n >= k + 1")
    core = PlaneTree((1,) * (k - 1) + (0,))
    return recompose_leaves(CoreLeafDecomp(core, (n - k - 1,) + (0,) * (2 * k - 2)))


def _z_law(d: OffspringWeights, upto: int):
    """Float probabilities of Z in 1..upto plus the mass beyond, Z ~ mu(. | >= 1)."""
    p = d.pmf(upto)
    q = p[1:] / (1.0 - p[0])
    over = d.tail(upto) / (1.0 - p[0])
    probs = np.append(q, max(over, 0.0))
    return probs / probs.sum()


def sample_Dnk_decomp(d: OffspringWeights, n: int, k: int, rng: RngStream):
    """Decomposition of D_{n,k}, or None when the event sum Z <= n-k fails.

    Z_1..Z_{k-1} are i.i.d. with law mu(. | >= 1) and become the outdegrees
    of the k-1 non-root internal vertices of a star-shaped core; the root
    receives the remaining leaves as a uniform composition over its corners.
    """
    if k == 1:
        return CoreLeafDecomp(star(1), (n - 2,)) if n >= 2 else None
    probs = _z_law(d, n - k)
    z = rng.gen.choice(len(probs), size=k - 1, p=probs) + 1
    if z.max() > n - k or z.sum() > n - k:
        return None
    root = sample_composition(n - k - int(z.sum()), k, rng)
    return CoreLeafDecomp(star(k), root + tuple(int(x) - 1 for x in z))


def sample_Dnk_decomps(d, n, k, rng, size, fallback=None):
    """size draws of D_{n,k} as decompositions; failures become the fallback."""
    fb = decompose_leaves(fallback if fallback is not None else default_fallback(n, k))
    out = []
    for _ in range(size):
        dec = sample_Dnk_decomp(d, n, k, rng)
        out.append(fb if dec is None else dec)
    return out


def sample_Dnk(d: OffspringWeights, n: int, k: int, rng: RngStream, fallback=None) -> PlaneTree:
    if d.weight(0) == 0 or d.pmf(0)[0] >= 1:
        raise EmptyConditioning("need 0 < mu(0) < 1")
    dec = sample_Dnk_decomp(d, n, k, rng)
    if dec is None:
        return fallback if fallback is not None else default_fallback(n, k)
    return recompose_leaves(dec)


def sample_uniform_maximal(d: OffspringWeights, k: int, rng: RngStream) -> PlaneTree:
    """Uniform tree with k leaves and the maximal outdegree profile: shuffle
    the step multiset uniformly and rotate it into a path."""
    prof = bmax(support_of(d, k), k)
    if not prof.admissible:
        raise InadmissibleK(f"k={k} admits no maximal profile")
    steps = [-1] * k
    for j, c in prof.b.items():
        steps.extend([j - 1] * c)
    perm = rng.gen.permutation(len(steps))
    return PlaneTree.from_steps(rotate_to_path([steps[i] for i in perm]))


def write_samples(path, trees, header: dict):
    with open(path, "w") as fh:
        for key, val in header.items():
            fh.write(f"# {key}={val}\n")
        for t in trees:
            fh.write(t.key() + "\n")


def read_samples(path):
    header, trees = {}, []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                header[k] = v
            else:
                trees.append(PlaneTree.from_key(line))
    return header, trees
