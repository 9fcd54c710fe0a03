"""Named verification suites, one per acceptance property.

Each suite returns a SuiteResult whose ``lines`` explain what was checked.
They are shared by the test-suite and by ``bgwlab verify --suite``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, gamma

import numpy as np

from .exact import (PoissonType, Transfer, dirichlet_aggregation_moment_check,
                    gamma_ratio_identity_check, limit_reduced, outdegree_sorted_dist,
                    prob_total_leaves, reduced_dist_internal, reduced_dist_leaves, uniform_on)
from .offspring import Finite, Geometric, PolyExp, PowerLaw, StableTail
from .oracles import SizeClass
from .sampling import (RngStream, sample_Dnk_decomps, sample_internal_decomps,
                       sample_leaves_cycle, sample_leaves_exact, sample_rejection_batch)
from .series import Qa_degree_leading, check_polyexp_factorization, coeff_ratio_probe
from .trees import (CoreLeafDecomp, LeafAncestorDecomp, PlaneTree, decompose_leaves,
                    decompose_unary, enumerate_trees, good_shifts, luka_decode, luka_encode,
                    no_unary_trees, recompose_leaves, recompose_unary, star)
from .verify import (EmpiricalBatch, chi_square_test, coarse_nonroot_profile, condensation_stats,
                     ks_against_beta, sweep, tv_empirical, tv_exact)

HALF = Fraction(1, 2)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    lines: list = field(default_factory=list)
    seconds: float = 0.0

    def summary(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name} ({self.seconds:.1f}s)"


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# 1 -----------------------------------------------------------------------------

def bijections(seed=1, nmax=10, vectors=10_000):
    lines, ok = [], True
    for n in range(1, nmax + 1):
        trees = list(enumerate_trees(n))
        bad = 0
        for t in trees:
            bad += luka_decode(luka_encode(t)) != t
            bad += recompose_unary(decompose_unary(t)) != t
            if t.n_internal:
                bad += recompose_leaves(decompose_leaves(t)) != t
        # reverse direction: every (reduced tree, counts) pair maps to a distinct tree
        seen_u, seen_l = set(), set()
        for k in range(1, n + 1):
            for a in no_unary_trees(k):
                if len(a) <= n:
                    for anc in _compositions(n - len(a), len(a)):
                        t = recompose_unary(LeafAncestorDecomp(a, anc))
                        bad += decompose_unary(t) != LeafAncestorDecomp(a, anc)
                        seen_u.add(t)
        for k in range(1, n):
            for a in enumerate_trees(k):
                M = n - k - a.phi(0)
                if M < 0:
                    continue
                for L in _compositions(M, 2 * k - 1):
                    dec = CoreLeafDecomp(a, L)
                    t = recompose_leaves(dec)
                    bad += decompose_leaves(t) != dec
                    seen_l.add(t)
        bad += seen_u != set(trees)
        bad += seen_l != {t for t in trees if t.n_internal}
        ok &= bad == 0
        lines.append(f"n={n}: {len(trees)} trees, {bad} failures")
    rng = np.random.default_rng(seed)
    fails = 0
    for _ in range(vectors):
        n = int(rng.integers(2, 31))
        k = int(rng.integers(1, n))
        # random steps >= -1 summing to -k: outdegrees form a composition of n - k
        cuts = np.sort(rng.choice(2 * n - k - 1, size=n - 1, replace=False))
        degs = np.diff(np.concatenate(([-1], cuts, [2 * n - k - 1]))) - 1
        if len(good_shifts(list(degs - 1))) != k:
            fails += 1
    ok &= fails == 0
    lines.append(f"cycle lemma on {vectors} random vectors: {fails} failures")
    return ok, lines


# 2 -----------------------------------------------------------------------------

ORACLE_FAMILIES = (Geometric(HALF), Finite((Fraction(1, 3),) * 3), PolyExp((Fraction(1),)))


def exact_oracles(seed=None, nmax=12):
    lines, ok = [], True
    for d in ORACLE_FAMILIES:
        bad = checked = 0
        for n in range(1, nmax + 1):
            sc = SizeClass(d, n)
            for k in range(1, n + 1):
                val, _ = prob_total_leaves(d, n, k)
                bad += val != sc.total_leaves(k)
                checked += 1
                if sc.total_leaves(k):
                    bad += reduced_dist_leaves(d, n, k) != sc.reduced_leaves(k)
                    checked += 1
                if k < n and sc.conditional(internal=k):
                    bad += reduced_dist_internal(d, n, k) != sc.reduced_internal(k)
                    bad += outdegree_sorted_dist(d, n, k) != sc.outdegree_sorted(k)
                    checked += 2
        ok &= bad == 0
        lines.append(f"{d}: {checked} laws compared, {bad} discrepancies")
    return ok, lines


# 3 -----------------------------------------------------------------------------

def conditional_uniformity(seed=None, nmax=12):
    lines, ok = [], True
    for d in ORACLE_FAMILIES:
        bad = classes = 0
        for n in range(1, nmax + 1):
            sc = SizeClass(d, n)
            for k in range(1, n + 1):
                law = sc.conditional(leaves=k)
                if not law:
                    continue
                by_core = {}
                for t, p in law.items():
                    dec = decompose_unary(t)
                    by_core.setdefault(dec.reduced, {})[dec.ancestors] = p
                for a, cond in by_core.items():
                    classes += 1
                    tot = sum(cond.values())
                    m = len(a)
                    want = Fraction(1, comb(n - 1, m - 1))
                    if len(cond) != comb(n - 1, m - 1) or any(p / tot != want for p in cond.values()):
                        bad += 1
        ok &= bad == 0
        lines.append(f"{d}: {classes} reduced-tree classes, {bad} non-uniform")
    return ok, lines


# 4 -----------------------------------------------------------------------------

def sampler_consistency(seed=4, N=100_000, alpha=0.001):
    d = Geometric(HALF)
    lines, ok = [], True
    root = RngStream(seed)
    leaves_law = SizeClass(d, 8).conditional(leaves=3)
    internal_law = SizeClass(d, 8).conditional(internal=2)
    runs = [
        ("exact leaves n=8 k=3", leaves_law,
         lambda r: [sample_leaves_exact(d, 8, 3, r) for _ in range(N)]),
        ("cycle-lemma leaves n=8 k=3", leaves_law,
         lambda r: [sample_leaves_cycle(d, 8, 3, r) for _ in range(N)]),
        ("rejection leaves n=8 k=3", leaves_law,
         lambda r: sample_rejection_batch(d, 8, 3, "leaves", r, N)[0]),
        ("exact internal n=8 k=2", internal_law,
         lambda r: [recompose_leaves(x) for x in sample_internal_decomps(d, 8, 2, r, N)]),
    ]
    for i, (name, law, draw) in enumerate(runs):
        res = chi_square_test(EmpiricalBatch(draw(root.substream(i))), law)
        ok &= res.pvalue > alpha
        lines.append(f"{name}: chi2={res.statistic:.1f} dof={res.dof} p={res.pvalue:.4f}")
    return ok, lines


# 5 -----------------------------------------------------------------------------

GRID = (50, 100, 200, 400)


def leaves_binary_limit(seed=None):
    d = Geometric(HALF)
    target = uniform_on(t for t in no_unary_trees(3) if max(t.degrees) == 2)
    tab = sweep(lambda n: tv_exact(reduced_dist_leaves(d, n, 3), target), GRID, name="tv")
    ok = tab.final_lt_initial() and tab.values[-1] < 0.05
    return ok, [f"n={n}: TV={float(v):.5f}" for n, v in tab.rows]


# 6 -----------------------------------------------------------------------------

def stable_tail_star(seed=6, N=10_000):
    d = StableTail(Fraction(3, 2), Fraction(0), HALF)
    tab = sweep(lambda n: reduced_dist_internal(d, n, 3)[star(3)], GRID, name="star")
    lines = [f"n={n}: P(R=*_3)={float(v):.5f}" for n, v in tab.rows]
    ok = tab.final_gt_initial() and tab.values[-1] > 0.9
    decs = sample_internal_decomps(d, 400, 3, RngStream(seed), N)
    mean = float(np.mean([condensation_stats(x).root_out for x in decs])) / 400
    lines.append(f"n=400: mean root outdegree / n = {mean:.4f} (N={N})")
    return ok and mean > 0.9, lines


# 7 -----------------------------------------------------------------------------

def local_condensation(seed=7, N=10_000, cap=20):
    d = PowerLaw(Fraction(3, 2))
    root = RngStream(seed)
    vals, lines = [], []
    for i, n in enumerate((50, 200)):
        T = [coarse_nonroot_profile(x, cap) for x in
             sample_internal_decomps(d, n, 3, root.substream(2 * i), N)]
        D = [coarse_nonroot_profile(x, cap) for x in
             sample_Dnk_decomps(d, n, 3, root.substream(2 * i + 1), N)]
        v = tv_empirical(EmpiricalBatch(T), EmpiricalBatch(D))
        vals.append(v)
        lines.append(f"n={n}: empirical TV(T, D) = {v:.4f}")
    return vals[-1] < vals[0] and vals[-1] < 0.1, lines


# 8 -----------------------------------------------------------------------------

def transfer_geometric(seed=8, N=100_000, n_mc=2000):
    d = Geometric(HALF)
    target = limit_reduced(Transfer(Fraction(1), 3))
    tab = sweep(lambda n: tv_exact(reduced_dist_internal(d, n, 3), target), GRID, name="tv")
    v = tab.values
    ok = all(b < a for a, b in zip(v, v[1:])) and v[-1] < 0.05
    lines = [f"n={n}: TV to uniform on T_3 = {float(x):.5f}" for n, x in tab.rows]
    decs = sample_internal_decomps(d, n_mc, 3, RngStream(seed), N)
    x = [dec.leaf_seq[0] / n_mc for dec in decs]
    ks = ks_against_beta(x, 1, 4)
    lines.append(f"n={n_mc}: KS(first corner / n, Beta(1,4)) = {ks:.4f} (N={N})")
    return ok and ks < 0.02, lines


# 9 -----------------------------------------------------------------------------

def poisson_regime(seed=9, N=10_000, n_mc=2000):
    d = PolyExp((Fraction(1),))
    target = limit_reduced(PoissonType(3))
    tab = sweep(lambda n: tv_exact(reduced_dist_internal(d, n, 3), target), GRID, name="tv")
    v = tab.values
    ok = all(b < a for a, b in zip(v, v[1:])) and v[-1] < 0.05
    lines = [f"n={n}: TV to zeta law = {float(x):.3e}" for n, x in tab.rows]
    decs = sample_internal_decomps(d, n_mc, 3, RngStream(seed), N)
    X = np.array([dec.leaf_counts() for dec in decs], dtype=float) / n_mc
    m = X.mean(axis=0)
    err = float(np.abs(m - 1 / 3).max())
    lines.append(f"n={n_mc}: mean leaf counts / n = {np.round(m, 4).tolist()}, max error {err:.4f}")
    return ok and err < 0.05, lines


# 10 ----------------------------------------------------------------------------

FACTOR_FAMILIES = (PolyExp((Fraction(1),)), PolyExp((Fraction(1), HALF)),
                   PolyExp((Fraction(1), Fraction(1, 3), Fraction(1, 2))),
                   PolyExp((HALF, 0, Fraction(1, 3))))
ALPHAS = (HALF, Fraction(1), Fraction(3, 2), Fraction(2), Fraction(7, 3))


def identities(seed=None, order=200):
    lines = []
    bad = cnt = 0
    for d in FACTOR_FAMILIES:
        p = d.degree
        for k in range(1, 5):
            for a in enumerate_trees(k):
                cnt += 1
                deg, lead = Qa_degree_leading(d, a)
                good = check_polyexp_factorization(d, a, order)
                good &= deg == (k - 1) * (p - 1) - a.phi(0)
                good &= lead == (p * d.a[-1]) ** (k - 1)
                bad += not good
    lines.append(f"factorisation to order {order}: {cnt} cases, {bad} failures")
    ok_f = bad == 0
    gbad = sum(not gamma_ratio_identity_check(p, al) for p in range(1, 9) for al in ALPHAS)
    lines.append(f"balls-in-urns identity, p<=8 at {len(ALPHAS)} alphas: {gbad} failures")
    dbad = dcnt = 0
    first_fail = None
    for a1, a2 in product((HALF, Fraction(1), Fraction(2)), repeat=2):
        for k in (1, 2, 3):
            for lam in product(range(4), repeat=k + 1):
                dcnt += 1
                if not dirichlet_aggregation_moment_check([a1, a2], k, (lam[:k], lam[k:])):
                    dbad += 1
                    first_fail = first_fail or (a1, a2, k, lam)
    lines.append(f"aggregation moment identity, lambda<=3 grid: {dcnt} cases, {dbad} failures"
                 + (f" (first: alphas=({first_fail[0]},{first_fail[1]}), k={first_fail[2]},"
                    f" lambda={first_fail[3]})" if first_fail else ""))
    return ok_f and gbad == 0 and dbad == 0, lines


# 11 ----------------------------------------------------------------------------

def coefficient_ratio(seed=None):
    d = PolyExp((Fraction(1),))
    ok, lines = True, []
    for m in (1, 2):
        r = coeff_ratio_probe(d, m, [200, 2000])
        e200, e2000 = abs(r[200] - 1), abs(r[2000] - 1)
        ok &= e2000 < 0.01 and e2000 < e200
        lines.append(f"m={m}: r(200)={r[200]:.6f}, r(2000)={r[2000]:.6f}")
    return ok, lines


# 12 ----------------------------------------------------------------------------

def tail_equivalent(seed=None, n=10_000):
    d = StableTail(Fraction(3, 2), Fraction(0), HALF)
    tail = d.tail(n - 1)
    approx = float(d.c) * n ** -1.5 / (-gamma(-0.5))
    ratio = tail / approx
    return 0.9 <= ratio <= 1.1, [f"n={n}: tail={tail:.6e}, equivalent={approx:.6e}, ratio={ratio:.6f}"]


SUITES = {
    "bijections": bijections,
    "exact-oracles": exact_oracles,
    "conditional-uniformity": conditional_uniformity,
    "sampler-consistency": sampler_consistency,
    "leaves-binary-limit": leaves_binary_limit,
    "stable-tail-star": stable_tail_star,
    "local-condensation": local_condensation,
    "transfer-geometric": transfer_geometric,
    "poisson-regime": poisson_regime,
    "identities": identities,
    "coefficient-ratio": coefficient_ratio,
    "tail-equivalent": tail_equivalent,
}

CRITERIA = {i: name for i, name in enumerate(SUITES, 1)}


def run_suite(name, seed=None) -> SuiteResult:
    fn = SUITES[name]
    t0 = time.perf_counter()
    ok, lines = fn() if seed is None else fn(seed=seed)
    return SuiteResult(name, bool(ok), lines, time.perf_counter() - t0)
