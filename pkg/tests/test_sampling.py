from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import stats

from bgwlab.errors import GaveUp, InadmissibleK
from bgwlab.exact import TreeDist, reduced_dist_internal, reduced_dist_leaves
from bgwlab.offspring import Finite, Geometric, StableTail
from bgwlab.oracles import SizeClass
from bgwlab.sampling import (ExactCategorical, Overflow, RngStream, default_fallback, read_samples,
                             sample_bgw, sample_composition, sample_dirichlet, sample_Dnk,
                             sample_Dnk_decomp, sample_internal_decomps, sample_internal_exact,
                             sample_leaves_cycle, sample_leaves_exact, sample_rejection,
                             sample_rejection_batch, sample_uniform_maximal, write_samples)
from bgwlab.trees import CHERRY, SINGLE, decompose_unary, recompose_leaves, star
from bgwlab.verify import EmpiricalBatch, chi_square, tv_empirical

GEOM = Geometric(F(1, 2))


def test_rng_reproducible_and_substreams_differ():
    a = RngStream(5).gen.integers(0, 1 << 30, 10)
    b = RngStream(5).gen.integers(0, 1 << 30, 10)
    c = RngStream(5).substream(1).gen.integers(0, 1 << 30, 10)
    assert (a == b).all() and not (a == c).all()
    assert "seed=5" in RngStream(5).describe()


def test_randbelow_big_bounds_are_uniform():
    rng = RngStream(1)
    n = 3 * 2 ** 100
    xs = [rng.randbelow(n) for _ in range(6000)]
    assert all(0 <= x < n for x in xs)
    thirds = Counter(x * 3 // n for x in xs)
    assert stats.chisquare([thirds[i] for i in range(3)]).pvalue > 1e-4
    assert {rng.randbelow(1) for _ in range(10)} == {0}
    with pytest.raises(ValueError):
        rng.randbelow(0)


def test_exact_categorical():
    cat = ExactCategorical(["a", "b"], [F(1, 3), F(2, 3)])
    rng = RngStream(2)
    c = Counter(cat.sample(rng) for _ in range(30000))
    assert c["b"] / 30000 == pytest.approx(2 / 3, abs=0.02)


def test_composition():
    rng = RngStream(3)
    assert sample_composition(0, 4, rng) == (0, 0, 0, 0)
    assert sample_composition(5, 1, rng) == (5,)
    draws = Counter(sample_composition(1, 3, rng) for _ in range(30000))
    assert set(draws) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert stats.chisquare(list(draws.values())).pvalue > 1e-3
    # all weak compositions of 3 into 3 parts are equally likely
    draws = Counter(sample_composition(3, 3, rng) for _ in range(30000))
    assert len(draws) == 10
    assert stats.chisquare(list(draws.values())).pvalue > 1e-3


def test_composition_beta_marginal():
    rng = RngStream(4)
    first = np.array([sample_composition(2000, 3, rng)[0] for _ in range(20000)]) / 2000
    assert stats.kstest(first, stats.beta(1, 2).cdf).statistic < 0.02


def test_dirichlet():
    rng = RngStream(6)
    xs = np.array([sample_dirichlet([2, 1], rng) for _ in range(20000)])
    assert np.allclose(xs.sum(axis=1), 1, atol=1e-12)
    assert stats.kstest(xs[:, 0], stats.beta(2, 1).cdf).statistic < 0.02


def test_sample_bgw():
    rng = RngStream(7)
    assert sample_bgw(Finite((1,)), rng) == SINGLE
    N = 20000
    d = Finite((F(1, 2), 0, F(1, 2)))
    draws = [sample_bgw(d, rng, max_vertices=200) for _ in range(N)]
    sizes = Counter(len(t) for t in draws if not isinstance(t, Overflow))
    p = 1 / 8
    assert abs(sizes[3] / N - p) < 4 * (p * (1 - p) / N) ** 0.5
    out = [sample_bgw(GEOM, rng, max_vertices=5) for _ in range(2000)]
    assert any(isinstance(t, Overflow) for t in out)
    assert all(len(t) <= 5 for t in out if not isinstance(t, Overflow))


def law_leaves(d, n, k):
    return TreeDist(SizeClass(d, n).conditional(leaves=k))


def law_internal(d, n, k):
    return TreeDist(SizeClass(d, n).conditional(internal=k))


def test_leaves_exact_postconditions_and_law():
    rng = RngStream(8)
    assert {sample_leaves_exact(GEOM, 3, 2, rng) for _ in range(20)} == {CHERRY}
    trees = [sample_leaves_exact(GEOM, 8, 3, rng) for _ in range(20000)]
    assert all(len(t) == 8 and t.n_leaves == 3 for t in trees)
    assert chi_square(trees, law_leaves(GEOM, 8, 3)) > 1e-3


def test_leaves_cycle_law_and_agreement():
    rng = RngStream(9)
    assert {sample_leaves_cycle(GEOM, 3, 2, rng) for _ in range(20)} == {CHERRY}
    a = [sample_leaves_cycle(GEOM, 8, 3, rng) for _ in range(20000)]
    b = [sample_leaves_exact(GEOM, 8, 3, rng) for _ in range(20000)]
    assert all(len(t) == 8 and t.n_leaves == 3 for t in a)
    law = law_leaves(GEOM, 8, 3)
    assert chi_square(a, law) > 1e-3
    assert tv_empirical(EmpiricalBatch(a), EmpiricalBatch(b)) < 0.05


def test_internal_exact():
    rng = RngStream(10)
    assert {sample_internal_exact(GEOM, 6, 1, rng) for _ in range(10)} == {star(6)}
    decs = sample_internal_decomps(GEOM, 8, 2, rng, 20000)
    trees = [recompose_leaves(x) for x in decs]
    assert all(len(t) == 8 and t.n_internal == 2 for t in trees)
    assert chi_square(trees, law_internal(GEOM, 8, 2)) > 1e-3


def test_internal_exact_stable_reduced_law():
    d = StableTail(F(3, 2), 0, F(1, 2))
    rng = RngStream(11)
    decs = sample_internal_decomps(d, 60, 3, rng, 5000)
    assert chi_square([x.core for x in decs], reduced_dist_internal(d, 60, 3)) > 1e-3


def test_rejection():
    rng = RngStream(12)
    assert sample_rejection(Finite((1,)), 1, 1, "leaves", rng) == SINGLE
    trees, rep = sample_rejection_batch(GEOM, 7, 3, "leaves", rng, 5000)
    assert rep.samples == 5000 and rep.rejections > 0
    assert chi_square(trees, law_leaves(GEOM, 7, 3)) > 1e-3
    trees, _ = sample_rejection_batch(GEOM, 7, 3, "internal", rng, 3000)
    assert chi_square(trees, law_internal(GEOM, 7, 3)) > 1e-3
    with pytest.raises(GaveUp):
        sample_rejection(GEOM, 40, 39, "leaves", rng, max_tries=1000)


def test_reduced_tree_of_leaves_sampler():
    rng = RngStream(13)
    reds = [decompose_unary(sample_leaves_exact(GEOM, 40, 4, rng)).reduced for _ in range(5000)]
    assert chi_square(reds, reduced_dist_leaves(GEOM, 40, 4)) > 1e-3


def test_dnk():
    rng = RngStream(14)
    assert {sample_Dnk(GEOM, 9, 1, rng) for _ in range(10)} == {star(9)}
    for n in (12, 50):
        for _ in range(300):
            t = sample_Dnk(GEOM, n, 4, rng)
            assert len(t) == n and t.n_internal == 4
    fb = default_fallback(12, 4)
    assert len(fb) == 12 and fb.n_internal == 4
    small = default_fallback(6, 4)
    assert len(small) == 6 and small.n_internal == 4


def test_dnk_success_probability_grows():
    rng = RngStream(15)
    ok = {n: sum(sample_Dnk_decomp(GEOM, n, 4, rng) is not None for _ in range(4000)) for n in (8, 50)}
    assert ok[50] > ok[8]


def test_dnk_outdegrees_are_the_z_values():
    # non-root internal vertices of D_{n,k} have outdegree Z ~ mu(. | >= 1)
    rng = RngStream(16)
    degs = []
    for _ in range(4000):
        dec = sample_Dnk_decomp(GEOM, 400, 3, rng)
        degs.extend(dec.outdegrees()[1:])
    c = Counter(degs)
    # mu(. | >= 1) for Geometric(1/2) is Geometric(1/2) shifted by one
    for z in (1, 2, 3):
        assert c[z] / len(degs) == pytest.approx(0.5 ** z, abs=0.02)


def test_uniform_maximal():
    rng = RngStream(17)
    assert {sample_uniform_maximal(GEOM, 2, rng) for _ in range(10)} == {CHERRY}
    c = Counter(sample_uniform_maximal(GEOM, 3, rng) for _ in range(20000))
    assert len(c) == 2
    assert stats.chisquare(list(c.values())).pvalue > 1e-3
    with pytest.raises(InadmissibleK):
        sample_uniform_maximal(Finite((F(1, 2), F(1, 4), 0, F(1, 4))), 4, rng)


def test_sample_file_round_trip(tmp_path):
    rng = RngStream(18)
    trees = [sample_leaves_exact(GEOM, 10, 3, rng) for _ in range(20)]
    p = tmp_path / "s.txt"
    write_samples(p, trees, {"seed": 18})
    header, back = read_samples(p)
    assert header["seed"] == "18" and back == trees
