from fractions import Fraction as F
from itertools import product

import pytest

from bgwlab.errors import EmptyConditioning, InadmissibleK
from bgwlab.exact import (IntSeqDist, LeavesMax, PoissonType, Star, Transfer, TreeDist, bmax,
                          dirichlet_aggregation_moment_check, dirichlet_moment,
                          gamma_ratio_identity_check, leaf_totals, limit_reduced,
                          outdegree_sorted_dist, prob_total_leaves, reduced_dist_internal,
                          reduced_dist_internal_tables, reduced_dist_leaves, trees_with_profile,
                          uniform_on)
from bgwlab.offspring import Finite, Geometric, PolyExp, StableTail
from bgwlab.oracles import SizeClass, tree_weight
from bgwlab.trees import (CHERRY, SINGLE, catalan, count_prescribed_degrees,
                          decompose_leaves, enumerate_trees, path, star)
from bgwlab.verify import tv_exact

GEOM = Geometric(F(1, 2))


def test_bmax_examples():
    p = bmax({0, 1, 2}, 4)
    assert p.admissible and p.b == {2: 3}
    p = bmax({0, 1, 2, 3}, 5)
    assert p.admissible and p.b == {2: 4}
    assert not bmax({0, 1, 3}, 4).admissible
    assert bmax({0, 1, 3}, 5).b == {3: 2}


def test_bmax_against_brute_force():
    for support in [{0, 2, 5}, {0, 3, 4}, {0, 1, 3, 7}]:
        for k in range(2, 14):
            best = None
            js = sorted(j for j in support if j >= 2)
            for bs in product(range(k), repeat=len(js)):
                if sum(b * (j - 1) for b, j in zip(bs, js)) == k - 1:
                    best = max(best or 0, sum(bs))
            p = bmax(support, k)
            assert p.admissible == (best is not None)
            if best is not None:
                assert p.pmax == best


def test_reduced_leaves_k2_is_cherry():
    for d in [GEOM, PolyExp((1,)), Finite((F(1, 3), F(1, 3), F(1, 3)))]:
        assert reduced_dist_leaves(d, 9, 2) == TreeDist({CHERRY: 1})


@pytest.mark.parametrize("d", [GEOM, Finite((F(1, 4), F(1, 4), F(1, 4), F(1, 4))),
                               PolyExp((1, F(1, 2)))])
def test_reduced_leaves_against_enumeration(d):
    for n in range(3, 12):
        sc = SizeClass(d, n)
        for k in range(2, n):
            if not sc.total_leaves(k):
                continue
            assert reduced_dist_leaves(d, n, k) == sc.reduced_leaves(k)


def test_prob_total_leaves():
    d = Finite((F(1, 3), F(1, 3), F(1, 3)))
    assert prob_total_leaves(d, 3, 2) == (F(1, 27), 0)
    assert prob_total_leaves(GEOM, 5, 5)[0] == 0
    for n in range(1, 13):
        sc = SizeClass(GEOM, n)
        for k in range(1, n + 1):
            assert prob_total_leaves(GEOM, n, k)[0] == sc.total_leaves(k)


def test_reduced_internal_examples():
    assert reduced_dist_internal(GEOM, 7, 1) == TreeDist({SINGLE: 1})
    with pytest.raises(EmptyConditioning):
        reduced_dist_internal(GEOM, 3, 3)


@pytest.mark.parametrize("d", [GEOM, PolyExp((1,)), StableTail(F(3, 2), 0, F(1, 2))])
def test_reduced_internal_against_enumeration(d):
    for n in range(2, 13):
        sc = SizeClass(d, n)
        for k in range(1, min(n, 5)):
            law = reduced_dist_internal(d, n, k)
            assert law == sc.reduced_internal(k)
            assert reduced_dist_internal_tables(d, n, k) == law


def test_stabletail_star_mass_increases():
    d = StableTail(F(3, 2), 0, F(1, 2))
    masses = [reduced_dist_internal(d, n, 3)[star(3)] for n in (50, 100, 200, 400)]
    assert masses == sorted(masses)
    assert masses[-1] > F(9, 10)


def test_outdegree_sorted():
    assert outdegree_sorted_dist(GEOM, 9, 1) == IntSeqDist({(7,): 1})
    for n in range(3, 12):
        sc = SizeClass(GEOM, n)
        for k in range(1, min(n, 5)):
            assert outdegree_sorted_dist(GEOM, n, k) == sc.outdegree_sorted(k)


def test_leaf_totals_single_vertex():
    lt = leaf_totals(GEOM, SINGLE, 9)
    assert lt.M == 7
    assert lt.marginal(0) == [0] * 7 + [1]


def test_leaf_totals_cherry_against_trees():
    # extra leaves per core vertex, from every tree in T_(6,3) whose core is the cherry
    n = 6
    masses = {}
    for t in enumerate_trees(n, internal=3):
        dec = decompose_leaves(t)
        if dec.core != CHERRY:
            continue
        extra = tuple(sum(q) for q in dec.vertex_corners())
        masses[extra] = masses.get(extra, 0) + tree_weight(GEOM, t)
    tot = sum(masses.values())
    lt = leaf_totals(GEOM, CHERRY, n)
    for j in range(3):
        marg = [F(0)] * (lt.M + 1)
        for e, w in masses.items():
            marg[e[j]] += w / tot
        assert lt.marginal(j) == marg


def test_leaf_totals_total_matches_trees():
    # the table total is the summed weight of every tree with that core, up to mu(0)^leaves
    d = Geometric(F(1, 3))
    n = 10
    by_core = {}
    for t in enumerate_trees(n, internal=4):
        core = decompose_leaves(t).core
        by_core[core] = by_core.get(core, 0) + tree_weight(d, t)
    mu0 = d.weight(0)
    for a, w in by_core.items():
        assert leaf_totals(d, a, n).total * mu0 ** (n - 4) == w


def test_limit_poisson_type_3():
    law = limit_reduced(PoissonType(3))
    assert law == TreeDist({path(3): F(2, 3), star(3): F(1, 3)})


def test_limit_transfer_alpha_one_is_uniform():
    for k in range(1, 7):
        law = limit_reduced(Transfer(F(1), k))
        assert len(law) == catalan(k - 1)
        assert set(law.atoms.values()) == {F(1, catalan(k - 1))}


def test_limit_leaves_max_binary():
    for k in range(2, 8):
        law = limit_reduced(LeavesMax(GEOM, k))
        assert len(law) == catalan(k - 1)
        assert all(set(t.degrees) == {0, 2} for t in law)
    with pytest.raises(InadmissibleK):
        limit_reduced(LeavesMax(Finite((F(1, 2), F(1, 4), 0, F(1, 4))), 4))


def test_limit_star():
    assert limit_reduced(Star(4)) == TreeDist({star(4): 1})


def test_trees_with_profile_counts():
    for prof in [{0: 3, 2: 2}, {0: 4, 2: 1, 3: 1}, {0: 5, 1: 2, 5: 1}]:
        assert len(trees_with_profile(prof)) == count_prescribed_degrees(prof)


def test_reduced_leaves_tends_to_binary_uniform():
    target = uniform_on(t for t in enumerate_trees(5, leaves=3) if set(t.degrees) == {0, 2})
    tvs = [tv_exact(reduced_dist_leaves(GEOM, n, 3), target) for n in (20, 80, 320)]
    assert tvs[0] > tvs[1] > tvs[2]
    assert tvs[2] < F(1, 20)


def test_gamma_ratio_identity():
    assert gamma_ratio_identity_check(1, F(5, 7))
    assert gamma_ratio_identity_check(2, F(3, 2))
    for p in range(1, 9):
        for al in [F(1, 2), F(3, 2), F(7, 3), F(5), F(9, 4)]:
            assert gamma_ratio_identity_check(p, al)


def test_dirichlet_moment_values():
    assert dirichlet_moment([1, 1], [1, 0]) == F(1, 2)
    assert dirichlet_moment([2, 1], [2, 0]) == F(1, 2)
    assert dirichlet_moment([1, 1, 1], [0, 0, 0]) == 1


def test_dirichlet_aggregation_examples():
    assert dirichlet_aggregation_moment_check([1, 1], 2, ((0, 0), (0,)))
    assert dirichlet_aggregation_moment_check([1, 1], 2, ((1, 0), (0,)))


def test_dirichlet_aggregation_fails_with_flat_split():
    # second moments disagree: 1/9 on one side, 1/8 on the other
    assert not dirichlet_aggregation_moment_check([1, 1], 2, ((2, 0), (0,)))


def test_dirichlet_aggregation_holds_with_matched_split():
    # splitting X_1 by Dir(alpha_1/k, ...) makes the identity exact
    for al in [F(1, 2), F(1), F(2)]:
        for k in (1, 2, 3):
            split = [al / k] * k
            for first in product(range(3), repeat=k):
                for rest in product(range(3), repeat=1):
                    assert dirichlet_aggregation_moment_check([al, F(3, 2)], k, (first, rest),
                                                              split=split)


def test_dist_validation():
    with pytest.raises(EmptyConditioning):
        TreeDist.from_masses({CHERRY: 0})
    law = TreeDist.from_masses({CHERRY: 1, SINGLE: 3})
    assert law[SINGLE] == F(3, 4) and law.total() == 1
