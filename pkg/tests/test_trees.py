from collections import Counter

import pytest

from bgwlab.errors import (BoundExceeded, InfeasibleProfile, InvalidPath, NoInternalNode,
                           ShapeMismatch)
from bgwlab.trees import enumerate_trees as _enum
from bgwlab.trees import (CHERRY, SINGLE, CoreLeafDecomp, LeafAncestorDecomp, LukasiewiczPath,
                          PlaneTree, catalan, count_prescribed_degrees, decompose_leaves,
                          decompose_unary, first_hitting_time, good_shifts,
                          luka_decode, luka_encode, no_unary_trees, path, recompose_leaves,
                          recompose_unary, rotate_to_path, star)


def enumerate_trees(*a, **kw):
    return list(_enum(*a, **kw))


ALL_UP_TO_10 = [t for n in range(1, 11) for t in enumerate_trees(n)]


def test_enumeration_counts_are_catalan():
    for n in range(1, 11):
        assert len(enumerate_trees(n)) == catalan(n - 1)


def test_enumeration_examples():
    assert len(enumerate_trees(4)) == 5
    assert len(enumerate_trees(4, leaves=2)) == 3
    assert enumerate_trees(1) == [SINGLE]


def test_enumeration_filters_agree_with_brute_force():
    for n in range(1, 10):
        full = enumerate_trees(n)
        for k in range(1, n + 1):
            assert enumerate_trees(n, leaves=k) == [t for t in full if t.n_leaves == k]
            assert enumerate_trees(n, internal=k) == [t for t in full if t.n_internal == k]
        assert enumerate_trees(n, no_unary=True) == [t for t in full if 1 not in t.degrees]


def test_enumeration_bound(monkeypatch):
    monkeypatch.setenv("BGWLAB_MAX_ENUM", "6")
    with pytest.raises(BoundExceeded):
        enumerate_trees(7)


def test_no_unary_trees_matches_filtered_enumeration():
    for k in range(1, 6):
        want = sorted(t for n in range(1, 2 * k) for t in enumerate_trees(n, leaves=k, no_unary=True))
        assert sorted(no_unary_trees(k)) == want
    assert sorted(no_unary_trees(4, max_size=5)) == sorted(
        t for t in no_unary_trees(4) if len(t) <= 5)


def test_luka_examples():
    p = luka_encode(SINGLE)
    assert p.steps == (-1,) and p.partial_sums == (0, -1)
    p = luka_encode(CHERRY)
    assert p.steps == (1, -1, -1) and p.partial_sums == (0, 1, 0, -1)
    assert luka_decode(LukasiewiczPath((-1,))) == SINGLE
    assert luka_decode((0, 0, -1)) == path(3)


def test_luka_round_trip():
    for t in ALL_UP_TO_10:
        assert luka_decode(luka_encode(t)) == t


def test_invalid_paths():
    for bad in [(), (0,), (-1, -1), (1, -1), (-2, 1)]:
        with pytest.raises(InvalidPath):
            PlaneTree.from_steps(bad)
    assert not LukasiewiczPath((0, -1, 0)).is_valid()


def test_first_hitting_time():
    assert first_hitting_time((1, -1, -1), -1) == 3
    assert first_hitting_time((-1,), -1) == 1
    assert first_hitting_time((0, 0), -1) is None


def test_cycle_lemma_on_all_small_sequences():
    # every sequence of steps >= -1 summing to -k has exactly k good shifts
    import itertools
    for n in range(1, 7):
        for x in itertools.product(range(-1, n), repeat=n):
            s = sum(x)
            if s < 0:
                assert len(good_shifts(x)) == -s
            if s == -1:
                assert luka_decode(rotate_to_path(x)).size == n


def test_key_round_trip():
    for t in ALL_UP_TO_10[:200]:
        assert PlaneTree.from_key(t.key()) == t
    assert CHERRY.key() == "1,-1,-1"


def test_children_and_parents():
    t = PlaneTree((2, 1, 0, 0))
    assert t.children == ((1, 3), (2,), (), ())
    assert t.parents == (-1, 0, 1, 0)
    assert PlaneTree.from_children(t.children) == t


def test_decompose_unary_examples():
    d = decompose_unary(path(5))
    assert d.reduced == SINGLE and d.ancestors == (4,)
    d = decompose_unary(CHERRY)
    assert d.reduced == CHERRY and d.ancestors == (0, 0, 0)
    assert recompose_unary(LeafAncestorDecomp(SINGLE, (0,))) == SINGLE
    assert recompose_unary(LeafAncestorDecomp(CHERRY, (1, 0, 0))) == PlaneTree((1, 2, 0, 0))


def test_unary_bijection():
    for n in range(1, 11):
        for k in range(1, n):
            trees = enumerate_trees(n, leaves=k)
            decs = [decompose_unary(t) for t in trees]
            assert len(set(decs)) == len(trees)
            for t, d in zip(trees, decs):
                assert d.size == n and d.reduced.n_leaves == k
                assert recompose_unary(d) == t


def test_unary_decomp_validation():
    with pytest.raises(ShapeMismatch):
        LeafAncestorDecomp(CHERRY, (0, 0))
    with pytest.raises(ShapeMismatch):
        LeafAncestorDecomp(path(2), (0, 0))


def test_decompose_leaves_examples():
    for n in range(2, 8):
        d = decompose_leaves(star(n))
        assert d.core == SINGLE and d.leaf_seq == (n - 2,)
    d = decompose_leaves(PlaneTree((1, 2, 0, 0)))
    assert d.core == path(2) and len(d.leaf_seq) == 3 and sum(d.leaf_seq) == 1
    assert recompose_leaves(CoreLeafDecomp(SINGLE, (0,))) == path(2)
    assert recompose_leaves(CoreLeafDecomp(SINGLE, (3,))) == star(5)
    with pytest.raises(NoInternalNode):
        decompose_leaves(SINGLE)


def test_leaf_bijection():
    for n in range(2, 11):
        for k in range(1, n):
            trees = enumerate_trees(n, internal=k)
            decs = [decompose_leaves(t) for t in trees]
            assert len(set(decs)) == len(trees)
            for t, d in zip(trees, decs):
                assert len(d.core) == k
                assert sum(d.leaf_seq) == n - k - d.core.n_leaves
                assert recompose_leaves(d) == t
                assert sorted(d.outdegrees()) == sorted(t.internal_outdegrees())


def test_count_prescribed_degrees_examples():
    assert count_prescribed_degrees({0: 2, 2: 1}) == 1
    assert count_prescribed_degrees({0: 3, 2: 2}) == 2
    assert count_prescribed_degrees({0: 1}) == 1
    with pytest.raises(InfeasibleProfile):
        count_prescribed_degrees({0: 2, 2: 2})


def test_count_prescribed_degrees_against_enumeration():
    for n in range(1, 10):
        profiles = Counter(tuple(sorted(t.profile().items())) for t in enumerate_trees(n))
        for prof, cnt in profiles.items():
            assert count_prescribed_degrees(dict(prof)) == cnt


def test_star_and_path():
    assert star(4).degrees == (3, 0, 0, 0)
    assert star(1) == SINGLE
    assert path(3).degrees == (1, 1, 0)
    assert star(4).n_leaves == 3 and star(4).n_internal == 1
