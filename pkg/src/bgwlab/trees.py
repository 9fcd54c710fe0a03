"""Plane trees, Lukasiewicz coding and the two core/leaf decompositions.

A plane tree is stored through its outdegree sequence in lexicographic
(depth-first) order.  That sequence is canonical, so two trees are equal iff
their sequences are.  The text form used everywhere is the step sequence
``c_u - 1`` written as comma separated integers, e.g. ``"1,-1,-1"``.
"""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb, factorial
from typing import Iterator, Sequence

from .errors import (BoundExceeded, InfeasibleProfile, InvalidPath,
                     NoInternalNode, NonDivisible, ShapeMismatch)


def _check_degrees(degrees):
    if not degrees:
        raise InvalidPath("empty sequence")
    h = 0
    last = len(degrees) - 1
    for i, d in enumerate(degrees):
        if d < 0:
            raise InvalidPath(f"negative outdegree at position {i}")
        h += d - 1
        if h < 0 and i < last:
            raise InvalidPath(f"path hits -1 early at position {i + 1}")
    if h != -1:
        raise InvalidPath(f"steps sum to {h}, expected -1")


@dataclass(frozen=True, order=True)
class PlaneTree:
    degrees: tuple

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degrees)
        _check_degrees(degrees)

    @classmethod
    def from_steps(cls, steps):
        return cls(tuple(int(s) + 1 for s in steps))

    @classmethod
    def from_key(cls, text: str):
        text = text.strip()
        try:
            steps = [int(x) for x in text.split(",")]
        except ValueError as exc:
            raise InvalidPath(f"bad step text {text!r}") from exc
        return cls.from_steps(steps)

    @classmethod
    def from_children(cls, children: Sequence[Sequence[int]]):
        """Build from child lists; vertices must already be in lexicographic order."""
        n = len(children)
        order = []
        stack = [0]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(children[v]))
            if len(order) > n:
                raise InvalidPath("child lists contain a cycle")
        if order != list(range(n)):
            raise InvalidPath("vertices are not indexed in lexicographic order")
        return cls(tuple(len(c) for c in children))

    def __len__(self):
        return len(self.degrees)

    def __str__(self):
        return self.key()

    @property
    def size(self) -> int:
        return len(self.degrees)

    @property
    def steps(self):
        return tuple(d - 1 for d in self.degrees)

    def key(self) -> str:
        return ",".join(str(d - 1) for d in self.degrees)

    @cached_property
    def children(self):
        n = len(self.degrees)
        ch = [[] for _ in range(n)]
        left = list(self.degrees)
        stack = [0] if n > 1 else []
        for v in range(1, n):
            p = stack[-1]
            ch[p].append(v)
            left[p] -= 1
            if left[p] == 0:
                stack.pop()
            if self.degrees[v] > 0:
                stack.append(v)
        return tuple(tuple(c) for c in ch)

    @cached_property
    def parents(self):
        par = [-1] * len(self.degrees)
        for u, cs in enumerate(self.children):
            for v in cs:
                par[v] = u
        return tuple(par)

    @property
    def n_leaves(self) -> int:
        return self.degrees.count(0)

    @property
    def n_internal(self) -> int:
        return len(self.degrees) - self.degrees.count(0)

    def phi(self, i: int) -> int:
        """Number of vertices with outdegree i."""
        return self.degrees.count(i)

    def profile(self) -> dict:
        return dict(sorted(Counter(self.degrees).items()))

    def internal_outdegrees(self):
        """Outdegrees of internal vertices, in lexicographic order."""
        return tuple(d for d in self.degrees if d > 0)

    def is_no_unary(self) -> bool:
        return 1 not in self.degrees


def star(k: int) -> PlaneTree:
    """Root with k-1 leaf children (a single vertex when k=1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return PlaneTree((k - 1,) + (0,) * (k - 1))


def path(n: int) -> PlaneTree:
    return PlaneTree((1,) * (n - 1) + (0,))


SINGLE = PlaneTree((0,))
CHERRY = PlaneTree((2, 0, 0))


# -- Lukasiewicz coding --------------------------------------------------------

@dataclass(frozen=True)
class LukasiewiczPath:
    steps: tuple

    @property
    def partial_sums(self):
        out = [0]
        for s in self.steps:
            out.append(out[-1] + s)
        return tuple(out)

    def is_valid(self) -> bool:
        try:
            _check_degrees(tuple(s + 1 for s in self.steps))
        except InvalidPath:
            return False
        return True


def luka_encode(t: PlaneTree) -> LukasiewiczPath:
    return LukasiewiczPath(t.steps)


def luka_decode(p) -> PlaneTree:
    steps = p.steps if isinstance(p, LukasiewiczPath) else p
    return PlaneTree.from_steps(steps)


def first_hitting_time(steps, level: int):
    """Smallest i with W_i == level (W_0 = 0), or None."""
    if level == 0:
        return 0
    h = 0
    for i, s in enumerate(steps, 1):
        h += s
        if h == level:
            return i
    return None


def cyclic_shift(x, i: int):
    """(x_{i+1}, ..., x_n, x_1, ..., x_i)."""
    x = tuple(x)
    i %= len(x)
    return x[i:] + x[:i]


def good_shifts(x):
    """Shifts i whose rotation first hits -k exactly at time n (k = -sum x)."""
    n = len(x)
    k = -sum(x)
    if k < 1:
        return []
    return [i for i in range(n) if first_hitting_time(cyclic_shift(x, i), -k) == n]


def rotate_to_path(x):
    """Unique rotation of a sequence summing to -1 that is a Lukasiewicz path."""
    if sum(x) != -1:
        raise InvalidPath("rotation needs steps summing to -1")
    h, best, arg = 0, None, 0
    for j, s in enumerate(x, 1):
        h += s
        if best is None or h < best:
            best, arg = h, j
    return cyclic_shift(x, arg)


# -- unary decomposition (leaves conditioning) ---------------------------------

@dataclass(frozen=True)
class LeafAncestorDecomp:
    reduced: PlaneTree
    ancestors: tuple

    def __post_init__(self):
        if len(self.ancestors) != len(self.reduced):
            raise ShapeMismatch("one ancestor count per reduced vertex is required")
        if any(a < 0 for a in self.ancestors):
            raise ShapeMismatch("ancestor counts must be nonnegative")
        if 1 in self.reduced.degrees:
            raise ShapeMismatch("reduced tree must have no unary vertex")

    @property
    def size(self):
        return len(self.reduced) + sum(self.ancestors)


def decompose_unary(t: PlaneTree) -> LeafAncestorDecomp:
    red, anc = [], []
    run = 0
    for d in t.degrees:
        if d == 1:
            run += 1
        else:
            red.append(d)
            anc.append(run)
            run = 0
    return LeafAncestorDecomp(PlaneTree(tuple(red)), tuple(anc))


def recompose_unary(dec: LeafAncestorDecomp) -> PlaneTree:
    out = []
    for d, a in zip(dec.reduced.degrees, dec.ancestors):
        out.extend([1] * a)
        out.append(d)
    return PlaneTree(tuple(out))


# -- leaf decomposition (internal-vertex conditioning) -------------------------

@dataclass(frozen=True)
class CoreLeafDecomp:
    """Reduced tree (leaves removed) plus per-corner leaf counts.

    Corners are listed vertex by vertex in lexicographic order of the core and,
    within a vertex, from left to right (corner j sits before the j-th core
    child).  A core leaf has one corner and its count excludes the leaf that
    is forced there.
    """
    core: PlaneTree
    leaf_seq: tuple

    def __post_init__(self):
        k = len(self.core)
        if len(self.leaf_seq) != 2 * k - 1:
            raise ShapeMismatch(f"expected {2 * k - 1} corner counts, got {len(self.leaf_seq)}")
        if any(x < 0 for x in self.leaf_seq):
            raise ShapeMismatch("corner counts must be nonnegative")

    @property
    def size(self):
        return len(self.core) + sum(self.leaf_seq) + self.core.n_leaves

    def vertex_corners(self):
        """Per core vertex (lex order), the tuple of its corner counts."""
        out, pos = [], 0
        for c in self.core.degrees:
            m = c + 1
            out.append(self.leaf_seq[pos:pos + m])
            pos += m
        return out

    def outdegrees(self):
        """Outdegrees in the full tree of the core vertices, in lex order."""
        return tuple(c + sum(q) + (1 if c == 0 else 0)
                     for c, q in zip(self.core.degrees, self.vertex_corners()))

    def leaf_counts(self):
        """Number of leaf children of each core vertex, in lex order."""
        return tuple(sum(q) + (1 if c == 0 else 0)
                     for c, q in zip(self.core.degrees, self.vertex_corners()))


def decompose_leaves(t: PlaneTree) -> CoreLeafDecomp:
    if t.n_internal == 0:
        raise NoInternalNode("the single-vertex tree has no internal vertex")
    deg = t.degrees
    core, seq = [], []
    for u, cs in enumerate(t.children):
        if deg[u] == 0:
            continue
        internal_kids = 0
        run = 0
        corners = []
        for v in cs:
            if deg[v] == 0:
                run += 1
            else:
                corners.append(run)
                run = 0
                internal_kids += 1
        corners.append(run)
        if internal_kids == 0:
            corners[0] -= 1
        core.append(internal_kids)
        seq.extend(corners)
    return CoreLeafDecomp(PlaneTree(tuple(core)), tuple(seq))


def recompose_leaves(dec: CoreLeafDecomp) -> PlaneTree:
    core = dec.core
    corners = dec.vertex_corners()
    kids = core.children
    out = []
    stack = [("v", 0)]
    while stack:
        kind, x = stack.pop()
        if kind == "l":
            out.extend([0] * x)
            continue
        c = core.degrees[x]
        q = list(corners[x])
        if c == 0:
            q[0] += 1
        out.append(c + sum(q))
        todo = []
        for j in range(c + 1):
            todo.append(("l", q[j]))
            if j < c:
                todo.append(("v", kids[x][j]))
        stack.extend(reversed(todo))
    return PlaneTree(tuple(out))


# -- enumeration ---------------------------------------------------------------

def max_enum() -> int:
    return int(os.environ.get("BGWLAB_MAX_ENUM", "14"))


def enumerate_trees(n: int, leaves=None, internal=None, no_unary=False,
                    bound="env") -> Iterator[PlaneTree]:
    """All plane trees with n vertices, in increasing lexicographic order of
    their outdegree sequences, optionally filtered."""
    if bound == "env":
        bound = max_enum()
    if bound is not None and n > bound:
        raise BoundExceeded(f"n={n} exceeds enumeration bound {bound}")
    if n < 1:
        return
    if internal is not None:
        leaves = n - internal
    want = leaves
    seq = [0] * n

    def rec(i, h, nl):
        r = n - i
        if want is not None and (nl > want or nl + r < want):
            return
        if r == 1:
            if h == 0 and (want is None or nl + 1 == want):
                seq[i] = 0
                yield PlaneTree(tuple(seq))
            return
        # must stay >= 0 after this step and be able to come back down
        for d in range(0, r - h):
            if h + d - 1 < 0:
                continue
            if no_unary and d == 1:
                continue
            seq[i] = d
            yield from rec(i + 1, h + d - 1, nl + (d == 0))

    yield from rec(0, 0, 0)


def _min_size(k):
    return 1 if k == 1 else k + 1


@lru_cache(maxsize=None)
def _no_unary(k, cap):
    """Degree sequences of no-unary trees with k leaves and at most cap vertices."""
    if k == 1:
        return ((0,),) if cap >= 1 else ()
    out = []
    for c in range(2, k + 1):
        for parts in _positive_compositions(k, c):
            for body in _forest(parts, cap - 1):
                out.append((c,) + body)
    return tuple(sorted(out))


def _forest(parts, cap):
    if not parts:
        yield ()
        return
    rest_min = sum(_min_size(x) for x in parts[1:])
    for first in _no_unary(parts[0], cap - rest_min):
        for tail in _forest(parts[1:], cap - len(first)):
            yield first + tail


def _positive_compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _positive_compositions(total - first, parts - 1):
            yield (first,) + rest


def no_unary_trees(k: int, max_size=None):
    """All trees without unary vertices that have exactly k leaves
    (and at most max_size vertices)."""
    cap = 2 * k - 1 if max_size is None else min(max_size, 2 * k - 1)
    return [PlaneTree(x) for x in _no_unary(k, max(cap, 1))]


def count_prescribed_degrees(profile) -> int:
    """Number of plane trees with the given outdegree profile {degree: count}."""
    profile = {int(j): int(c) for j, c in dict(profile).items() if c}
    if any(c < 0 for c in profile.values()) or any(j < 0 for j in profile):
        raise InfeasibleProfile("negative entries")
    v = sum(profile.values())
    if v == 0 or sum(j * c for j, c in profile.items()) != v - 1:
        raise InfeasibleProfile("need sum_j j*b_j == sum_j b_j - 1")
    m = factorial(v)
    for c in profile.values():
        m //= factorial(c)
    if m % v:
        raise NonDivisible("multinomial not divisible by the vertex count")
    return m // v


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)
