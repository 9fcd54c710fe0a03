"""Brute-force laws obtained by summing BGW weights over every tree.

These share nothing with the formula based code in ``exact`` beyond the tree
type and the decompositions, and serve as ground truth for small n.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache

from .exact import IntSeqDist, TreeDist
from .trees import decompose_leaves, decompose_unary, enumerate_trees


def tree_weight(d, t) -> Fraction:
    """prod_u weight(c_u): the BGW probability of t up to scale**(n*scale_power)."""
    mu = d.weights(max(t.degrees))
    w = Fraction(1)
    for c in t.degrees:
        w *= mu[c]
        if not w:
            break
    return w


class TreeCatalog:
    """Every tree with n vertices, grouped by leaf count, with both reduced trees."""

    def __init__(self, n):
        self.n = n
        self.by_leaves = defaultdict(list)
        for t in enumerate_trees(n):
            red = decompose_unary(t).reduced
            core = decompose_leaves(t).core if t.n_internal else None
            sortedK = tuple(sorted((c - 1 for c in t.degrees if c > 0), reverse=True))
            self.by_leaves[t.n_leaves].append((t, red, core, sortedK))


@lru_cache(maxsize=16)
def catalog(n) -> TreeCatalog:
    return TreeCatalog(n)


class SizeClass:
    """All trees with n vertices together with their weights under d."""

    def __init__(self, d, n):
        self.d, self.n = d, n
        self.cat = catalog(n)
        self._w = {k: [tree_weight(d, row[0]) for row in rows]
                   for k, rows in self.cat.by_leaves.items()}

    def total_leaves(self, k):
        return sum(self._w.get(k, ()), Fraction(0))

    def _rows(self, leaves=None, internal=None):
        k = leaves if leaves is not None else self.n - internal
        rows = self.cat.by_leaves.get(k, [])
        ws = self._w.get(k, [])
        tot = sum(ws, Fraction(0))
        if not tot:
            return []
        return [(row, w / tot) for row, w in zip(rows, ws) if w]

    def conditional(self, leaves=None, internal=None):
        return {row[0]: p for row, p in self._rows(leaves, internal)}

    def _group(self, pos, leaves=None, internal=None, cls=TreeDist):
        out = defaultdict(Fraction)
        for row, p in self._rows(leaves, internal):
            out[row[pos]] += p
        return cls(out)

    def reduced_leaves(self, k):
        return self._group(1, leaves=k)

    def reduced_internal(self, k):
        return self._group(2, internal=k)

    def outdegree_sorted(self, k):
        return self._group(3, internal=k, cls=IntSeqDist)
