"""
Plane trees, their paths and the two decompositions
====================================================

A plane tree is stored as its outdegrees in depth-first order.  Subtracting
one from each gives the Lukasiewicz path, which first reaches -1 at the very
last step.
"""
from bgwlab import (PlaneTree, decompose_leaves, decompose_unary, enumerate_trees, luka_encode,
                    recompose_leaves, recompose_unary)

t = PlaneTree((1, 3, 0, 1, 0, 0))
print("tree      ", t.degrees)
print("path      ", luka_encode(t).partial_sums)

# Erasing unary vertices leaves a tree with the same leaves; the removed
# vertices are remembered as a count above each surviving vertex.
u = decompose_unary(t)
print("reduced   ", u.reduced.degrees, "ancestors", u.ancestors)
assert recompose_unary(u) == t

# Erasing leaves instead keeps the internal vertices.  The leaves are
# remembered corner by corner (2k - 1 corners for k internal vertices).
c = decompose_leaves(t)
print("core      ", c.core.degrees, "corners", c.leaf_seq)
assert recompose_leaves(c) == t

# Both maps are bijections; count the images for all trees on 9 vertices.
trees = list(enumerate_trees(9))
print(len(trees), "trees,",
      len({decompose_unary(x) for x in trees}), "unary decompositions,",
      len({decompose_leaves(x) for x in trees if x.n_internal}), "leaf decompositions")
