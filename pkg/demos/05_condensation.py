"""
Condensation at the root
========================

With a stable offspring tail the root of a tree with k internal vertices
keeps almost all the leaves, while with Poisson offspring the leaves are
shared evenly.  Leaf counts are drawn exactly from the per-vertex tables,
without building the trees.
"""
from fractions import Fraction

import numpy as np

from bgwlab import PolyExp, RngStream, StableTail, sample_internal_decomps

n, k, N = 1000, 3, 2000
for name, d in [("stable 3/2", StableTail(Fraction(3, 2), 0, Fraction(1, 2))),
                ("Poisson(1)", PolyExp((1,)))]:
    decs = sample_internal_decomps(d, n, k, RngStream(7), N)
    shares = np.array([sorted(x.leaf_counts(), reverse=True) for x in decs]) / n
    root = np.array([x.leaf_counts()[0] for x in decs]) / n
    print(f"{name:>11}: mean sorted leaf shares {np.round(shares.mean(axis=0), 3)}, "
          f"root share {root.mean():.3f}")
