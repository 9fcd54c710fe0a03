"""
Reduced trees as n grows
========================

Total variation between the exact law of the reduced tree and its limit, for
a few offspring laws.  Each row is one size.
"""
from fractions import Fraction

from bgwlab import (Geometric, PoissonType, PolyExp, Star, StableTail, Transfer, limit_reduced,
                    reduced_dist_internal, reduced_dist_leaves, tv_exact)
from bgwlab.exact import LeavesMax

k = 3
geo = Geometric(Fraction(1, 2))
cases = [
    ("leaves, geometric -> uniform binary", lambda n: reduced_dist_leaves(geo, n, k),
     limit_reduced(LeavesMax(geo, k))),
    ("internal, geometric -> uniform", lambda n: reduced_dist_internal(geo, n, k),
     limit_reduced(Transfer(Fraction(1), k))),
    ("internal, Poisson -> 1/prod c!", lambda n: reduced_dist_internal(PolyExp((1,)), n, k),
     limit_reduced(PoissonType(k))),
    ("internal, stable 3/2 -> star", lambda n: reduced_dist_internal(StableTail(Fraction(3, 2), 0, Fraction(1, 2)), n, k),
     limit_reduced(Star(k))),
]
for label, law, limit in cases:
    print(label)
    for n in (50, 100, 200, 400):
        print(f"   n={n:4d}  TV={float(tv_exact(law(n), limit)):.3e}")
