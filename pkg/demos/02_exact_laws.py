"""
Exact laws of the reduced tree
==============================

For a BGW tree conditioned on its size and on its number of leaves (or of
internal vertices) the law of the reduced tree is a finite rational
distribution.  Here it is computed exactly and compared with the sum over
every tree of the conditioned size.
"""
from fractions import Fraction

from bgwlab import Geometric, PolyExp, reduced_dist_internal, reduced_dist_leaves
from bgwlab.oracles import SizeClass

geo = Geometric(Fraction(1, 2))

law = reduced_dist_leaves(geo, 10, 3)
brute = SizeClass(geo, 10).reduced_leaves(3)
print("leaves, n=10, k=3")
for a, p in sorted(law.items()):
    print(f"   {a.key():>18}  {str(p):>10}")
print("   same as enumeration:", law == brute)

# Poisson(1) offspring: the weights carry a factor exp(-1) per vertex which
# cancels in every conditional law, so everything stays rational.
poi = PolyExp((1,))
law = reduced_dist_internal(poi, 200, 3)
print("internal, Poisson, n=200, k=3")
for a, p in sorted(law.items()):
    print(f"   {a.key():>18}  {float(p):.6f}")
