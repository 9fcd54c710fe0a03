"""
Sampling conditioned trees
==========================

Three samplers for trees with n vertices and k leaves should agree: the
exact one (reduced tree, then uniform unary chains), the cycle-lemma one and
plain rejection.  A chi-square test against the exact law checks each one.
"""
from collections import Counter
from fractions import Fraction

from bgwlab import Geometric, RngStream, chi_square, sample_leaves_cycle, sample_leaves_exact
from bgwlab.oracles import SizeClass
from bgwlab.sampling import sample_rejection_batch

d = Geometric(Fraction(1, 2))
n, k, N = 8, 3, 20000
law = SizeClass(d, n).conditional(leaves=k)

# one independent substream per sampler, each created once
rng = RngStream(seed=2024)
r0, r1, r2 = (rng.substream(i) for i in range(3))
exact = [sample_leaves_exact(d, n, k, r0) for _ in range(N)]
cycle = [sample_leaves_cycle(d, n, k, r1) for _ in range(N)]
rejected, report = sample_rejection_batch(d, n, k, "leaves", r2, N)

for name, batch in [("exact", exact), ("cycle", cycle), ("rejection", rejected)]:
    print(f"{name:>10}: chi-square p = {chi_square(batch, law):.3f}")
print(f"rejection needed {report.rejections + report.samples} proposals")

# the most frequent shapes
for t, c in Counter(exact).most_common(3):
    print(t.key(), c / N, float(law[t]))
