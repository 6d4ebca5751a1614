"""
Rough limit sets of an unbounded double sequence
================================================

The sequence is 2jk when j and k are both squares and (-1)^(j+k) elsewhere.
It is unbounded, but the unbounded part lives on a set of density zero.
"""

import roughlim as R

x = R.load_fixture("example21")
print(R.format_sequence(x))

# A few values: the squares block grows, everything else flips sign.
for j, k in [(1, 1), (4, 9), (2, 3), (3, 5)]:
    print(f"x[{j},{k}] = {x(j, k)[0]:g}")

# Under the density-zero ideal only the two parity values matter.
dz = R.DENSITY_ZERO
print("clusters:", [c.point[0] for c in R.cluster_points(x, dz)])
print("smallest useful roughness:", R.min_roughness_degree(x, dz))

# The limit set is empty below r = 1 and grows linearly after.
for r in (0, 0.5, 1, 1.5, 2, 3):
    s = R.rough_limit_set(x, dz, r)
    print(f"r = {r:<4} -> {s}   diameter {s.diameter:g}")

# Pringsheim tails always contain square pairs, so the classic set is empty.
for r in (1, 10, 1000):
    print(f"classic, r = {r}: {R.classic_rough_limit_set(x, r)}")
