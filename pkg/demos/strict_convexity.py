"""
Why the midpoint argument needs a round unit ball
=================================================

Two rough limits that sit exactly 2r apart pin down the ordinary limit, but
only when the norm is strictly convex. Under the max norm the same
configuration can occur for a sequence that has no limit at all.
"""

import roughlim as R

# Euclidean plane: the sequence is (1, 0) off a null set.
round_case = R.load_fixture("midpoint_euclidean")
res = R.check_midpoint(round_case, R.DENSITY_ZERO, R.EUCLIDEAN, 1.0, (0, 0), (2, 0))
print("euclidean:", res.status, "limit", res.witnesses["limit"])

# Max norm: half the indices carry (0, 1), the rest (0, -1).
square_case = R.load_fixture("midpoint_max")
res = R.check_midpoint(square_case, R.DENSITY_ZERO, R.MAX_NORM, 1.0, (-1, 0), (1, 0))
print("max norm:", res.status, "-", res.message)
print("  y1, y2 are rough limits:", res.witnesses["y1_member"], res.witnesses["y2_member"])
print("  separation:", res.witnesses["separation"])
print("  limit:", R.is_I_convergent(square_case, R.DENSITY_ZERO, R.MAX_NORM))

# The flat edge of the square ball is what breaks the argument.
u, v = R.Point((1.0, 1.0)), R.Point((1.0, -1.0))
print("||u||, ||v||, ||u + v|| under max:", R.norm_eval(R.MAX_NORM, u), R.norm_eval(R.MAX_NORM, v),
      R.norm_eval(R.MAX_NORM, u + v))

# The limit set under the max norm is a whole segment, sampled on a lattice.
s = R.rough_limit_set(square_case, R.DENSITY_ZERO, 1.0, R.MAX_NORM, lattice_step=0.25)
print("lattice members:", [tuple(p.coords) for p in s.lattice])
