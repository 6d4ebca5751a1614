"""
Checking exact answers against brute force
==========================================

The oracle knows nothing about regions or rules. It evaluates the sequence on
growing grids and asks whether exceedance sets look small.
"""

import roughlim as R
from roughlim import oracle as O

x = R.load_fixture("example21")
dz = R.DENSITY_ZERO

# Density estimates of the squares block shrink like 1/n.
squares = R.SparseProduct("squares", "squares")
print("squares block:", O.oracle_small(dz, squares.contains))

# Exceedance sets for the candidate 0 at two roughness levels.
for r in (1.0, 0.5):
    print(f"xi = 0, r = {r}:", O.oracle_is_rI_limit(x, dz, 0.0, r, eps=0.1))

# Scan a lattice and compare with the exact interval.
for r in (0.5, 1.0, 2.0):
    exact = R.rough_limit_set(x, dz, r).interval
    pts = O.oracle_limit_set_scan(x, dz, r, box=(-4, 4), h=0.1)
    vals = [round(p[0], 2) for p in pts]
    span = f"{vals[0]} .. {vals[-1]}" if vals else "none"
    print(f"r = {r}: exact {exact}, scan {len(pts)} points ({span}), "
          f"Hausdorff {O.hausdorff_to_interval(pts, exact):.3f}")

# Grid estimates of the ideal limsup and liminf of a three-valued sequence.
y = R.load_fixture("three_values")
print("three values: exact", R.ideal_liminf(y, dz), R.ideal_limsup(y, dz),
      "grid", O.empirical_liminf(y, dz), O.empirical_limsup(y, dz))
