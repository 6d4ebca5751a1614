"""
Three ideals on N x N
=====================

Sets of indices are symbolic regions. Each ideal decides which of them count
as small: density zero, coverable by finitely many rows, columns and points,
or simply finite.
"""

import roughlim as R

regions = {
    "even pairs": R.ResidueCell(2, 2, 0, 0),
    "square pairs": R.SparseProduct("squares", "squares"),
    "row 7": R.RowBand(7),
    "two points": R.FiniteSet(((1, 1), (4, 9))),
    "row 7 minus odd columns": R.Difference(R.RowBand(7), R.ResidueCell(1, 2, 0, 1)),
}
ideals = (R.DENSITY_ZERO, R.MINIMAL_SA, R.FINITE_SETS)

print(f"{'region':<26}{'density':>9}  " + "  ".join(f"{str(I):>28}" for I in ideals))
for name, reg in regions.items():
    flags = "  ".join(f"{str(R.ideal_contains(I, reg)):>28}" for I in ideals)
    print(f"{name:<26}{str(R.region_density(reg)):>9}  {flags}")

# Residue cells combine exactly.
a, b = R.ResidueCell(2, 3, 0, 1), R.ResidueCell(3, 2, 1, 1)
print("d(A | B) =", R.region_density(a | b), " d(A) + d(B) - d(A & B) =",
      R.region_density(a).exact + R.region_density(b).exact - R.region_density(a & b).exact)

# Axioms on a sample family, and the admissibility classes.
sample = list(regions.values())
for I in ideals:
    rep = R.check_ideal_axioms(I, sample)
    print(f"{I}: axioms ok={rep.passed} ({rep.checks} checks), "
          f"admissible={R.is_admissible(I)}, strongly={R.is_strongly_admissible(I)}")
