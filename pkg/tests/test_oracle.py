import numpy as np
import pytest

import roughlim as R
from roughlim import oracle as O

DZ, MSA = R.DENSITY_ZERO, R.MINIMAL_SA
SQ = R.SparseProduct("squares", "squares")


def test_empirical_density_examples():
    assert O.empirical_density(lambda j, k: np.ones_like(j * k, dtype=bool), 10, 10) == 1.0
    assert O.empirical_density(SQ.contains, 100, 100) == 0.01
    assert O.empirical_density(lambda j, k: (j + k) % 2 == 0, 10, 10) == 0.5


def test_counts_are_integral(rng):
    for _ in range(20):
        n, m = (int(v) for v in rng.integers(1, 300, 2))
        a, ra = int(rng.integers(1, 7)), 0
        pred = lambda j, k: (j % a == ra) | SQ.contains(j, k)  # noqa: E731
        d = O.empirical_density(pred, n, m)
        assert abs(d * n * m - round(d * n * m)) < 1e-9


def test_exhaustion_invariants():
    assert O.Exhaustion.parse("50x50,100x100,200x200,400x400") == O.DEFAULT_EXHAUSTION
    assert O.Exhaustion.parse("10,20,40").schedule == ((10, 10), (20, 20), (40, 40))
    for bad in ("50x50,100x100", "50x50,40x100,200x200", "0x1,2x2,3x3"):
        with pytest.raises(ValueError):
            O.Exhaustion.parse(bad)


def test_density_zero_verdicts():
    v = O.oracle_small(DZ, SQ.contains)
    assert v.decision == O.SMALL
    assert v.trace == pytest.approx((0.0196, 0.01, 0.0049, 0.0025), abs=1e-4)
    cell = R.ResidueCell(2, 2, 0, 0)
    v = O.oracle_small(DZ, cell.contains)
    assert v.decision == O.NOT_SMALL and min(v.trace) > 0.2
    v = O.oracle_small(DZ, lambda j, k: (j + k) % 2 == 0)
    assert v.decision == O.NOT_SMALL and all(abs(t - 0.5) < 0.01 for t in v.trace)


def test_inconclusive_is_kept():
    # density 1/36 sits between the two thresholds
    v = O.oracle_small(DZ, R.ResidueCell(6, 6, 0, 0).contains)
    assert v.decision == O.INCONCLUSIVE


def test_band_verdicts():
    assert O.oracle_small(MSA, R.RowBand(3).contains).small
    assert O.oracle_small(MSA, R.Union((R.RowBand(3), R.ColBand(19))).contains).small
    assert not O.oracle_small(MSA, SQ.contains).small
    assert O.oracle_small(R.FINITE_SETS, R.FiniteSet(((3, 4), (30, 2))).contains).small
    assert not O.oracle_small(R.FINITE_SETS, R.RowBand(3).contains).small


def test_rough_limit_verdicts(ex21, const5):
    assert O.oracle_is_rI_limit(ex21, DZ, 0, 1, 0.1).small
    assert O.oracle_is_rI_limit(ex21, DZ, 0, 0.5, 0.1).decision == O.NOT_SMALL
    assert O.oracle_is_rI_limit(const5, DZ, 5, 0, 0.1).small
    assert not O.oracle_is_rI_limit(ex21, MSA, 0, 1, 0.1).small
    with pytest.raises(ValueError):
        O.oracle_is_rI_limit(const5, DZ, 5, 0, 0.0)


def test_scan_example(ex21):
    pts = O.oracle_limit_set_scan(ex21, DZ, 2, (-4, 4), 0.1)
    vals = [p[0] for p in pts]
    assert vals[0] == pytest.approx(-1) and vals[-1] == pytest.approx(1)
    assert O.hausdorff_to_interval(pts, R.Interval(-1, 1)) <= 0.15
    assert O.oracle_limit_set_scan(ex21, DZ, 0.5, (-4, 4), 0.1) == []


def test_scan_constant(const5):
    pts = O.oracle_limit_set_scan(const5, DZ, 1, (3, 7), 0.1)
    assert O.hausdorff_to_interval(pts, R.Interval(4, 6)) <= 0.1 + 1e-9


def test_scan_is_deterministic(monkeypatch, ex21):
    runs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("ROUGHLIM_THREADS", threads)
        runs.append(O.oracle_limit_set_scan(ex21, DZ, 1.5, (-3, 3), 0.1))
    assert runs[0] == runs[1]


def test_plane_scan_is_row_major():
    x = R.load_fixture("midpoint_euclidean")
    pts = O.oracle_limit_set_scan(x, DZ, 1, [(0, 2), (-1, 1)], 0.5)
    assert pts == sorted(pts, key=lambda p: p.coords)
    assert R.Point((1.0, 0.0)) in pts and R.Point((0.0, 0.0)) in pts


def test_tail_checks(ex21, const5):
    assert O.classic_tail_check(const5, 5, 1, 0.1, 3)
    for xi in (-5, 0, 5):
        assert not O.classic_tail_check(ex21, xi, 10, 0.1, 10)
    assert O.classic_tail_check(R.load_fixture("alternating"), 0, 1, 0.1, 5)


def test_hausdorff_distance():
    iv = R.Interval(0, 1)
    assert O.hausdorff_to_interval([0.0, 0.5, 1.0], iv) == pytest.approx(0.25)
    assert O.hausdorff_to_interval([0.0, 1.0, 2.0], iv) == pytest.approx(1.0)
    assert O.hausdorff_to_interval([], R.Interval.empty()) == 0
    assert O.hausdorff_to_interval([], iv) == float("inf")


def test_lattice_points():
    pts = O.lattice((0, 1), 0.25)
    assert [p[0] for p in pts] == [0, 0.25, 0.5, 0.75, 1]
    assert len(O.lattice([(0, 1), (0, 2)], 0.5)) == 3 * 5
