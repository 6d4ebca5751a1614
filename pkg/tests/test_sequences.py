import numpy as np
import pytest

import roughlim as R
from roughlim.sequences import AltTerm, ProductTerm, RatioTerm, ShiftTerm, OverSumTerm, require_valid
from seqgen import random_sequence

SQ = R.SparseProduct("squares", "squares")


def test_example_values(ex21):
    assert ex21(4, 9) == R.Point.of(72)
    assert ex21(2, 3) == R.Point.of(-1)
    assert ex21(1, 1) == R.Point.of(2)
    assert ex21(3, 5) == R.Point.of(1)


def test_eval_rejects_zero_index(ex21):
    with pytest.raises(ValueError):
        ex21(0, 1)


def test_grid_agrees_with_pointwise(ex21, rng):
    grid = R.eval_grid(ex21, 60, 45)
    assert grid.shape == (60, 45, 1)
    for j, k in rng.integers(1, 45, size=(200, 2)):
        assert grid[j - 1, k - 1, 0] == ex21(int(j), int(k))[0]
    shifted = R.eval_grid(ex21, 10, 10, j0=16, k0=9)
    assert shifted[0, 0, 0] == 2 * 16 * 9


def test_evaluation_is_deterministic(ex21):
    a = R.eval_grid(ex21, 100, 100)
    b = R.eval_grid(ex21, 100, 100)
    assert np.array_equal(a, b)


def test_catalog_terms():
    J = np.array([1, 2, 3])
    K = np.array([4, 4, 5])
    np.testing.assert_allclose(ProductTerm(2.0)(J, K), [8, 16, 30])
    np.testing.assert_allclose(AltTerm("jk")(J, K), [-1, 1, 1])
    np.testing.assert_allclose(AltTerm("j")(J, K), [-1, 1, -1])
    np.testing.assert_allclose(OverSumTerm(10.0)(J, K), [2, 10 / 6, 1.25])
    np.testing.assert_allclose(RatioTerm()(J, K), [0.5, 2 / 3, 0.75])
    np.testing.assert_allclose(ShiftTerm(1.0, 4.0)(J, K), [2, 1.5, 1 + 4 / 15])


def test_validation_examples(ex21, const5):
    assert R.validate(ex21).valid
    assert R.validate(const5).valid
    bad = R.StructuredSequence(
        (R.Piece(R.ResidueCell(2, 2, 0, 0), R.Formula((ProductTerm(1.0),), None)),), R.Constant(R.Point.of(0)))
    diag = R.validate(bad)
    assert not diag.valid
    assert any("divergent rule" in e for e in diag.errors)


def test_wrong_declared_limit_is_caught():
    wrong = R.Formula((ShiftTerm(2.0, 1.0),), R.Point.of(2.5))
    x = R.StructuredSequence((), wrong)
    assert not R.validate(x).valid
    with pytest.raises(R.InvalidSequence):
        require_valid(x)


def test_false_divergence_claim_is_caught():
    x = R.StructuredSequence(((SQ, R.Formula((RatioTerm(),), None)),), R.Constant(R.Point.of(0)))
    assert not R.validate(x).valid


def test_oscillating_formula_needs_null_region():
    alt = R.Formula((AltTerm("jk"),), None)
    assert R.validate(R.StructuredSequence(((SQ, alt),), R.Constant(R.Point.of(0)))).valid
    assert not R.validate(R.StructuredSequence((), alt)).valid


def test_dimension_mismatch():
    x = R.StructuredSequence(((SQ, R.Constant(R.Point((1.0, 2.0)))),), R.Constant(R.Point.of(0)))
    assert not R.validate(x).valid


def test_boundedness_examples(ex21, const5):
    b = R.is_bounded(ex21)
    assert not b.holds and b.witness == SQ
    assert R.is_bounded(const5).bound == 6
    alt = R.load_fixture("alternating")
    assert R.is_bounded(alt).holds and R.is_bounded(alt).bound == 2


def test_I_boundedness_examples(ex21, const5):
    c = R.is_I_bounded(ex21, R.DENSITY_ZERO)
    assert c.holds and c.bound == 2
    assert not R.is_I_bounded(ex21, R.MINIMAL_SA).holds
    assert not R.is_I_bounded(ex21, R.FINITE_SETS).holds
    for ideal in (R.DENSITY_ZERO, R.MINIMAL_SA, R.FINITE_SETS):
        assert R.is_I_bounded(const5, ideal).holds


def test_escaping_values_on_a_finite_set_stay_bounded():
    x = R.StructuredSequence(((R.FiniteSet(((3, 4),)), R.Formula((ProductTerm(10.0),), None)),), R.Constant(R.Point.of(1)))
    cert = R.is_bounded(x)
    assert cert.holds and cert.bound == 121


def test_piece_coverage(rng):
    for _ in range(10):
        x = random_sequence(rng)
        J = np.arange(1, 201)[:, None]
        K = np.arange(1, 201)[None, :]
        parts = x.parts()
        owner = np.stack([np.broadcast_to(np.asarray(p.region.contains(J, K), dtype=bool), (200, 200)) for p in parts])
        assert np.array_equal(owner.sum(axis=0), np.ones((200, 200)))
        grid = R.eval_grid(x, 200, 200)[..., 0]
        for idx, p in enumerate(parts):
            mask = owner[idx]
            if mask.any():
                np.testing.assert_array_equal(grid[mask], p.rule.evaluate(J, K)[..., 0][np.broadcast_to(mask, (200, 200))])


def test_bound_is_sound_on_large_grid(rng):
    checked = 0
    for _ in range(12):
        x = random_sequence(rng)
        cert = R.is_bounded(x)
        if cert.holds:
            assert np.abs(R.eval_grid(x, 1000, 1000)).max() < cert.bound
            checked += 1
    assert checked >= 3


def test_I_boundedness_is_monotone_in_the_ideal(rng):
    for _ in range(60):
        x = random_sequence(rng)
        if R.is_I_bounded(x, R.MINIMAL_SA).holds:
            assert R.is_I_bounded(x, R.DENSITY_ZERO).holds
        if R.is_bounded(x).holds:
            assert R.is_I_bounded(x, R.MINIMAL_SA).holds


def test_random_sequences_validate(rng):
    for _ in range(50):
        assert R.validate(random_sequence(rng)).valid
