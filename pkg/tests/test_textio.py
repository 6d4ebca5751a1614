import numpy as np
import pytest

import roughlim as R
from roughlim.textio import ParseError, format_region, parse_ideal, parse_rule, read_sexpr, save_sequence
from seqgen import random_region, random_sequence


@pytest.mark.parametrize("name", R.FIXTURES)
def test_fixture_round_trip(name):
    x = R.load_fixture(name)
    text = R.format_sequence(x)
    assert R.parse_sequence(text) == x
    assert R.format_sequence(R.parse_sequence(text)) == text
    assert R.validate(x).valid


def test_shipped_text_is_canonical():
    # fixtures are stored in canonical form apart from comments
    for name in R.FIXTURES:
        body = "\n".join(l for l in R.fixture_text(name).splitlines() if not l.lstrip().startswith(";")) + "\n"
        assert body == R.format_sequence(R.load_fixture(name))


def test_random_round_trip(rng):
    for _ in range(100):
        x = random_sequence(rng)
        assert R.parse_sequence(R.format_sequence(x)) == x
        reg = random_region(rng)
        assert R.parse_region(format_region(reg)) == reg


def test_file_round_trip(tmp_path, ex21):
    path = tmp_path / "x.seq"
    save_sequence(ex21, path)
    assert b"\r" not in path.read_bytes()
    assert R.load_sequence(path) == ex21


def test_region_syntax():
    reg = R.parse_region("(union (cell 2 2 0 0) (row 3) (finite (1 2) (3 4)) (compl (sparse squares cubes)))")
    assert reg.contains(4, 6) and reg.contains(3, 5) and reg.contains(1, 2)
    assert R.parse_region("full") == R.FULL


def test_rule_syntax():
    f = parse_rule("(formula (limit 1) (ratio-j))")
    assert f.declared_limit == R.Point.of(1)
    assert parse_rule("(formula divergent (jk 2))").declared_limit is None
    assert parse_rule("(const 1 -2.5)").value == R.Point((1.0, -2.5))


def test_ideal_names():
    assert parse_ideal("msa") is R.MINIMAL_SA
    assert parse_ideal("density-zero") is R.DENSITY_ZERO
    assert parse_ideal("finite") is R.FINITE_SETS
    with pytest.raises(ParseError):
        parse_ideal("maximal")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "(sequence x (default (const 1))",
        "(sequence x (default (const 1))) extra",
        "(sequence x (piece (cell 2 2 0 0) (const 1)))",
        "(sequence x (piece (cell 2 2 5 0) (const 1)) (default (const 0)))",
        "(sequence x (piece (blob 1) (const 1)) (default (const 0)))",
        "(sequence x (default (const one)))",
        "(sequence x (default (formula (limit 1) (sin-j))))",
        "(sequence x (default (const 1)) (default (const 2)))",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        R.parse_sequence(text)


def test_comments_are_ignored():
    assert read_sexpr("; note\n(a ; inline\n b)") == ["a", "b"]
