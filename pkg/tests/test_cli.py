import csv
import io
import json
import subprocess
import sys

import pytest

from roughlim.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_analyze_example(capsys):
    code, doc = run_json(capsys, "analyze", "--seq", "example21.seq", "--ideal", "density-zero")
    res = doc["result"]
    assert code == 0
    assert [c["point"] for c in res["cluster_points"]] == [[-1], [1]]
    assert [c["support"] for c in res["cluster_points"]] == ["1/2", "1/2"]
    assert (res["limsup"], res["liminf"], res["r_min"]) == (1, -1, 1)
    assert res["bounded"] is False and res["i_bounded"] is True
    assert res["limit"] is None


def test_analyze_constant_and_msa(capsys):
    _, doc = run_json(capsys, "analyze", "--seq", "constant")
    assert doc["result"]["cluster_points"][0]["point"] == [5] and doc["result"]["r_min"] == 0
    _, doc = run_json(capsys, "analyze", "--seq", "example21", "--ideal", "msa")
    assert doc["result"]["i_bounded"] is False and doc["result"]["r_min"] == "inf"


def test_limitset_sweep(capsys):
    code, doc = run_json(capsys, "limitset", "--seq", "example21", "--r-from", "0", "--r-to", "3", "--r-step", "0.5")
    rows = doc["result"]["table"]
    got = [None if r["empty"] else (r["lo"], r["hi"]) for r in rows]
    assert code == 0
    assert got == [None, None, (0, 0), (-0.5, 0.5), (-1, 1), (-1.5, 1.5), (-2, 2)]


def test_limitset_csv_diameters(capsys):
    code, out, _ = run(capsys, "limitset", "--seq", "example21", "--r-from", "1", "--r-to", "3", "--r-step", "0.5",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [float(r["diameter"]) for r in rows] == [0, 1, 2, 3, 4]
    assert [float(r["r"]) for r in rows] == [1, 1.5, 2, 2.5, 3]


def test_limitset_constant(capsys):
    _, doc = run_json(capsys, "limitset", "--seq", "constant", "--r", "1")
    row = doc["result"]["table"][0]
    assert (row["lo"], row["hi"]) == (4, 6)


def test_limitset_with_oracle(capsys):
    _, doc = run_json(capsys, "limitset", "--seq", "example21", "--r", "2", "--oracle")
    row = doc["result"]["table"][0]
    assert row["oracle_points"] == 21 and row["hausdorff"] <= 0.15


def test_check_all(capsys):
    code, doc = run_json(capsys, "check", "--seq", "example21", "--r", "2")
    assert code == 0
    assert {c["name"] for c in doc["result"]["checks"]} == {
        "diameter", "ball", "cluster-ball", "boundedness", "closedness", "limsup-liminf"}
    assert all(c["status"] in ("pass", "vacuous") for c in doc["result"]["checks"])


def test_check_midpoints(capsys):
    code, doc = run_json(capsys, "check", "--seq", "midpoint_euclidean", "--theorem", "midpoint", "--r", "1",
                         "--y1", "0,0", "--y2", "2,0")
    (c,) = doc["result"]["checks"]
    assert code == 0 and c["status"] == "pass" and c["witnesses"]["limit"] == [1, 0]
    code, doc = run_json(capsys, "check", "--seq", "midpoint_max", "--theorem", "midpoint", "--r", "1",
                         "--norm", "max", "--y1=-1,0", "--y2", "1,0")
    (c,) = doc["result"]["checks"]
    assert code == 0 and c["status"] == "hypothesis-not-met"


def test_oracle_compare(capsys):
    code, doc = run_json(capsys, "oracle-compare", "--seq", "example21", "--r", "2")
    assert code == 0 and doc["result"]["agree"]
    assert doc["result"]["comparisons"][0]["hausdorff"] <= 0.15
    code, doc = run_json(capsys, "oracle-compare", "--seq", "constant", "--r", "1", "--lattice", "0.05")
    assert code == 0 and doc["result"]["comparisons"][0]["hausdorff"] <= 0.1
    code, doc = run_json(capsys, "oracle-compare", "--seq", "example21", "--r", "0.5")
    cmp_ = doc["result"]["comparisons"][0]
    assert code == 0 and cmp_["exact"] == {"empty": True} and cmp_["oracle_points"] == []


def test_oracle_disagreement_exit_code(tmp_path, capsys):
    # a band carrying an outlier looks large on a tiny grid
    path = tmp_path / "band.seq"
    path.write_text("(sequence band\n  (dim 1)\n  (piece (row 3) (const 100))\n  (default (const 0)))\n")
    code, doc = run_json(capsys, "oracle-compare", "--seq", str(path), "--r", "1", "--grid", "5x5,10x10,20x20")
    assert code == 1 and not doc["result"]["agree"]


def test_output_is_deterministic(capsys):
    argv = ["limitset", "--seq", "example21", "--r-from", "0", "--r-to", "3", "--r-step", "0.5", "--oracle"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_input_errors(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", "--seq", str(tmp_path / "missing.seq"))
    assert code == 2 and "no such" in err
    bad = tmp_path / "bad.seq"
    bad.write_text("(sequence x (piece (cell 2 2 0 0) (const 1))")
    code, _, err = run(capsys, "analyze", "--seq", str(bad))
    assert code == 2
    code, _, _ = run(capsys, "analyze", "--seq", "constant", "--ideal", "maximal")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["limitset", "--seq", "constant", "--r", "-1"])
    assert exc.value.code == 2


def test_invalid_sequence_is_an_input_error(tmp_path, capsys):
    path = tmp_path / "div.seq"
    path.write_text("(sequence d\n  (dim 1)\n  (default (formula divergent (jk 1))))\n")
    code, _, err = run(capsys, "analyze", "--seq", str(path))
    assert code == 2 and "divergent" in err


def test_undecidable_region_exit_code(tmp_path, capsys):
    path = tmp_path / "huge.seq"
    path.write_text("(sequence h\n  (dim 1)\n  (piece (cell 2003 2003 0 0) (const 1))\n  (default (const 0)))\n")
    code, _, err = run(capsys, "analyze", "--seq", str(path))
    assert code == 3 and "undecidable" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "roughlim", "limitset", "--seq", "constant", "--r", "1", "--format", "csv"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.splitlines()[0] == "r,empty,lo,hi,diameter"
    assert proc.stdout.splitlines()[1] == "1.0,False,4.0,6.0,2.0"
