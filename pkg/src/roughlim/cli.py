"""Command-line front end: ``roughlim analyze|limitset|check|oracle-compare``.

Exit codes: 0 success, 1 failed check or oracle disagreement, 2 input error,
3 undecidable region.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from . import FIXTURES, load_fixture
from . import analysis as A
from . import oracle as O
from .geometry import EUCLIDEAN, Interval, NormSpec, Point
from .ideals import Ideal, UndecidableRegion
from .sequences import InvalidSequence, StructuredSequence, eval_grid, is_bounded, is_I_bounded
from .textio import ParseError, load_sequence

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNDECIDABLE = 0, 1, 2, 3

CHECK_CHOICES = A.THEOREM_CHECKS + ("midpoint", "all")


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    seq: str
    ideal: Ideal = Ideal.DENSITY_ZERO
    r_values: tuple = (1.0,)
    fmt: str = "json"
    oracle: bool = False
    exhaustion: O.Exhaustion = O.DEFAULT_EXHAUSTION
    lattice: float = 0.1
    norm: NormSpec = EUCLIDEAN
    theorem: str = "all"
    y1: Optional[Point] = None
    y2: Optional[Point] = None

    def echo(self) -> dict:
        return {
            "command": self.command,
            "seq": self.seq,
            "ideal": self.ideal.value,
            "r": list(self.r_values),
            "oracle": self.oracle,
            "grid": str(self.exhaustion),
            "lattice": self.lattice,
            "norm": str(self.norm),
            "theorem": self.theorem if self.command == "check" else None,
            "y1": None if self.y1 is None else list(self.y1.coords),
            "y2": None if self.y2 is None else list(self.y2.coords),
        }


# -- serialisation ------------------------------------------------------------


def _num(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    x = float(f"{x:.12g}")
    return 0.0 if x == 0 else x


def clean(obj):
    """Convert results into JSON-ready values with fixed number formatting."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, Point):
        return [_num(c) for c in obj.coords]
    if isinstance(obj, Interval):
        return {"empty": True} if obj.is_empty else {"empty": False, "lo": _num(obj.lo), "hi": _num(obj.hi)}
    if isinstance(obj, (str, type(None), bool)):
        return obj
    return _num(obj)


def to_json(doc: dict) -> str:
    return json.dumps(clean(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else k, obj[k], rows)
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(obj) if isinstance(obj, list) else obj))


def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    doc = clean(doc)
    table = doc["result"].get("table")
    if table:
        cols = list(table[0])
        w.writerow(cols)
        for row in table:
            w.writerow(["" if row[c] is None else row[c] for c in cols])
        return buf.getvalue()
    rows: list = []
    _flatten("", doc, rows)
    w.writerow(["key", "value"])
    for k, v in rows:
        w.writerow([k, "" if v is None else v])
    return buf.getvalue()


# -- commands -----------------------------------------------------------------


def _load(cfg: RunConfig) -> StructuredSequence:
    if os.path.exists(cfg.seq):
        return load_sequence(cfg.seq)
    name = os.path.splitext(os.path.basename(cfg.seq))[0]
    if cfg.seq in FIXTURES or (cfg.seq.endswith(".seq") and name in FIXTURES):
        return load_fixture(name)
    raise InputError(f"no such sequence file: {cfg.seq}")


def _base(cfg, x):
    return {"input": dict(cfg.echo(), sequence=x.name, dim=x.dim), "result": {}}


def cmd_analyze(cfg: RunConfig) -> dict:
    x = _load(cfg)
    doc = _base(cfg, x)
    b = is_bounded(x, cfg.norm)
    ib = is_I_bounded(x, cfg.ideal, cfg.norm)
    clusters = A.cluster_points(x, cfg.ideal)
    res = {
        "bounded": b.holds,
        "bound": b.bound,
        "i_bounded": ib.holds,
        "i_bound": ib.bound,
        "cluster_points": [{"point": c.point, "support": c.support, "at_least": c.at_least} for c in clusters],
        "limit": A.is_I_convergent(x, cfg.ideal, cfg.norm),
    }
    if x.dim == 1:
        res["r_min"] = A.min_roughness_degree(x, cfg.ideal)
        res["limsup"] = A.ideal_limsup(x, cfg.ideal) if ib.holds else None
        res["liminf"] = A.ideal_liminf(x, cfg.ideal) if ib.holds else None
    doc["result"] = res
    return doc


def _oracle_box(values: np.ndarray, r: float):
    flat = values.reshape(-1, values.shape[-1])
    lo = np.quantile(flat, 0.01, axis=0) - r - 1
    hi = np.quantile(flat, 0.99, axis=0) + r + 1
    return [(float(np.floor(a)), float(np.ceil(b))) for a, b in zip(lo, hi)]


def _scan(x, cfg, r):
    values = eval_grid(x, *cfg.exhaustion.final)
    box = _oracle_box(values, r)
    return O.oracle_limit_set_scan(x, cfg.ideal, r, box, cfg.lattice, ex=cfg.exhaustion, norm=cfg.norm)


def cmd_limitset(cfg: RunConfig) -> dict:
    x = _load(cfg)
    doc = _base(cfg, x)
    rows = []
    for r in cfg.r_values:
        s = A.rough_limit_set(x, cfg.ideal, r, cfg.norm, lattice_step=None if x.dim == 1 else cfg.lattice)
        row = {"r": r, "empty": s.is_empty}
        if x.dim == 1:
            row["lo"] = None if s.is_empty else s.interval.lo
            row["hi"] = None if s.is_empty else s.interval.hi
        else:
            row["lattice_points"] = len(s.lattice)
        row["diameter"] = s.diameter
        if cfg.oracle and x.dim == 1:
            pts = _scan(x, cfg, r)
            row["oracle_points"] = len(pts)
            row["hausdorff"] = O.hausdorff_to_interval(pts, s.interval)
        rows.append(row)
    doc["result"] = {"table": rows}
    return doc


def cmd_check(cfg: RunConfig) -> dict:
    x = _load(cfg)
    doc = _base(cfg, x)
    r = cfg.r_values[0]
    if cfg.theorem == "all":
        names = list(A.THEOREM_CHECKS) if x.dim == 1 else ["diameter", "cluster-ball"]
        if cfg.y1 is not None and cfg.y2 is not None:
            names.append("midpoint")
    else:
        names = [cfg.theorem]
    results = []
    for name in names:
        if name == "midpoint":
            if cfg.y1 is None or cfg.y2 is None:
                raise InputError("the midpoint check needs --y1 and --y2")
            results.append(A.check_midpoint(x, cfg.ideal, cfg.norm, r, cfg.y1, cfg.y2))
        elif name in ("diameter", "cluster-ball"):
            fn = A.check_diameter if name == "diameter" else A.check_cluster_ball
            results.append(fn(x, cfg.ideal, r, cfg.norm))
        else:
            results.extend(A.run_checks(x, cfg.ideal, r, [name]))
    doc["result"] = {
        "checks": [{"name": c.name, "status": c.status, "witnesses": c.witnesses, "message": c.message} for c in results],
        "failed": sum(c.status == A.FAIL for c in results),
    }
    return doc


def cmd_oracle_compare(cfg: RunConfig) -> dict:
    x = _load(cfg)
    if x.dim != 1:
        raise InputError("oracle-compare needs a real (dim 1) sequence")
    doc = _base(cfg, x)
    tol = 1.5 * cfg.lattice
    rows = []
    for r in cfg.r_values:
        exact = A.rough_limit_set(x, cfg.ideal, r).interval
        pts = _scan(x, cfg, r)
        dist = O.hausdorff_to_interval(pts, exact)
        rows.append({
            "r": r,
            "exact": exact,
            "oracle_points": [p[0] for p in pts],
            "hausdorff": dist,
            "tolerance": tol,
            "agree": dist <= tol,
        })
    doc["result"] = {"comparisons": rows, "agree": all(row["agree"] for row in rows)}
    return doc


COMMANDS = {
    "analyze": cmd_analyze,
    "limitset": cmd_limitset,
    "check": cmd_check,
    "oracle-compare": cmd_oracle_compare,
}


def exit_code(cfg: RunConfig, doc: dict) -> int:
    if cfg.command == "check" and doc["result"]["failed"]:
        return EXIT_FAIL
    if cfg.command == "oracle-compare" and not doc["result"]["agree"]:
        return EXIT_FAIL
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------


def _point(text: str) -> Point:
    try:
        return Point(tuple(float(t) for t in text.split(",")))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad point {text!r}: {exc}") from None


def _nonneg(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roughlim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--seq", required=True, help="sequence file, or a shipped fixture name")
        p.add_argument("--ideal", default="density-zero", help="density-zero | msa | finite-sets")
        p.add_argument("--r", type=_nonneg, help="roughness degree")
        p.add_argument("--r-from", type=_nonneg)
        p.add_argument("--r-to", type=_nonneg)
        p.add_argument("--r-step", type=_positive)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--oracle", action="store_true", help="also run the brute-force lattice scan")
        p.add_argument("--lattice", type=_positive, default=0.1, help="lattice step h")
        p.add_argument("--grid", help="exhaustion, e.g. 50x50,100x100,200x200,400x400")
        p.add_argument("--norm", default="2", help="p >= 1 or 'max'")
        p.add_argument("--y1", type=_point)
        p.add_argument("--y2", type=_point)
        if name == "check":
            p.add_argument("--theorem", choices=CHECK_CHOICES, default="all")
    return parser


def _r_values(args) -> tuple:
    sweep = (args.r_from, args.r_to, args.r_step)
    if any(v is not None for v in sweep):
        if args.r is not None or any(v is None for v in sweep):
            raise InputError("give either --r or all of --r-from/--r-to/--r-step")
        lo, hi, step = sweep
        if hi < lo:
            raise InputError("--r-to must be >= --r-from")
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return tuple(round(lo + i * step, 12) for i in range(n))
    return (1.0 if args.r is None else args.r,)


def config_from_args(args) -> RunConfig:
    try:
        return RunConfig(
            command=args.command,
            seq=args.seq,
            ideal=Ideal.parse(args.ideal),
            r_values=_r_values(args),
            fmt=args.format,
            oracle=args.oracle,
            exhaustion=O.Exhaustion.parse(args.grid) if args.grid else O.DEFAULT_EXHAUSTION,
            lattice=args.lattice,
            norm=NormSpec.parse(args.norm),
            theorem=getattr(args, "theorem", "all"),
            y1=args.y1,
            y2=args.y2,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def run(cfg: RunConfig) -> tuple:
    """Execute a config; returns ``(document, exit code)``."""
    doc = COMMANDS[cfg.command](cfg)
    return doc, exit_code(cfg, doc)


def render(cfg: RunConfig, doc: dict) -> str:
    return to_csv(doc) if cfg.fmt == "csv" else to_json(doc)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        doc, code = run(cfg)
    except UndecidableRegion as exc:
        print(f"roughlim: undecidable region: {exc}", file=sys.stderr)
        return EXIT_UNDECIDABLE
    except (InputError, ParseError, InvalidSequence, A.NotIBounded, OSError, ValueError) as exc:
        print(f"roughlim: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render(cfg, doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
