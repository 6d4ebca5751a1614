"""Canonical s-expression text format for regions, ideals and sequences.

Regions::

    (cell a b ra rb)  (sparse squares cubes)  (row i)  (col i)
    (finite (j k) ...)  (union R ...)  (inter R ...)  (diff R S)  (compl R)
    full  empty

Sequences (``;`` starts a comment)::

    (sequence example21
      (dim 1)
      (piece (sparse squares squares) (formula divergent (jk 2)))
      (piece (union (cell 2 2 0 0) (cell 2 2 1 1)) (const 1))
      (default (const -1)))

Formula terms: a number, ``(jk c)`` = c*j*k, ``(alt-j)``, ``(alt-k)``,
``(alt-jk)`` = (-1)^(j+k), ``(over-sum c)`` = c/(j+k), ``(ratio-j)`` = j/(j+1),
``(shift c c2)`` = c + c2/(j*k). The declared limit is ``divergent`` or
``(limit v1 v2 ...)``.
"""

from __future__ import annotations

import re
from typing import List, Union as TUnion

from .geometry import Point
from .ideals import (
    EMPTY,
    FULL,
    ColBand,
    Complement,
    Difference,
    FiniteSet,
    Ideal,
    Intersection,
    Region,
    ResidueCell,
    RowBand,
    SparseProduct,
    Union,
)
from .sequences import (
    AltTerm,
    Constant,
    ConstTerm,
    Formula,
    OverSumTerm,
    Piece,
    ProductTerm,
    RatioTerm,
    Rule,
    ShiftTerm,
    StructuredSequence,
    Term,
)

SExpr = TUnion[str, list]


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s();]+))")


def read_sexpr(text: str) -> SExpr:
    """Parse exactly one s-expression."""
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group(1):
            continue
        tokens.append(m.group(2) or m.group(3) or m.group(4))
    if not tokens:
        raise ParseError("empty input")
    expr, rest = _read(tokens, 0)
    if rest != len(tokens):
        raise ParseError(f"trailing input after expression: {tokens[rest:rest + 3]}")
    return expr


def _read(tokens, i):
    if i >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[i]
    if tok == ")":
        raise ParseError("unexpected ')'")
    if tok != "(":
        return tok, i + 1
    out = []
    i += 1
    while True:
        if i >= len(tokens):
            raise ParseError("missing ')'")
        if tokens[i] == ")":
            return out, i + 1
        item, i = _read(tokens, i)
        out.append(item)


def _int(tok) -> int:
    try:
        return int(tok)
    except (TypeError, ValueError):
        raise ParseError(f"expected an integer, got {tok!r}") from None


def _num(tok) -> float:
    try:
        return float(tok)
    except (TypeError, ValueError):
        raise ParseError(f"expected a number, got {tok!r}") from None


def _head(expr, what):
    if not isinstance(expr, list) or not expr or not isinstance(expr[0], str):
        raise ParseError(f"expected a {what} form, got {expr!r}")
    return expr[0], expr[1:]


def _arity(args, n, name):
    if len(args) != n:
        raise ParseError(f"{name} takes {n} argument(s), got {len(args)}")


# -- regions ------------------------------------------------------------------


def region_from_sexpr(expr: SExpr) -> Region:
    if expr == "full":
        return FULL
    if expr == "empty":
        return EMPTY
    head, args = _head(expr, "region")
    try:
        if head == "cell":
            _arity(args, 4, head)
            return ResidueCell(*(_int(a) for a in args))
        if head == "sparse":
            _arity(args, 2, head)
            return SparseProduct(args[0], args[1])
        if head == "row":
            _arity(args, 1, head)
            return RowBand(_int(args[0]))
        if head == "col":
            _arity(args, 1, head)
            return ColBand(_int(args[0]))
        if head == "finite":
            pts = []
            for a in args:
                if not isinstance(a, list) or len(a) != 2:
                    raise ParseError(f"finite set points are (j k) pairs, got {a!r}")
                pts.append((_int(a[0]), _int(a[1])))
            return FiniteSet(tuple(pts))
        if head in ("union", "inter"):
            parts = tuple(region_from_sexpr(a) for a in args)
            return (Union if head == "union" else Intersection)(parts)
        if head == "diff":
            _arity(args, 2, head)
            return Difference(region_from_sexpr(args[0]), region_from_sexpr(args[1]))
        if head == "compl":
            _arity(args, 1, head)
            return Complement(region_from_sexpr(args[0]))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown region constructor {head!r}")


def parse_region(text: str) -> Region:
    return region_from_sexpr(read_sexpr(text))


def format_region(region: Region) -> str:
    return region.sexpr()


def parse_ideal(text: str) -> Ideal:
    try:
        return Ideal.parse(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_ideal(ideal: Ideal) -> str:
    return ideal.value


# -- rules and sequences ------------------------------------------------------


def _term(expr) -> Term:
    if isinstance(expr, str):
        return ConstTerm(_num(expr))
    head, args = _head(expr, "term")
    if head == "jk":
        _arity(args, 1, head)
        return ProductTerm(_num(args[0]))
    if head in ("alt-j", "alt-k", "alt-jk"):
        _arity(args, 0, head)
        return AltTerm(head[4:])
    if head == "over-sum":
        _arity(args, 1, head)
        return OverSumTerm(_num(args[0]))
    if head == "ratio-j":
        _arity(args, 0, head)
        return RatioTerm()
    if head == "shift":
        _arity(args, 2, head)
        return ShiftTerm(_num(args[0]), _num(args[1]))
    raise ParseError(f"unknown formula term {head!r}")


def rule_from_sexpr(expr: SExpr) -> Rule:
    head, args = _head(expr, "rule")
    if head == "const":
        if not args:
            raise ParseError("const needs at least one coordinate")
        return Constant(Point(tuple(_num(a) for a in args)))
    if head == "formula":
        if len(args) < 2:
            raise ParseError("formula needs a limit and at least one term")
        lim, terms = args[0], args[1:]
        if lim == "divergent":
            declared = None
        else:
            lh, largs = _head(lim, "limit")
            if lh != "limit" or not largs:
                raise ParseError(f"expected (limit ...) or divergent, got {lim!r}")
            declared = Point(tuple(_num(a) for a in largs))
        return Formula(tuple(_term(t) for t in terms), declared)
    raise ParseError(f"unknown rule {head!r}")


def parse_rule(text: str) -> Rule:
    return rule_from_sexpr(read_sexpr(text))


def sequence_from_sexpr(expr: SExpr) -> StructuredSequence:
    head, args = _head(expr, "sequence")
    if head != "sequence" or not args or not isinstance(args[0], str):
        raise ParseError("expected (sequence <name> ...)")
    name = args[0]
    dim = None
    pieces: List[Piece] = []
    default = None
    for item in args[1:]:
        h, a = _head(item, "sequence clause")
        if h == "dim":
            _arity(a, 1, h)
            dim = _int(a[0])
        elif h == "piece":
            _arity(a, 2, h)
            pieces.append(Piece(region_from_sexpr(a[0]), rule_from_sexpr(a[1])))
        elif h == "default":
            _arity(a, 1, h)
            if default is not None:
                raise ParseError("duplicate default")
            default = rule_from_sexpr(a[0])
        else:
            raise ParseError(f"unknown sequence clause {h!r}")
    if default is None:
        raise ParseError("sequence needs a (default ...) rule")
    if dim is None:
        dim = default.dim
    return StructuredSequence(tuple(pieces), default, dim, name)


def parse_sequence(text: str) -> StructuredSequence:
    return sequence_from_sexpr(read_sexpr(text))


def format_sequence(x: StructuredSequence) -> str:
    lines = [f"(sequence {x.name}", f"  (dim {x.dim})"]
    for p in x.pieces:
        lines.append(f"  (piece {p.region.sexpr()} {p.rule.sexpr()})")
    lines.append(f"  (default {x.default.sexpr()}))")
    return "\n".join(lines) + "\n"


def load_sequence(path) -> StructuredSequence:
    with open(path, encoding="utf-8") as fh:
        return parse_sequence(fh.read())


def save_sequence(x: StructuredSequence, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_sequence(x))
