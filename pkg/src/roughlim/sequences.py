"""Structured double sequences ``x_jk`` defined piecewise over regions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .geometry import EUCLIDEAN, NormSpec, Point, norm_eval
from .ideals import (
    FULL,
    Complement,
    Difference,
    Ideal,
    Region,
    Union,
    finite_points,
    ideal_contains,
    is_empty_region,
    region_density,
)

LIMIT_TOL = 1e-6
TAIL_SCALES = (10, 100, 1000)
FAR_SCALE = 10**8

CONVERGENT = "convergent"
ESCAPING = "escaping"
OSCILLATING = "oscillating"


def fmt_number(x: float) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


# -- scalar terms of the formula catalog --------------------------------------


class Term:
    """One coordinate of a formula, as a function of the indices j, k."""

    limit: Optional[float] = None
    escaping = False

    def __call__(self, j, k):
        raise NotImplementedError

    @property
    def sup(self) -> float:
        raise NotImplementedError

    def sexpr(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstTerm(Term):
    c: float

    def __call__(self, j, k):
        return np.full(np.broadcast(np.asarray(j), np.asarray(k)).shape, float(self.c))

    @property
    def limit(self):
        return float(self.c)

    @property
    def sup(self):
        return abs(self.c)

    def sexpr(self):
        return fmt_number(self.c)


@dataclass(frozen=True)
class ProductTerm(Term):
    """``c * j * k``"""

    c: float

    def __call__(self, j, k):
        return self.c * np.asarray(j, dtype=float) * np.asarray(k, dtype=float)

    @property
    def limit(self):
        return 0.0 if self.c == 0 else None

    @property
    def escaping(self):
        return self.c != 0

    @property
    def sup(self):
        return 0.0 if self.c == 0 else math.inf

    def sexpr(self):
        return f"(jk {fmt_number(self.c)})"


@dataclass(frozen=True)
class AltTerm(Term):
    """``(-1)^j``, ``(-1)^k`` or ``(-1)^(j+k)``."""

    on: str  # "j", "k" or "jk"

    def __post_init__(self):
        if self.on not in ("j", "k", "jk"):
            raise ValueError(f"bad alternation {self.on!r}")

    def __call__(self, j, k):
        j, k = np.asarray(j), np.asarray(k)
        e = {"j": j, "k": k, "jk": j + k}[self.on]
        e = np.broadcast_to(e, np.broadcast(j, k).shape)
        return np.where(e % 2 == 0, 1.0, -1.0)

    @property
    def sup(self):
        return 1.0

    def sexpr(self):
        return f"(alt-{self.on})"


@dataclass(frozen=True)
class OverSumTerm(Term):
    """``c / (j + k)``"""

    c: float

    def __call__(self, j, k):
        return self.c / (np.asarray(j, dtype=float) + np.asarray(k, dtype=float))

    limit = 0.0

    @property
    def sup(self):
        return abs(self.c) / 2

    def sexpr(self):
        return f"(over-sum {fmt_number(self.c)})"


@dataclass(frozen=True)
class RatioTerm(Term):
    """``j / (j + 1)``"""

    def __call__(self, j, k):
        j = np.asarray(j, dtype=float)
        out = j / (j + 1.0)
        return np.broadcast_to(out, np.broadcast(j, np.asarray(k)).shape).copy()

    limit = 1.0
    sup = 1.0

    def sexpr(self):
        return "(ratio-j)"


@dataclass(frozen=True)
class ShiftTerm(Term):
    """``c + c2 / (j * k)``"""

    c: float
    c2: float

    def __call__(self, j, k):
        return self.c + self.c2 / (np.asarray(j, dtype=float) * np.asarray(k, dtype=float))

    @property
    def limit(self):
        return float(self.c)

    @property
    def sup(self):
        return max(abs(self.c + self.c2), abs(self.c))

    def sexpr(self):
        return f"(shift {fmt_number(self.c)} {fmt_number(self.c2)})"


# -- value rules --------------------------------------------------------------


class Rule:
    dim: int

    def evaluate(self, j, k) -> np.ndarray:
        """Values at broadcast index arrays; trailing axis holds coordinates."""
        raise NotImplementedError

    @property
    def tail_kind(self) -> str:
        raise NotImplementedError

    @property
    def limit(self) -> Optional[Point]:
        """The limit used by exact analysis (None when there is none)."""
        raise NotImplementedError

    @property
    def bounded(self) -> bool:
        return self.tail_kind != ESCAPING

    def sup_norm(self, norm: NormSpec = EUCLIDEAN) -> float:
        raise NotImplementedError

    def sexpr(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Rule):
    value: Point

    def __post_init__(self):
        object.__setattr__(self, "value", Point.of(self.value))

    @property
    def dim(self):
        return self.value.dim

    def evaluate(self, j, k):
        shape = np.broadcast(np.asarray(j), np.asarray(k)).shape
        return np.broadcast_to(self.value.as_array(), shape + (self.dim,)).copy()

    tail_kind = CONVERGENT

    @property
    def limit(self):
        return self.value

    def sup_norm(self, norm=EUCLIDEAN):
        return norm_eval(norm, self.value)

    def sexpr(self):
        return "(const " + " ".join(fmt_number(c) for c in self.value) + ")"


@dataclass(frozen=True)
class Formula(Rule):
    """Coordinate-wise catalog terms with a declared limit (None = divergent)."""

    terms: Tuple[Term, ...]
    declared_limit: Optional[Point] = None

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("formula needs at least one term")
        object.__setattr__(self, "terms", terms)
        if self.declared_limit is not None:
            object.__setattr__(self, "declared_limit", Point.of(self.declared_limit))

    @property
    def dim(self):
        return len(self.terms)

    def evaluate(self, j, k):
        return np.stack([np.asarray(t(j, k), dtype=float) for t in self.terms], axis=-1)

    @property
    def tail_kind(self):
        if any(t.escaping for t in self.terms):
            return ESCAPING
        if all(t.limit is not None for t in self.terms):
            return CONVERGENT
        return OSCILLATING

    @property
    def symbolic_limit(self) -> Optional[Point]:
        if self.tail_kind != CONVERGENT:
            return None
        return Point(tuple(t.limit for t in self.terms))

    @property
    def limit(self):
        return self.declared_limit

    def sup_norm(self, norm=EUCLIDEAN):
        sups = [t.sup for t in self.terms]
        if any(math.isinf(s) for s in sups):
            return math.inf
        return norm_eval(norm, sups)

    def sexpr(self):
        if self.declared_limit is None:
            lim = "divergent"
        else:
            lim = "(limit " + " ".join(fmt_number(c) for c in self.declared_limit) + ")"
        return f"(formula {lim} " + " ".join(t.sexpr() for t in self.terms) + ")"


# -- sequences ----------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    region: Region
    rule: Rule


@dataclass(frozen=True)
class Part:
    """A piece restricted to the indices where it actually supplies the value."""

    region: Region
    rule: Rule
    index: int  # position in the piece list, -1 for the default


@dataclass(frozen=True)
class StructuredSequence:
    """``x_jk`` given by the first piece whose region contains ``(j, k)``."""

    pieces: Tuple[Piece, ...]
    default: Rule
    dim: int = 1
    name: str = "x"

    def __post_init__(self):
        pieces = tuple(p if isinstance(p, Piece) else Piece(*p) for p in self.pieces)
        object.__setattr__(self, "pieces", pieces)

    def __call__(self, j: int, k: int) -> Point:
        return eval_point(self, j, k)

    def parts(self) -> List[Part]:
        return list(_parts(self))


@lru_cache(maxsize=1024)
def _parts(x: StructuredSequence) -> Tuple[Part, ...]:
    out = []
    seen: List[Region] = []
    for i, p in enumerate(x.pieces):
        region = p.region if not seen else Difference(p.region, _union(seen))
        out.append(Part(region, p.rule, i))
        seen.append(p.region)
    out.append(Part(Complement(_union(seen)) if seen else FULL, x.default, -1))
    return tuple(out)


def _union(regions):
    return regions[0] if len(regions) == 1 else Union(tuple(regions))


def eval_point(x: StructuredSequence, j: int, k: int) -> Point:
    if j < 1 or k < 1:
        raise ValueError("indices start at 1")
    for p in x.pieces:
        if p.region.contains(j, k):
            return Point(tuple(p.rule.evaluate(j, k)))
    return Point(tuple(x.default.evaluate(j, k)))


def eval_grid(x: StructuredSequence, n: int, m: int, j0: int = 1, k0: int = 1) -> np.ndarray:
    """Values on ``[j0..j0+n-1] x [k0..k0+m-1]`` as an array of shape ``(n, m, dim)``."""
    if j0 < 1 or k0 < 1:
        raise ValueError("indices start at 1")
    J = np.arange(j0, j0 + n, dtype=np.int64)[:, None]
    K = np.arange(k0, k0 + m, dtype=np.int64)[None, :]
    out = x.default.evaluate(J, K)
    taken = np.zeros((n, m), dtype=bool)
    for p in x.pieces:
        hit = np.asarray(p.region.contains(J, K), dtype=bool) & ~taken
        if hit.any():
            out[hit] = p.rule.evaluate(J, K)[hit]
        taken |= hit
    return out


# -- validation ---------------------------------------------------------------


@dataclass
class Diagnostics:
    errors: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors


class InvalidSequence(ValueError):
    pass


def _tail_samples(N: int):
    return [(N, N), (N + 1, N), (N, N + 1), (N + 1, N + 1), (N, 2 * N), (2 * N + 1, N),
            (N, 10 * N + 1), (10 * N, N), (3 * N, 7 * N), (5 * N + 1, 5 * N + 1)]


def _check_formula(f: Formula, where: str, diag: Diagnostics):
    sym = f.symbolic_limit
    if f.declared_limit is None:
        if sym is not None:
            diag.errors.append(f"{where}: declared divergent but the formula converges to {sym}")
            return
        pts = np.asarray(_tail_samples(TAIL_SCALES[-1]))
        vals = f.evaluate(pts[:, 0], pts[:, 1])
        if np.ptp(vals, axis=0).max() <= LIMIT_TOL:
            diag.errors.append(f"{where}: declared divergent but sampled tail values agree")
        return
    if f.declared_limit.dim != f.dim:
        diag.errors.append(f"{where}: declared limit has dimension {f.declared_limit.dim}, formula {f.dim}")
        return
    if sym is None:
        diag.errors.append(f"{where}: declared limit {f.declared_limit} but the formula has no limit")
        return
    lim = f.declared_limit.as_array()
    if np.abs(sym.as_array() - lim).max() > LIMIT_TOL:
        diag.errors.append(f"{where}: declared limit {f.declared_limit} differs from {sym}")
        return
    errs = []
    for N in TAIL_SCALES + (FAR_SCALE,):
        pts = np.asarray(_tail_samples(N))
        errs.append(np.abs(f.evaluate(pts[:, 0], pts[:, 1]) - lim).max())
    if any(b > a + 1e-15 for a, b in zip(errs, errs[1:])) or errs[-1] > LIMIT_TOL:
        diag.errors.append(f"{where}: sampled tail errors {errs} do not confirm limit {f.declared_limit}")


def validate(x: StructuredSequence) -> Diagnostics:
    """Check dimensions, declared limits and exact-analysis requirements.

    Every piece of positive density must carry a constant or a formula with a
    finite declared limit. Declared limits are checked against the catalog
    and by sampling far Pringsheim tails.
    """
    diag = Diagnostics()
    if not 1 <= x.dim <= 8:
        diag.errors.append(f"dimension {x.dim} outside [1, 8]")
    for part in _parts(x):
        where = "default" if part.index < 0 else f"piece {part.index}"
        if part.rule.dim != x.dim:
            diag.errors.append(f"{where}: rule dimension {part.rule.dim} != {x.dim}")
            continue
        if isinstance(part.rule, Formula):
            _check_formula(part.rule, where, diag)
        d = region_density(part.region)
        if not d.defined:
            diag.errors.append(f"{where}: density cannot be certified")
        elif d.exact > 0 and part.rule.limit is None:
            diag.errors.append(f"{where}: divergent rule on a region of density {d}")
    return diag


def require_valid(x: StructuredSequence):
    diag = validate(x)
    if not diag.valid:
        raise InvalidSequence(f"sequence {x.name!r} is invalid: " + "; ".join(diag.errors))


# -- boundedness --------------------------------------------------------------


@dataclass(frozen=True)
class BoundednessCertificate:
    """``holds`` with bound M, or a witness region that breaks the bound."""

    holds: bool
    bound: Optional[float] = None
    witness: Optional[Region] = None
    ideal: Optional[Ideal] = None


def _part_sup(part: Part, norm: NormSpec) -> float:
    if part.rule.bounded:
        return part.rule.sup_norm(norm)
    pts = finite_points(part.region)
    if pts is None:
        return math.inf
    if not pts:
        return 0.0
    arr = np.asarray(pts)
    return float(norm_eval(norm, part.rule.evaluate(arr[:, 0], arr[:, 1])).max())


def _live_parts(x: StructuredSequence):
    return [p for p in _parts(x) if not is_empty_region(p.region)]


def is_bounded(x: StructuredSequence, norm: NormSpec = EUCLIDEAN) -> BoundednessCertificate:
    sup = 0.0
    for part in _live_parts(x):
        s = _part_sup(part, norm)
        if math.isinf(s):
            return BoundednessCertificate(False, witness=part.region)
        sup = max(sup, s)
    return BoundednessCertificate(True, bound=sup + 1.0)


def is_I_bounded(x: StructuredSequence, ideal: Ideal, norm: NormSpec = EUCLIDEAN) -> BoundednessCertificate:
    """Exceedance region is the union of unbounded parts; it must be ideal-small."""
    sup = 0.0
    wild = []
    for part in _live_parts(x):
        s = _part_sup(part, norm)
        if math.isinf(s):
            wild.append(part.region)
        else:
            sup = max(sup, s)
    if wild:
        exceed = _union(wild)
        if not ideal_contains(ideal, exceed):
            return BoundednessCertificate(False, witness=exceed, ideal=ideal)
    return BoundednessCertificate(True, bound=sup + 1.0, ideal=ideal)
