"""Symbolic regions of N x N, their natural densities, and decidable ideals.

A :class:`Region` is an expression tree over residue cells, products of
sparse sets, single rows/columns, explicit finite sets and the Boolean
operations. Every region supports two independent kinds of query:

* pointwise membership (:meth:`Region.contains`), evaluated directly from
  the definition and vectorised over numpy index arrays;
* "asymptotic" queries (density, membership in an ideal, finiteness),
  decided exactly by evaluating the tree on a finite set of index *types*.

An index type on one axis is either an explicit index (one mentioned by the
tree, or a small power of two) or a generic class ``(c mod L, pattern)``:
all unmentioned indices congruent to ``c`` modulo the lcm ``L`` of the
residue moduli, whose membership in squares/cubes/powers-of-2 is exactly
``pattern``. Membership of ``(j, k)`` depends on ``j`` and ``k`` only through
their types, so finitely many evaluations settle each question.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

SQUARES = "squares"
CUBES = "cubes"
POWERS_OF_2 = "powers-of-2"
SPARSE_KINDS = (SQUARES, CUBES, POWERS_OF_2)

# largest number of (x-type, y-type) evaluations attempted for one region
MAX_CELLS = 4_000_000


class UndecidableRegion(Exception):
    """The region is outside what the exact engine can certify."""


# -- sparse sets --------------------------------------------------------------


def _icbrt(n: int) -> int:
    r = round(n ** (1.0 / 3.0))
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def in_sparse(kind: str, n):
    """Membership of ``n >= 1`` (int or integer array) in a sparse set."""
    if np.ndim(n) == 0:
        n = int(n)
        if kind == SQUARES:
            return math.isqrt(n) ** 2 == n
        if kind == CUBES:
            return _icbrt(n) ** 3 == n
        if kind == POWERS_OF_2:
            return n > 0 and n & (n - 1) == 0
        raise ValueError(f"unknown sparse kind {kind!r}")
    n = np.asarray(n, dtype=np.int64)
    if kind == SQUARES:
        r = np.floor(np.sqrt(n)).astype(np.int64)
        r = np.where((r + 1) * (r + 1) <= n, r + 1, r)
        r = np.where(r * r > n, r - 1, r)
        return r * r == n
    if kind == CUBES:
        r = np.rint(np.cbrt(n)).astype(np.int64)
        r = np.where((r + 1) ** 3 <= n, r + 1, r)
        r = np.where(r**3 > n, r - 1, r)
        return r**3 == n
    if kind == POWERS_OF_2:
        return (n > 0) & ((n & (n - 1)) == 0)
    raise ValueError(f"unknown sparse kind {kind!r}")


def sparse_count(kind: str, n: int) -> int:
    """Number of members of the sparse set in ``[1, n]``."""
    if n < 1:
        return 0
    if kind == SQUARES:
        return math.isqrt(n)
    if kind == CUBES:
        return _icbrt(n)
    if kind == POWERS_OF_2:
        return n.bit_length()
    raise ValueError(f"unknown sparse kind {kind!r}")


# -- index types --------------------------------------------------------------

_PATTERNS = tuple(
    frozenset(c) for r in range(4) for c in itertools.combinations(SPARSE_KINDS, r)
)


@lru_cache(maxsize=256)
def _infinite_atoms(L: int) -> Tuple[Tuple[int, frozenset], ...]:
    """Pairs (c, pattern) such that infinitely many n have ``n % L == c`` and
    belong to exactly the sparse kinds in ``pattern``."""
    found = {(c, frozenset()) for c in range(L)}
    # n = t**e; excluded t (cubes/squares/powers of 2) are sparse in every
    # progression, so one admissible residue of t suffices
    for e, pattern in ((2, {SQUARES}), (3, {CUBES}), (6, {SQUARES, CUBES})):
        found.update((pow(t, e, L), frozenset(pattern)) for t in range(L))
    # n = 2**m; residue, parity and m mod 3 are periodic once m >= v2(L)
    start = L.bit_length()
    for m in range(start, start + 6 * L):
        pattern = {POWERS_OF_2}
        if m % 2 == 0:
            pattern.add(SQUARES)
        if m % 3 == 0:
            pattern.add(CUBES)
        found.add((pow(2, m, L), frozenset(pattern)))
    order = {p: i for i, p in enumerate(_PATTERNS)}
    return tuple(sorted(found, key=lambda a: (a[0], order[a[1]])))


@dataclass(frozen=True)
class _Axis:
    index: np.ndarray
    residue: np.ndarray
    flags: dict

    def __len__(self):
        return len(self.index)

    def flag(self, kind):
        return self.flags[kind]


def _explicit_axis(indices: Sequence[int]) -> _Axis:
    idx = np.asarray(indices, dtype=np.int64)
    return _Axis(idx, idx, {k: np.asarray(in_sparse(k, idx), dtype=bool) for k in SPARSE_KINDS})


def _generic_axis(L: int, atoms: Sequence[Tuple[int, frozenset]]) -> _Axis:
    res = np.asarray([c for c, _ in atoms], dtype=np.int64)
    flags = {k: np.asarray([k in pat for _, pat in atoms], dtype=bool) for k in SPARSE_KINDS}
    return _Axis(np.zeros(len(atoms), dtype=np.int64), res, flags)


def _concat(a: _Axis, b: _Axis) -> _Axis:
    return _Axis(
        np.concatenate([a.index, b.index]),
        np.concatenate([a.residue, b.residue]),
        {k: np.concatenate([a.flags[k], b.flags[k]]) for k in SPARSE_KINDS},
    )


# -- regions ------------------------------------------------------------------


class Region:
    """Base class of region expressions; instances are immutable and hashable."""

    def contains(self, j, k):
        raise NotImplementedError

    def _mask(self, ax: _Axis, ay: _Axis) -> np.ndarray:
        raise NotImplementedError

    def children(self) -> Tuple["Region", ...]:
        return ()

    def sexpr(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.sexpr()

    def __or__(self, other):
        return Union((self, other))

    def __and__(self, other):
        return Intersection((self, other))

    def __sub__(self, other):
        return Difference(self, other)

    def __invert__(self):
        return Complement(self)

    def walk(self):
        yield self
        for c in self.children():
            yield from c.walk()

    @property
    def size(self) -> int:
        return sum(1 for _ in self.walk())


def _full(shape_x, shape_y, value):
    return np.full((shape_x, shape_y), value, dtype=bool)


def _bshape(j, k):
    return np.broadcast(np.asarray(j), np.asarray(k)).shape


@dataclass(frozen=True)
class ResidueCell(Region):
    """``{(j, k) : j = ra (mod a), k = rb (mod b)}``."""

    a: int
    b: int
    ra: int
    rb: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("moduli must be >= 1")
        if not (0 <= self.ra < self.a and 0 <= self.rb < self.b):
            raise ValueError(f"residues out of range in {self}")

    def contains(self, j, k):
        return (np.asarray(j) % self.a == self.ra) & (np.asarray(k) % self.b == self.rb)

    def _mask(self, ax, ay):
        return ((ax.residue % self.a) == self.ra)[:, None] & ((ay.residue % self.b) == self.rb)[None, :]

    def sexpr(self):
        return f"(cell {self.a} {self.b} {self.ra} {self.rb})"


@dataclass(frozen=True)
class SparseProduct(Region):
    """``s1 x s2`` for sparse sets s1, s2."""

    s1: str
    s2: str

    def __post_init__(self):
        for s in (self.s1, self.s2):
            if s not in SPARSE_KINDS:
                raise ValueError(f"unknown sparse kind {s!r}")

    def contains(self, j, k):
        return np.logical_and(in_sparse(self.s1, j), in_sparse(self.s2, k))

    def _mask(self, ax, ay):
        return ax.flag(self.s1)[:, None] & ay.flag(self.s2)[None, :]

    def sexpr(self):
        return f"(sparse {self.s1} {self.s2})"


@dataclass(frozen=True)
class RowBand(Region):
    """The row ``{i} x N``."""

    i: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("row index must be >= 1")

    def contains(self, j, k):
        return np.broadcast_to(np.asarray(j) == self.i, _bshape(j, k))

    def _mask(self, ax, ay):
        return np.broadcast_to((ax.index == self.i)[:, None], (len(ax), len(ay)))

    def sexpr(self):
        return f"(row {self.i})"


@dataclass(frozen=True)
class ColBand(Region):
    """The column ``N x {i}``."""

    i: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError("column index must be >= 1")

    def contains(self, j, k):
        return np.broadcast_to(np.asarray(k) == self.i, _bshape(j, k))

    def _mask(self, ax, ay):
        return np.broadcast_to((ay.index == self.i)[None, :], (len(ax), len(ay)))

    def sexpr(self):
        return f"(col {self.i})"


@dataclass(frozen=True)
class FiniteSet(Region):
    points: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        pts = tuple(sorted({(int(j), int(k)) for j, k in self.points}))
        if any(j < 1 or k < 1 for j, k in pts):
            raise ValueError("indices must be >= 1")
        object.__setattr__(self, "points", pts)

    def contains(self, j, k):
        j, k = np.asarray(j), np.asarray(k)
        out = np.zeros(_bshape(j, k), dtype=bool)
        for pj, pk in self.points:
            out |= (j == pj) & (k == pk)
        return out

    def _mask(self, ax, ay):
        out = _full(len(ax), len(ay), False)
        for pj, pk in self.points:
            out |= (ax.index == pj)[:, None] & (ay.index == pk)[None, :]
        return out

    def sexpr(self):
        return "(finite" + "".join(f" ({j} {k})" for j, k in self.points) + ")"


def _as_regions(items) -> tuple:
    items = tuple(items)
    if not items:
        raise ValueError("need at least one operand")
    for r in items:
        if not isinstance(r, Region):
            raise TypeError(f"not a Region: {r!r}")
    return items


@dataclass(frozen=True)
class Union(Region):
    parts: Tuple[Region, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", _as_regions(self.parts))

    def contains(self, j, k):
        return reduce(np.logical_or, (p.contains(j, k) for p in self.parts))

    def _mask(self, ax, ay):
        return reduce(np.logical_or, (p._mask(ax, ay) for p in self.parts))

    def children(self):
        return self.parts

    def sexpr(self):
        return "(union " + " ".join(p.sexpr() for p in self.parts) + ")"


@dataclass(frozen=True)
class Intersection(Region):
    parts: Tuple[Region, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", _as_regions(self.parts))

    def contains(self, j, k):
        return reduce(np.logical_and, (p.contains(j, k) for p in self.parts))

    def _mask(self, ax, ay):
        return reduce(np.logical_and, (p._mask(ax, ay) for p in self.parts))

    def children(self):
        return self.parts

    def sexpr(self):
        return "(inter " + " ".join(p.sexpr() for p in self.parts) + ")"


@dataclass(frozen=True)
class Difference(Region):
    left: Region
    right: Region

    def contains(self, j, k):
        return np.logical_and(self.left.contains(j, k), np.logical_not(self.right.contains(j, k)))

    def _mask(self, ax, ay):
        return self.left._mask(ax, ay) & ~self.right._mask(ax, ay)

    def children(self):
        return (self.left, self.right)

    def sexpr(self):
        return f"(diff {self.left.sexpr()} {self.right.sexpr()})"


@dataclass(frozen=True)
class Complement(Region):
    inner: Region

    def contains(self, j, k):
        return np.logical_not(self.inner.contains(j, k))

    def _mask(self, ax, ay):
        return ~self.inner._mask(ax, ay)

    def children(self):
        return (self.inner,)

    def sexpr(self):
        return f"(compl {self.inner.sexpr()})"


@dataclass(frozen=True)
class Full(Region):
    def contains(self, j, k):
        return np.ones(_bshape(j, k), dtype=bool)

    def _mask(self, ax, ay):
        return _full(len(ax), len(ay), True)

    def sexpr(self):
        return "full"


@dataclass(frozen=True)
class EmptyRegion(Region):
    def contains(self, j, k):
        return np.zeros(_bshape(j, k), dtype=bool)

    def _mask(self, ax, ay):
        return _full(len(ax), len(ay), False)

    def sexpr(self):
        return "empty"


FULL = Full()
EMPTY = EmptyRegion()


def region_contains(region: Region, j: int, k: int) -> bool:
    if j < 1 or k < 1:
        raise ValueError("indices start at 1")
    return bool(region.contains(j, k))


# -- asymptotic structure -----------------------------------------------------


def _moduli(region: Region) -> Tuple[int, int]:
    Lx = Ly = 1
    for node in region.walk():
        if isinstance(node, ResidueCell):
            Lx = math.lcm(Lx, node.a)
            Ly = math.lcm(Ly, node.b)
    return Lx, Ly


def _explicit_indices(region: Region, L: int, axis: int) -> List[int]:
    out = set()
    for node in region.walk():
        if isinstance(node, RowBand) and axis == 0:
            out.add(node.i)
        elif isinstance(node, ColBand) and axis == 1:
            out.add(node.i)
        elif isinstance(node, FiniteSet):
            out.update(p[axis] for p in node.points)
    # members of finite (c, pattern) classes are small powers of two
    out.update(2**m for m in range(L.bit_length() + 1))
    return sorted(out)


@dataclass(frozen=True)
class _Structure:
    tail_empty: bool  # no points in {j, k >= N} for some N
    finite_points: Optional[Tuple[Tuple[int, int], ...]]  # None when infinite


@lru_cache(maxsize=4096)
def _structure(region: Region) -> _Structure:
    Lx, Ly = _moduli(region)
    if Lx * Ly > MAX_CELLS:
        raise UndecidableRegion(f"region too large to analyse (moduli {Lx}, {Ly}): {region}")
    ex, ey = _explicit_indices(region, Lx, 0), _explicit_indices(region, Ly, 1)
    gx, gy = _infinite_atoms(Lx), _infinite_atoms(Ly)
    if (len(ex) + len(gx)) * (len(ey) + len(gy)) > MAX_CELLS:
        raise UndecidableRegion(f"region too large to analyse (moduli {Lx}, {Ly}): {region}")
    ax = _concat(_explicit_axis(ex), _generic_axis(Lx, gx))
    ay = _concat(_explicit_axis(ey), _generic_axis(Ly, gy))
    m = np.asarray(region._mask(ax, ay), dtype=bool)
    nx, ny = len(ex), len(ey)
    tail_empty = not m[nx:, ny:].any()
    if m[nx:, :].any() or m[:, ny:].any():
        pts = None
    else:
        ii, kk = np.nonzero(m[:nx, :ny])
        pts = tuple((ex[a], ey[b]) for a, b in zip(ii, kk))
    return _Structure(tail_empty, pts)


@dataclass(frozen=True)
class DensityValue:
    """Exact natural density, or undefined when it cannot be certified."""

    exact: Optional[Fraction]

    @property
    def defined(self) -> bool:
        return self.exact is not None

    @property
    def is_zero(self) -> bool:
        return self.exact == 0

    def __float__(self):
        if self.exact is None:
            raise ValueError("density is undefined")
        return float(self.exact)

    def __str__(self):
        return "undefined" if self.exact is None else str(self.exact)


@lru_cache(maxsize=4096)
def region_density(region: Region) -> DensityValue:
    """Exact natural density of ``region``.

    Sparse products, bands and finite sets are null, so only residue cells
    matter: the density is the fraction of cells of the common
    ``lcm x lcm`` lattice whose generic (non-sparse, unmentioned) points lie
    in the region.
    """
    Lx, Ly = _moduli(region)
    if Lx * Ly > MAX_CELLS:
        return DensityValue(None)
    none = frozenset()
    ax = _generic_axis(Lx, [(c, none) for c in range(Lx)])
    ay = _generic_axis(Ly, [(c, none) for c in range(Ly)])
    count = int(np.count_nonzero(region._mask(ax, ay)))
    return DensityValue(Fraction(count, Lx * Ly))


def is_finite_region(region: Region) -> bool:
    return _structure(region).finite_points is not None


def finite_points(region: Region) -> Optional[List[Tuple[int, int]]]:
    """All points of a finite region (sorted), or None if it is infinite."""
    pts = _structure(region).finite_points
    return None if pts is None else list(pts)


def is_empty_region(region: Region) -> bool:
    return finite_points(region) == []


def tail_empty(region: Region) -> bool:
    """Whether the region misses every far enough Pringsheim tail."""
    return _structure(region).tail_empty


# -- ideals -------------------------------------------------------------------


class Ideal(enum.Enum):
    DENSITY_ZERO = "density-zero"
    MINIMAL_STRONGLY_ADMISSIBLE = "minimal-strongly-admissible"
    FINITE_SETS = "finite-sets"

    @classmethod
    def parse(cls, name: str) -> "Ideal":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "density-zero": cls.DENSITY_ZERO,
            "dz": cls.DENSITY_ZERO,
            "id": cls.DENSITY_ZERO,
            "statistical": cls.DENSITY_ZERO,
            "minimal-strongly-admissible": cls.MINIMAL_STRONGLY_ADMISSIBLE,
            "msa": cls.MINIMAL_STRONGLY_ADMISSIBLE,
            "minimal-sa": cls.MINIMAL_STRONGLY_ADMISSIBLE,
            "pringsheim": cls.MINIMAL_STRONGLY_ADMISSIBLE,
            "finite-sets": cls.FINITE_SETS,
            "finite": cls.FINITE_SETS,
            "fin": cls.FINITE_SETS,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown ideal {name!r}") from None

    def __str__(self):
        return self.value


DENSITY_ZERO = Ideal.DENSITY_ZERO
MINIMAL_SA = Ideal.MINIMAL_STRONGLY_ADMISSIBLE
FINITE_SETS = Ideal.FINITE_SETS


def ideal_contains(ideal: Ideal, region: Region) -> bool:
    if ideal is Ideal.DENSITY_ZERO:
        d = region_density(region)
        if not d.defined:
            raise UndecidableRegion(f"density of {region} cannot be certified")
        return d.is_zero
    if ideal is Ideal.MINIMAL_STRONGLY_ADMISSIBLE:
        return tail_empty(region)
    if ideal is Ideal.FINITE_SETS:
        return is_finite_region(region)
    raise ValueError(f"unknown ideal {ideal!r}")


def filter_member(ideal: Ideal, region: Region) -> bool:
    return ideal_contains(ideal, Complement(region))


def is_admissible(ideal: Ideal) -> bool:
    return True


def is_strongly_admissible(ideal: Ideal) -> bool:
    return ideal is not Ideal.FINITE_SETS


@dataclass
class IdealAxiomReport:
    ideal: Ideal
    checks: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_ideal_axioms(ideal: Ideal, samples: Iterable[Region]) -> IdealAxiomReport:
    """Check the ideal axioms on a sample family of regions.

    Verifies that the empty set is a member, that members are closed under
    pairwise union, that ``A & B`` is a member whenever ``A`` is, and that
    the whole space is not a member.
    """
    samples = list(samples)
    rep = IdealAxiomReport(ideal)

    def check(cond, msg):
        rep.checks += 1
        if not cond:
            rep.violations.append(msg)

    check(ideal_contains(ideal, EMPTY), "empty set is not a member")
    check(not ideal_contains(ideal, FULL), "ideal is trivial (contains N x N)")
    members = [a for a in samples if ideal_contains(ideal, a)]
    for a, b in itertools.combinations_with_replacement(members, 2):
        check(ideal_contains(ideal, Union((a, b))), f"union not a member: {a} | {b}")
    for a in members:
        for b in samples:
            check(ideal_contains(ideal, Intersection((a, b))), f"subset not a member: {a} & {b}")
    return rep
