"""Norms, closed balls and intervals on R^d (1 <= d <= 8)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

MAX_DIM = 8
TOL = 1e-9

Number = Union[int, float]


@dataclass(frozen=True)
class Point:
    """An immutable point of R^d with finite coordinates."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not 1 <= len(coords) <= MAX_DIM:
            raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {len(coords)}")
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"non-finite coordinate in {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, value: Union["Point", Number, Iterable[Number]]) -> "Point":
        if isinstance(value, Point):
            return value
        if isinstance(value, (int, float, np.integer, np.floating)):
            return cls((value,))
        return cls(tuple(value))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: "Point"):
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Point") -> "Point":
        other = Point.of(other)
        self._check(other)
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        other = Point.of(other)
        self._check(other)
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, scalar: Number) -> "Point":
        return Point(tuple(scalar * a for a in self.coords))

    __rmul__ = __mul__

    def __neg__(self) -> "Point":
        return self * -1.0

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def __repr__(self):
        if self.dim == 1:
            return f"Point({self.coords[0]!r})"
        return f"Point{self.coords!r}"


def zero(dim: int) -> Point:
    return Point((0.0,) * dim)


@dataclass(frozen=True)
class NormSpec:
    """A p-norm on R^d; ``p = inf`` is the max-norm."""

    p: float = 2.0

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise ValueError(f"p-norm needs p >= 1, got {self.p}")
        object.__setattr__(self, "p", p)

    @classmethod
    def euclidean(cls) -> "NormSpec":
        return cls(2.0)

    @classmethod
    def max_norm(cls) -> "NormSpec":
        return cls(math.inf)

    @classmethod
    def parse(cls, text: str) -> "NormSpec":
        text = text.strip().lower()
        if text in ("max", "inf", "sup"):
            return cls.max_norm()
        return cls(float(text))

    @property
    def is_max(self) -> bool:
        return math.isinf(self.p)

    def __str__(self):
        if self.is_max:
            return "max"
        return f"{self.p:g}"

    def __call__(self, v) -> float:
        return norm_eval(self, v)


EUCLIDEAN = NormSpec.euclidean()
MAX_NORM = NormSpec.max_norm()


def norm_eval(norm: NormSpec, p) -> float:
    """Evaluate ``norm`` at a point.

    Also accepts an array whose last axis holds coordinates, in which case an
    array of norms is returned.
    """
    if isinstance(p, Point):
        arr = p.as_array()
    else:
        arr = np.asarray(p, dtype=float)
    a = np.abs(arr)
    if a.shape[-1] == 1:
        out = a[..., 0]
    elif norm.is_max:
        out = a.max(axis=-1)
    elif norm.p == 1.0:
        out = a.sum(axis=-1)
    else:
        # scale by the max coordinate to avoid under/overflow in a**p
        scale = a.max(axis=-1, keepdims=True)
        safe = np.where(scale > 0, scale, 1.0)
        u = a / safe
        if norm.p == 2.0:
            out = safe[..., 0] * np.sqrt((u * u).sum(axis=-1))
        else:
            out = safe[..., 0] * (u**norm.p).sum(axis=-1) ** (1.0 / norm.p)
        out = np.where(scale[..., 0] > 0, out, 0.0)
    if np.ndim(out) == 0:
        return float(out)
    return out


def is_strictly_convex(norm: NormSpec) -> bool:
    return 1.0 < norm.p < math.inf


def distance(norm: NormSpec, a: Point, b: Point) -> float:
    return norm_eval(norm, Point.of(a) - Point.of(b))


@dataclass(frozen=True)
class ClosedBall:
    center: Point
    radius: float
    norm: NormSpec = EUCLIDEAN

    def __post_init__(self):
        object.__setattr__(self, "center", Point.of(self.center))
        if not self.radius >= 0:
            raise ValueError(f"radius must be >= 0, got {self.radius}")

    def contains(self, p, tol: float = 0.0) -> bool:
        return ball_contains(self, p, tol)


def ball_contains(ball: ClosedBall, p, tol: float = 0.0) -> bool:
    p = Point.of(p)
    if p.dim != ball.center.dim:
        raise ValueError(f"dimension mismatch: point {p.dim}, ball {ball.center.dim}")
    return norm_eval(ball.norm, p - ball.center) <= ball.radius + tol


@dataclass(frozen=True)
class Interval:
    """A closed interval ``[lo, hi]`` of the real line, or the empty set."""

    lo: Optional[float] = None
    hi: Optional[float] = None

    def __post_init__(self):
        if (self.lo is None) != (self.hi is None):
            raise ValueError("give both endpoints or neither")
        if self.lo is not None:
            lo, hi = float(self.lo), float(self.hi)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("interval endpoints must be finite")
            if lo > hi:
                raise ValueError(f"lo > hi: [{lo}, {hi}]")
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)

    @classmethod
    def empty(cls) -> "Interval":
        return cls()

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    @property
    def diameter(self) -> float:
        return interval_diameter(self)

    def contains(self, t: float, tol: float = 0.0) -> bool:
        if self.is_empty:
            return False
        return self.lo - tol <= t <= self.hi + tol

    def issubset(self, other: "Interval", tol: float = TOL) -> bool:
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return other.lo - tol <= self.lo and self.hi <= other.hi + tol

    def shift(self, t: float) -> "Interval":
        if self.is_empty:
            return self
        return Interval(self.lo + t, self.hi + t)

    def __str__(self):
        if self.is_empty:
            return "Empty"
        return f"[{self.lo:.12g}, {self.hi:.12g}]"


def interval_diameter(interval: Interval) -> float:
    if interval.is_empty:
        return 0.0
    return interval.hi - interval.lo
