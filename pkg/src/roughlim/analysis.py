"""Rough ideal limits, ideal cluster points and theorem checkers.

The exact engine reduces membership in the rough limit set to finitely many
closed-ball tests. A part of the sequence (piece restricted to where it
applies) either lies in the ideal, and can be ignored, or it does not, and
then its values settle near the constant or declared limit on every
Pringsheim tail ``{j, k >= N}``. The complement of a tail is a finite union of
rows and columns, which a strongly admissible ideal contains, so for every
``eps > 0`` the exceedance set ``{||x_jk - xi|| >= r + eps}`` is ideal-small
exactly when every non-negligible part has its limit within ``r`` of ``xi``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .geometry import (
    EUCLIDEAN,
    TOL,
    ClosedBall,
    Interval,
    NormSpec,
    Point,
    ball_contains,
    distance,
    interval_diameter,
    is_strictly_convex,
)
from .ideals import MINIMAL_SA, Ideal, ideal_contains, is_strongly_admissible, region_density
from .sequences import (
    ESCAPING,
    OSCILLATING,
    Formula,
    InvalidSequence,
    Part,
    StructuredSequence,
    _live_parts,
    is_bounded,
    is_I_bounded,
    require_valid,
)

OUTSIDE_STEP = 1e-6
MAX_LATTICE = 200_000


class NotIBounded(ValueError):
    pass


@dataclass(frozen=True)
class RoughnessQuery:
    """A roughness degree, an optional candidate limit and a tolerance policy."""

    r: float
    candidate: Optional[Point] = None
    eps: Tuple[float, ...] = (0.1, 0.05, 0.01)

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError("r must be >= 0")
        eps = tuple(float(e) for e in self.eps)
        if not eps or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps policy must be positive and strictly decreasing")
        object.__setattr__(self, "eps", eps)
        if self.candidate is not None:
            object.__setattr__(self, "candidate", Point.of(self.candidate))


@dataclass(frozen=True)
class _Classified:
    part: Part
    negligible: bool


@lru_cache(maxsize=2048)
def _classify(x: StructuredSequence, ideal: Ideal) -> Tuple[_Classified, ...]:
    require_valid(x)
    if not is_strongly_admissible(ideal):
        raise ValueError(f"exact analysis needs a strongly admissible ideal, got {ideal}")
    out = []
    for part in _live_parts(x):
        negligible = ideal_contains(ideal, part.region)
        if not negligible and part.rule.tail_kind == OSCILLATING:
            raise InvalidSequence(
                f"oscillating rule on a region outside {ideal}: {part.region}"
            )
        out.append(_Classified(part, negligible))
    return tuple(out)


def _significant(x, ideal):
    return [c.part for c in _classify(x, ideal) if not c.negligible]


# -- cluster points -----------------------------------------------------------


@dataclass(frozen=True)
class ClusterPoint:
    point: Point
    support: Fraction  # density of the supporting parts
    at_least: bool = False  # some support comes from a convergent formula


@dataclass(frozen=True)
class ClusterSet:
    points: Tuple[ClusterPoint, ...]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def values(self) -> List[Point]:
        return [c.point for c in self.points]


def cluster_points(x: StructuredSequence, ideal: Ideal) -> ClusterSet:
    groups: List[list] = []
    for part in _significant(x, ideal):
        if part.rule.tail_kind == ESCAPING:
            continue
        v = part.rule.limit
        d = region_density(part.region).exact
        formula = isinstance(part.rule, Formula)
        for g in groups:
            if max(abs(a - b) for a, b in zip(g[0], v)) <= TOL:
                g[1] += d
                g[2] |= formula
                break
        else:
            groups.append([v, d, formula])
    groups.sort(key=lambda g: g[0].coords)
    return ClusterSet(tuple(ClusterPoint(v, d, f) for v, d, f in groups))


def _require_dim1(x):
    if x.dim != 1:
        raise ValueError(f"needs a real sequence (dim 1), got dim {x.dim}")


def _require_I_bounded(x, ideal, norm=EUCLIDEAN):
    if not is_I_bounded(x, ideal, norm).holds:
        raise NotIBounded(f"sequence {x.name!r} is not {ideal}-bounded")


def ideal_limsup(x: StructuredSequence, ideal: Ideal) -> float:
    _require_dim1(x)
    _require_I_bounded(x, ideal)
    return max(c.point[0] for c in cluster_points(x, ideal))


def ideal_liminf(x: StructuredSequence, ideal: Ideal) -> float:
    _require_dim1(x)
    _require_I_bounded(x, ideal)
    return min(c.point[0] for c in cluster_points(x, ideal))


# -- rough limits -------------------------------------------------------------


def is_rI_limit(x: StructuredSequence, ideal: Ideal, xi, r: float, norm: NormSpec = EUCLIDEAN) -> bool:
    if r < 0:
        raise ValueError("r must be >= 0")
    xi = Point.of(xi)
    if xi.dim != x.dim:
        raise ValueError(f"candidate has dimension {xi.dim}, sequence {x.dim}")
    for part in _significant(x, ideal):
        if part.rule.tail_kind == ESCAPING:
            return False
        if distance(norm, part.rule.limit, xi) > r + TOL:
            return False
    return True


@dataclass(frozen=True)
class RoughLimitSet:
    """The rough limit set: an interval for real sequences, balls + lattice otherwise.

    For ``dim >= 2`` the set is the intersection of ``balls``; ``lattice`` holds
    the certified members on a grid of step ``lattice_step``.
    """

    dim: int
    r: float
    interval: Optional[Interval] = None
    balls: Tuple[ClosedBall, ...] = ()
    lattice: Tuple[Point, ...] = ()
    lattice_step: Optional[float] = None
    reason: Optional[str] = None

    @property
    def is_empty(self) -> bool:
        if self.reason is not None:
            return True
        if self.interval is not None:
            return self.interval.is_empty
        return not self.lattice

    @property
    def diameter(self) -> float:
        if self.interval is not None:
            return interval_diameter(self.interval)
        return _point_diameter(self.lattice, self.balls[0].norm if self.balls else EUCLIDEAN)

    def __str__(self):
        if self.interval is not None:
            return str(self.interval)
        if self.is_empty:
            return "Empty"
        return f"<{len(self.lattice)} lattice points, step {self.lattice_step}>"


def _point_diameter(points, norm):
    if len(points) < 2:
        return 0.0
    arr = np.asarray([p.coords for p in points])
    best = 0.0
    for i in range(len(arr)):
        d = np.asarray(norm(arr[i + 1:] - arr[i]))
        if d.size:
            best = max(best, float(d.max()))
    return best


def rough_limit_set(
    x: StructuredSequence,
    ideal: Ideal,
    r: float,
    norm: NormSpec = EUCLIDEAN,
    lattice_step: Optional[float] = None,
) -> RoughLimitSet:
    if r < 0:
        raise ValueError("r must be >= 0")
    _classify(x, ideal)
    if not is_I_bounded(x, ideal, norm).holds:
        empty = Interval.empty() if x.dim == 1 else None
        return RoughLimitSet(x.dim, r, interval=empty, reason=f"not {ideal}-bounded")
    clusters = cluster_points(x, ideal).values
    balls = tuple(ClosedBall(c, r, norm) for c in clusters)
    if x.dim == 1:
        top = max(c[0] for c in clusters)
        bottom = min(c[0] for c in clusters)
        if top - bottom > 2 * r + TOL:
            return RoughLimitSet(1, r, Interval.empty(), balls)
        lo, hi = top - r, bottom + r
        if lo > hi:
            lo = hi = (lo + hi) / 2
        for end in (lo, hi):
            assert is_rI_limit(x, ideal, end, r, norm), f"endpoint {end} failed membership"
        return RoughLimitSet(1, r, Interval(lo, hi), balls)
    return RoughLimitSet(x.dim, r, None, balls, *_lattice(x, ideal, r, norm, clusters, lattice_step))


def _lattice(x, ideal, r, norm, clusters, step):
    arr = np.asarray([c.coords for c in clusters])
    lo = arr.max(axis=0) - r
    hi = arr.min(axis=0) + r
    if np.any(lo > hi + TOL):
        return (), step
    width = float((hi - lo).max())
    if step is None:
        per_axis = max(2, int(MAX_LATTICE ** (1.0 / x.dim)))
        step = width / (per_axis - 1) if width > 0 else 1.0
    axes = []
    for a, b in zip(lo, hi):
        n = int(math.floor((b - a) / step + 1e-9)) + 1
        axes.append(np.round(a + step * np.arange(n), 12))
    total = math.prod(len(a) for a in axes)
    if total > MAX_LATTICE:
        raise ValueError(f"lattice of {total} points is too large; increase the step")
    pts = []
    for coords in itertools.product(*axes):
        p = Point(coords)
        if all(ball_contains(ClosedBall(c, r, norm), p, TOL) for c in clusters) and is_rI_limit(
            x, ideal, p, r, norm
        ):
            pts.append(p)
    return tuple(pts), step


def classic_rough_limit_set(x: StructuredSequence, r: float, norm: NormSpec = EUCLIDEAN, lattice_step=None):
    """Rough limits in Pringsheim's sense (eventually within ``r + eps``).

    The tail complement ``{j < N or k < N}`` is a finite union of rows and
    columns, so this coincides with the limit set under the minimal strongly
    admissible ideal.
    """
    return rough_limit_set(x, MINIMAL_SA, r, norm, lattice_step)


def min_roughness_degree(x: StructuredSequence, ideal: Ideal) -> float:
    """Smallest r with a nonempty rough limit set (``inf`` if there is none)."""
    _require_dim1(x)
    if not is_I_bounded(x, ideal).holds:
        return math.inf
    return (ideal_limsup(x, ideal) - ideal_liminf(x, ideal)) / 2


def is_I_convergent(x: StructuredSequence, ideal: Ideal, norm: NormSpec = EUCLIDEAN) -> Optional[Point]:
    if not is_I_bounded(x, ideal, norm).holds:
        return None
    for c in cluster_points(x, ideal).values:
        if is_rI_limit(x, ideal, c, 0.0, norm):
            return c
    return None


# -- theorem checkers ---------------------------------------------------------

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"


@dataclass
class CheckResult:
    name: str
    status: str
    witnesses: dict = field(default_factory=dict)
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status in (PASS, VACUOUS)


def _verdict(cond: bool) -> str:
    return PASS if cond else FAIL


def check_diameter(x, ideal, r, norm=EUCLIDEAN) -> CheckResult:
    s = rough_limit_set(x, ideal, r, norm)
    d = s.diameter
    res = CheckResult("diameter", _verdict(d <= 2 * r + TOL), {"set": str(s), "diameter": d, "bound": 2 * r})
    if not res.ok:
        res.message = f"diameter {d} exceeds 2r = {2 * r}"
    return res


def _dim1_set(x, ideal, r):
    _require_dim1(x)
    return rough_limit_set(x, ideal, r).interval


def check_ball_characterization(x, ideal, r) -> CheckResult:
    """I-convergence to xi holds iff the limit set is the ball of radius r at xi."""
    s = _dim1_set(x, ideal, r)
    conv = is_I_convergent(x, ideal)
    w = {"set": str(s), "limit": None if conv is None else conv[0]}
    if conv is not None:
        ok = not s.is_empty and abs(s.lo - (conv[0] - r)) <= TOL and abs(s.hi - (conv[0] + r)) <= TOL
        return CheckResult("ball", _verdict(ok), w, "" if ok else "set is not the r-ball at the limit")
    if not s.is_empty and abs(s.diameter - 2 * r) <= TOL:
        return CheckResult("ball", FAIL, w, "set is an r-ball but the sequence is not I-convergent")
    return CheckResult("ball", VACUOUS, w)


def check_cluster_ball(x, ideal, r, norm=EUCLIDEAN) -> CheckResult:
    s = rough_limit_set(x, ideal, r, norm)
    clusters = cluster_points(x, ideal).values
    w = {"set": str(s), "clusters": [list(c.coords) for c in clusters]}
    if s.is_empty:
        return CheckResult("cluster-ball", VACUOUS, w)
    members = [Point.of(s.interval.lo), Point.of(s.interval.hi)] if s.interval is not None else list(s.lattice)
    bad = [
        (list(m.coords), list(c.coords))
        for c in clusters
        for m in members
        if not ball_contains(ClosedBall(c, r, norm), m, TOL)
    ]
    w["outside"] = bad
    return CheckResult("cluster-ball", _verdict(not bad), w)


def check_boundedness_equivalence(x, ideal) -> CheckResult:
    """I-bounded iff some rough limit set is nonempty; bounded implies I-bounded."""
    _require_dim1(x)
    b = is_bounded(x).holds
    ib = is_I_bounded(x, ideal).holds
    rmin = min_roughness_degree(x, ideal)
    if math.isfinite(rmin):
        nonempty = not rough_limit_set(x, ideal, rmin).is_empty
        below = rmin > 0 and not rough_limit_set(x, ideal, max(0.0, rmin - 1e-6)).is_empty
    else:
        nonempty = any(not rough_limit_set(x, ideal, r).is_empty for r in (0.0, 1.0, 10.0, 1e3, 1e6))
        below = False
    w = {
        "bounded": b,
        "i_bounded": ib,
        "r_min": rmin,
        "nonempty_at_r_min": nonempty,
        "unbounded_but_i_bounded": (not b) and ib,
    }
    ok = (ib == math.isfinite(rmin) == nonempty) and (ib or not b) and not below
    return CheckResult("boundedness", _verdict(ok), w)


def check_closedness(x, ideal, r) -> CheckResult:
    s = _dim1_set(x, ideal, r)
    if s.is_empty:
        return CheckResult("closedness", VACUOUS, {"set": str(s)})
    inside = {e: is_rI_limit(x, ideal, e, r) for e in (s.lo, s.hi)}
    outside = {e: is_rI_limit(x, ideal, e, r) for e in (s.lo - OUTSIDE_STEP, s.hi + OUTSIDE_STEP)}
    ok = all(inside.values()) and not any(outside.values())
    w = {"set": str(s), "endpoints_member": all(inside.values()), "outside_member": any(outside.values())}
    return CheckResult("closedness", _verdict(ok), w)


def check_limsup_liminf(x, ideal) -> CheckResult:
    """An I-bounded real sequence is I-convergent iff its I-limsup equals its I-liminf."""
    _require_dim1(x)
    if not is_I_bounded(x, ideal).holds:
        return CheckResult("limsup-liminf", VACUOUS, {"i_bounded": False})
    sup, inf = ideal_limsup(x, ideal), ideal_liminf(x, ideal)
    clusters = [c[0] for c in cluster_points(x, ideal).values]
    conv = is_I_convergent(x, ideal)
    ok = (conv is not None) == (abs(sup - inf) <= TOL) and sup == max(clusters) and inf == min(clusters)
    w = {"limsup": sup, "liminf": inf, "limit": None if conv is None else conv[0]}
    return CheckResult("limsup-liminf", _verdict(ok), w)


def check_midpoint(x, ideal, norm: NormSpec, r: float, y1, y2) -> CheckResult:
    """Two rough limits 2r apart in a strictly convex norm force I-convergence to their midpoint."""
    y1, y2 = Point.of(y1), Point.of(y2)
    mid = (y1 + y2) * 0.5
    conv = is_I_convergent(x, ideal, norm)
    w = {
        "norm": str(norm),
        "strictly_convex": is_strictly_convex(norm),
        "y1_member": is_rI_limit(x, ideal, y1, r, norm),
        "y2_member": is_rI_limit(x, ideal, y2, r, norm),
        "separation": distance(norm, y1, y2),
        "midpoint": list(mid.coords),
        "limit": None if conv is None else list(conv.coords),
    }
    unmet = []
    if not w["strictly_convex"]:
        unmet.append("norm is not strictly convex")
    if not (w["y1_member"] and w["y2_member"]):
        unmet.append("y1 or y2 is not a rough limit")
    if abs(w["separation"] - 2 * r) > TOL:
        unmet.append("||y1 - y2|| != 2r")
    if unmet:
        return CheckResult("midpoint", HYPOTHESIS_NOT_MET, w, "; ".join(unmet))
    ok = conv is not None and distance(norm, conv, mid) <= TOL
    return CheckResult("midpoint", _verdict(ok), w)


THEOREM_CHECKS = ("diameter", "ball", "cluster-ball", "boundedness", "closedness", "limsup-liminf")


def run_checks(x, ideal, r, which: Sequence[str] = THEOREM_CHECKS) -> List[CheckResult]:
    table = {
        "diameter": lambda: check_diameter(x, ideal, r),
        "ball": lambda: check_ball_characterization(x, ideal, r),
        "cluster-ball": lambda: check_cluster_ball(x, ideal, r),
        "boundedness": lambda: check_boundedness_equivalence(x, ideal),
        "closedness": lambda: check_closedness(x, ideal, r),
        "limsup-liminf": lambda: check_limsup_liminf(x, ideal),
    }
    return [table[name]() for name in which]
