"""Brute-force checks on finite truncations ``[1..n] x [1..m]``.

Nothing here uses the exact density algebra or the analysis engine: sets are
counted point by point on growing grids, so the verdicts serve as an
independent reference for the exact results.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .geometry import EUCLIDEAN, Interval, NormSpec, Point, norm_eval
from .ideals import Ideal
from .sequences import StructuredSequence, eval_grid

SMALL_THRESHOLD = 0.02
NOT_SMALL_THRESHOLD = 0.05
NOISE_MARGIN = 0.1
BAND_BOUND = 20
TAIL_FACTOR = 20

SMALL = "small"
NOT_SMALL = "not-small"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Exhaustion:
    """Increasing grid bounds approximating ``n, m -> infinity``."""

    schedule: Tuple[Tuple[int, int], ...] = ((50, 50), (100, 100), (200, 200), (400, 400))

    def __post_init__(self):
        sched = tuple((int(n), int(m)) for n, m in self.schedule)
        if len(sched) < 3:
            raise ValueError("an exhaustion needs at least 3 stages")
        if any(n < 1 or m < 1 for n, m in sched):
            raise ValueError("grid bounds must be >= 1")
        for (n0, m0), (n1, m1) in zip(sched, sched[1:]):
            if not (n1 > n0 and m1 > m0):
                raise ValueError(f"schedule must increase in both coordinates: {sched}")
        object.__setattr__(self, "schedule", sched)

    @classmethod
    def parse(cls, text: str) -> "Exhaustion":
        stages = []
        for chunk in text.split(","):
            n, _, m = chunk.strip().lower().partition("x")
            stages.append((int(n), int(m or n)))
        return cls(tuple(stages))

    @property
    def final(self) -> Tuple[int, int]:
        return self.schedule[-1]

    def __str__(self):
        return ",".join(f"{n}x{m}" for n, m in self.schedule)


DEFAULT_EXHAUSTION = Exhaustion()


@dataclass(frozen=True)
class OracleVerdict:
    decision: str
    trace: Tuple[float, ...]

    @property
    def small(self) -> bool:
        return self.decision == SMALL


def _index_grid(n, m, j0=1, k0=1):
    J = np.arange(j0, j0 + n, dtype=np.int64)[:, None]
    K = np.arange(k0, k0 + m, dtype=np.int64)[None, :]
    return J, K


def _mask(pred, n, m) -> np.ndarray:
    J, K = _index_grid(n, m)
    out = np.asarray(pred(J, K), dtype=bool)
    return np.broadcast_to(out, (n, m))


def empirical_count(pred: Callable, n: int, m: int) -> int:
    """``|{(j, k) : j <= n, k <= m, pred(j, k)}|``; ``pred`` must broadcast over arrays."""
    if n < 1 or m < 1:
        raise ValueError("n, m must be >= 1")
    return int(np.count_nonzero(_mask(pred, n, m)))


def empirical_density(pred: Callable, n: int, m: int) -> float:
    return empirical_count(pred, n, m) / (n * m)


def verdict_from_mask(ideal: Ideal, mask: np.ndarray, ex: Exhaustion = DEFAULT_EXHAUSTION) -> OracleVerdict:
    """Decide smallness of a set given its indicator on the final grid of ``ex``."""
    if ideal is Ideal.DENSITY_ZERO:
        trace = tuple(np.count_nonzero(mask[:n, :m]) / (n * m) for n, m in ex.schedule)
        decreasing = all(b <= a * (1 + NOISE_MARGIN) for a, b in zip(trace, trace[1:]))
        if trace[-1] < SMALL_THRESHOLD and decreasing:
            return OracleVerdict(SMALL, trace)
        if trace[-1] >= NOT_SMALL_THRESHOLD:
            return OracleVerdict(NOT_SMALL, trace)
        return OracleVerdict(INCONCLUSIVE, trace)
    if ideal is Ideal.MINIMAL_STRONGLY_ADMISSIBLE:
        B = BAND_BOUND
        trace = tuple(float(np.count_nonzero(mask[B:n, B:m])) for n, m in ex.schedule)
        return OracleVerdict(SMALL if not any(trace) else NOT_SMALL, trace)
    if ideal is Ideal.FINITE_SETS:
        trace = tuple(float(np.count_nonzero(mask[:n, :m])) for n, m in ex.schedule)
        return OracleVerdict(SMALL if trace[-1] == trace[-2] else NOT_SMALL, trace)
    raise ValueError(f"unknown ideal {ideal!r}")


def oracle_small(ideal: Ideal, pred: Callable, ex: Exhaustion = DEFAULT_EXHAUSTION) -> OracleVerdict:
    return verdict_from_mask(ideal, _mask(pred, *ex.final), ex)


def _distances(values: np.ndarray, xi, norm: NormSpec) -> np.ndarray:
    return norm_eval(norm, values - Point.of(xi).as_array())


def oracle_is_rI_limit(
    x: StructuredSequence,
    ideal: Ideal,
    xi,
    r: float,
    eps: float,
    ex: Exhaustion = DEFAULT_EXHAUSTION,
    norm: NormSpec = EUCLIDEAN,
    values: Optional[np.ndarray] = None,
) -> OracleVerdict:
    """Smallness of ``{(j, k) : ||x_jk - xi|| >= r + eps}`` on the exhaustion."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if values is None:
        values = eval_grid(x, *ex.final)
    return verdict_from_mask(ideal, _distances(values, xi, norm) >= r + eps, ex)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ROUGHLIM_THREADS", "")))
    except ValueError:
        return os.cpu_count() or 1


def lattice(box, h: float) -> List[Point]:
    """Row-major lattice of step ``h`` over ``box`` (one ``(lo, hi)`` pair per coordinate)."""
    if h <= 0:
        raise ValueError("lattice step must be > 0")
    box = [box] if np.ndim(box[0]) == 0 else list(box)
    axes = []
    for lo, hi in box:
        n = int(math.floor((hi - lo) / h + 1e-9)) + 1
        axes.append(np.round(lo + h * np.arange(n), 12))
    return [Point(c) for c in itertools.product(*axes)]


def oracle_limit_set_scan(
    x: StructuredSequence,
    ideal: Ideal,
    r: float,
    box,
    h: float,
    eps_policy: Sequence[float] = (0.1, 0.05),
    ex: Exhaustion = DEFAULT_EXHAUSTION,
    norm: NormSpec = EUCLIDEAN,
) -> List[Point]:
    """Lattice points whose exceedance sets look small for every eps in the policy."""
    if not eps_policy or any(e <= 0 for e in eps_policy):
        raise ValueError("eps policy must be nonempty and positive")
    values = eval_grid(x, *ex.final)
    pts = lattice(box, h)

    def accept(p):
        d = _distances(values, p, norm)
        return all(verdict_from_mask(ideal, d >= r + e, ex).small for e in eps_policy)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        keep = list(pool.map(accept, pts))
    return [p for p, k in zip(pts, keep) if k]


def classic_tail_check(
    x: StructuredSequence, xi, r: float, eps: float, N: int, norm: NormSpec = EUCLIDEAN
) -> bool:
    """Whether ``||x_jk - xi|| < r + eps`` on the whole block ``N <= j, k <= 20 N``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    size = (TAIL_FACTOR - 1) * N + 1
    values = eval_grid(x, size, size, j0=N, k0=N)
    return bool((_distances(values, xi, norm) < r + eps).all())


def hausdorff_to_interval(points: Sequence, interval: Interval) -> float:
    """Hausdorff distance between a finite set of reals and a closed interval."""
    pts = np.sort(np.asarray([Point.of(p)[0] for p in points], dtype=float))
    if interval.is_empty or pts.size == 0:
        return 0.0 if (interval.is_empty and pts.size == 0) else math.inf
    lo, hi = interval.lo, interval.hi
    to_interval = float(np.maximum(np.maximum(lo - pts, pts - hi), 0.0).max())
    # d(y, pts) over [lo, hi] peaks at an endpoint or a gap midpoint
    cands = [lo, hi] + [m for m in (pts[1:] + pts[:-1]) / 2 if lo <= m <= hi]
    to_points = max(float(np.abs(pts - c).min()) for c in cands)
    return max(to_interval, to_points)


def empirical_limsup(x: StructuredSequence, ideal: Ideal, n: int = 1000, threshold: float = SMALL_THRESHOLD) -> float:
    """Grid estimate of the ideal limit superior of a real sequence."""
    return _empirical_extreme(x, ideal, n, threshold, upper=True)


def empirical_liminf(x: StructuredSequence, ideal: Ideal, n: int = 1000, threshold: float = SMALL_THRESHOLD) -> float:
    return _empirical_extreme(x, ideal, n, threshold, upper=False)


def _empirical_extreme(x, ideal, n, threshold, upper):
    if x.dim != 1:
        raise ValueError("limsup/liminf need a real sequence")
    v = eval_grid(x, n, n)[..., 0]
    if ideal is Ideal.DENSITY_ZERO:
        # smallest t with density{x > t} below the threshold
        s = np.sort(v, axis=None)
        cut = int(math.floor(threshold * s.size))
        return float(s[-1 - cut] if upper else s[cut])
    if ideal is Ideal.MINIMAL_STRONGLY_ADMISSIBLE:
        tail = v[n // 2:, n // 2:]
        return float(tail.max() if upper else tail.min())
    raise ValueError(f"no empirical limsup for {ideal}")
