"""Rough ideal convergence of double sequences, exactly and by brute force."""

from importlib import resources

from .analysis import (
    CheckResult,
    ClusterSet,
    NotIBounded,
    RoughLimitSet,
    RoughnessQuery,
    check_ball_characterization,
    check_boundedness_equivalence,
    check_closedness,
    check_cluster_ball,
    check_diameter,
    check_limsup_liminf,
    check_midpoint,
    classic_rough_limit_set,
    cluster_points,
    ideal_liminf,
    ideal_limsup,
    is_I_convergent,
    is_rI_limit,
    min_roughness_degree,
    rough_limit_set,
    run_checks,
)
from .geometry import (
    EUCLIDEAN,
    MAX_NORM,
    ClosedBall,
    Interval,
    NormSpec,
    Point,
    ball_contains,
    interval_diameter,
    is_strictly_convex,
    norm_eval,
)
from .ideals import (
    DENSITY_ZERO,
    EMPTY,
    FINITE_SETS,
    FULL,
    MINIMAL_SA,
    ColBand,
    Complement,
    DensityValue,
    Difference,
    FiniteSet,
    Ideal,
    Intersection,
    Region,
    ResidueCell,
    RowBand,
    SparseProduct,
    UndecidableRegion,
    Union,
    check_ideal_axioms,
    filter_member,
    ideal_contains,
    is_admissible,
    is_strongly_admissible,
    region_contains,
    region_density,
)
from .sequences import (
    Constant,
    Formula,
    InvalidSequence,
    Piece,
    StructuredSequence,
    eval_grid,
    eval_point,
    is_bounded,
    is_I_bounded,
    validate,
)
from .textio import ParseError, format_sequence, load_sequence, parse_region, parse_sequence

__version__ = "0.1.0"

FIXTURES = (
    "example21",
    "constant",
    "alternating",
    "alternating_rows",
    "three_values",
    "midpoint_euclidean",
    "midpoint_max",
)


def fixture_text(name: str) -> str:
    return resources.files(__name__).joinpath("data", f"{name}.seq").read_text(encoding="utf-8")


def load_fixture(name: str) -> StructuredSequence:
    """One of the sequences shipped with the package (see ``FIXTURES``)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return parse_sequence(fixture_text(name))
