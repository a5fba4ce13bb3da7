"""liplab: simulation laboratory for longest increasing paths of planar
Poisson processes in strips and diagonal rectangles."""

from .geometry import (
    AxisRect,
    AxisSquare,
    ConvexPolygon,
    Diag,
    DiagRect,
    PointTS,
    PointXY,
    Region,
    Strip,
    dominates,
    dominates_ts,
    region_area,
    region_contains,
    ts_to_xy,
    xy_to_ts,
)
from .sampling import PointSet, SeedSpec, poisson_count, sample_region
from .chains import (
    CapExceededError,
    ChainQuery,
    ChainResult,
    InvalidQueryError,
    Skeleton,
    TransversalReport,
    build_skeleton,
    delta_spread,
    longest_chain,
    transversal_S,
)
from .regeneration import (
    EnvelopePolyline,
    OmegaReport,
    enumerate_maximizers,
    omega_bruteforce,
    omega_occurs,
    tent_envelope,
    valid_pairs,
)
from .stats import (
    KSReport,
    ProbReport,
    SlopeReport,
    SummaryStats,
    ks_one_sample_normal,
    ks_two_sample,
    normal_cdf,
    ols_slope,
    summarize,
    wilson_ci,
)

__version__ = "0.1.0"
