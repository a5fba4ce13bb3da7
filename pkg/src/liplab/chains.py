"""Exact longest-increasing-chain computation and maximizer skeletons.

A chain is a set of points totally ordered by dominance; for a convex
region the straight segments between consecutive chain points are monotone
and stay inside the region, so the restricted problem reduces to the
longest chain among feasible points (see the note on ``_CONVEXITY_NOTE``).
Endpoints contribute 0 to the length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .geometry import DiagRect, PointXY, Region, dominates, SQRT2
from .sampling import PointSet

_CONVEXITY_NOTE = """\
Convexity reduction: for points p < q (dominance) inside a convex region,
the straight segment p -> q has slope in [-1, 1] in diagonal coordinates
and lies inside the region, hence any chain of feasible points is realized
by an increasing path that never leaves the region. Non-convex regions
would break this reduction and are rejected at construction time.
"""


class InvalidQueryError(ValueError):
    """Chain query violates its preconditions."""


class CapExceededError(RuntimeError):
    """Enumeration exceeded its instance-size cap."""


@dataclass(frozen=True)
class ChainQuery:
    """Point configuration with optional region and endpoint constraints."""

    points: PointSet
    region: Region | None = None
    start: PointXY | None = None
    end: PointXY | None = None

    def __post_init__(self):
        if self.start is not None and self.end is not None:
            if not dominates(self.start, self.end):
                raise InvalidQueryError("start must dominate into end")
        if self.region is not None:
            for name, p in (("start", self.start), ("end", self.end)):
                if p is None:
                    continue
                tol = 1e-9 * (1.0 + abs(p.x) + abs(p.y))
                if not self.region.contains_tol(p, tol):
                    raise InvalidQueryError(f"{name} lies outside the region")

    def feasible_mask(self) -> np.ndarray:
        """Feasible points: inside the region, inside the start point's
        forward cone and the end point's backward cone. Points exactly
        coinciding with an endpoint are excluded (endpoints count 0)."""
        xs, ys = self.points.xs, self.points.ys
        mask = np.ones(xs.size, dtype=bool)
        if self.region is not None:
            mask &= self.region.contains_many(xs, ys)
        if self.start is not None:
            mask &= (xs >= self.start.x) & (ys >= self.start.y)
            mask &= ~((xs == self.start.x) & (ys == self.start.y))
        if self.end is not None:
            mask &= (xs <= self.end.x) & (ys <= self.end.y)
            mask &= ~((xs == self.end.x) & (ys == self.end.y))
        return mask


@dataclass(frozen=True)
class ChainResult:
    """Maximal chain length with one witness (point indices in order)."""

    length: int
    witness: np.ndarray


@dataclass(frozen=True)
class Skeleton:
    """Per-point forward/backward maximal chain lengths and membership.

    ``member[i]`` is true iff point i lies on some maximizer, i.e.
    ``forward[i] + backward[i] - 1 == total``.
    """

    forward: np.ndarray
    backward: np.ndarray
    member: np.ndarray
    total: int
    feasible: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class TransversalReport:
    """Transversal fluctuation of a point-to-point query.

    ``s_points`` measures maximizer members only; ``s_envelope`` measures
    the tent envelope of every maximizing-curve realization, which can bow
    outward between points. Always ``s_envelope >= s_points``.
    """

    s_points: float
    s_envelope: float


def longest_chain(q: ChainQuery) -> ChainResult:
    """Maximal chain of feasible points, with one witness.

    O(k log k) patience pass over the lexicographic order; the witness is
    rebuilt from patience back-pointers.
    """
    mask = q.feasible_mask()
    witness = K.chain_witness(q.points.ys, mask)
    return ChainResult(length=int(witness.size), witness=witness)


def build_skeleton(q: ChainQuery) -> Skeleton:
    """Forward and backward passes over y-ranks (prefix-max order-statistic
    tree), then membership flags."""
    mask = q.feasible_mask()
    n = q.points.count
    fwd = np.zeros(n, dtype=np.int64)
    bwd = np.zeros(n, dtype=np.int64)
    total = int(K.skeleton_bit(q.points.ys, mask, fwd, bwd))
    member = K.member_mask(fwd, bwd, total)
    fwd.setflags(write=False)
    bwd.setflags(write=False)
    member.setflags(write=False)
    return Skeleton(forward=fwd, backward=bwd, member=member, total=total,
                    feasible=mask)


def _clip_band(region: Region | None) -> tuple[float, float]:
    # Constant s-band the envelope must respect. Exact for strips and
    # diagonal rectangles; for other regions the ts bounding band is used
    # (conservative). No region means unbounded.
    if region is None:
        return -K.UNBOUNDED, K.UNBOUNDED
    t0, t1, s0, s1 = region.ts_bounds()
    return s0, s1


def transversal_S(q: ChainQuery) -> TransversalReport:
    """Transversal fluctuation S for an endpoint query with equal s.

    ``s_points``: maximal |s - s_start| over maximizer members (and the
    endpoints themselves). ``s_envelope``: the same maximum over the tent
    envelopes of all maximizing-curve realizations.
    """
    if q.start is None or q.end is None:
        raise InvalidQueryError("transversal_S needs both endpoints")
    s_start = (q.start.y - q.start.x) / SQRT2
    s_end = (q.end.y - q.end.x) / SQRT2
    scale = 1.0 + abs(s_start)
    if abs(s_end - s_start) > 1e-9 * scale:
        raise InvalidQueryError("endpoints must share their s-coordinate")
    sk = build_skeleton(q)
    ss = q.points.s_coords()
    if sk.total > 0:
        s_pts = float(np.max(np.abs(ss[sk.member] - s_start), initial=0.0))
    else:
        s_pts = 0.0
    pairs = _valid_pairs_arrays(q, sk)
    tents = pair_tents(q, pairs)
    lo, hi = _clip_band(q.region)
    ub_t, ub_v = K.upper_envelope(tents[:, 0], tents[:, 1], tents[:, 2], tents[:, 3])
    ub_t, ub_v = K.clip_polyline(ub_t, ub_v, lo, hi)
    lb_t, lb_v = K.lower_envelope(tents[:, 0], tents[:, 1], tents[:, 2], tents[:, 3])
    lb_t, lb_v = K.clip_polyline(lb_t, lb_v, lo, hi)
    s_env = max(K.polyline_abs_max(ub_t, ub_v, s_start),
                K.polyline_abs_max(lb_t, lb_v, s_start))
    return TransversalReport(s_points=s_pts, s_envelope=float(s_env))


def _valid_pairs_arrays(q: ChainQuery, sk: Skeleton,
                        cap: int = K.DEFAULT_PAIR_CAP) -> np.ndarray:
    pi, qi, status = K.valid_pairs_kernel(q.points.xs, q.points.ys,
                                          sk.forward, sk.backward,
                                          sk.total, cap)
    if status != 0:
        raise CapExceededError(f"valid-pair count exceeds cap {cap}")
    return np.column_stack((pi, qi))


def pair_tents(q: ChainQuery, pairs: np.ndarray) -> np.ndarray:
    """Resolve index pairs into tent coordinate rows (t0, s0, t1, s1)."""
    if q.start is None or q.end is None:
        raise InvalidQueryError("pair tents need both endpoints")
    ts = q.points.t_coords()
    ss = q.points.s_coords()
    a = (q.start.x + q.start.y) / SQRT2, (q.start.y - q.start.x) / SQRT2
    b = (q.end.x + q.end.y) / SQRT2, (q.end.y - q.end.x) / SQRT2
    t0, s0, t1, s1 = K.pairs_to_tents(pairs[:, 0].copy(), pairs[:, 1].copy(),
                                      ts, ss, a[0], a[1], b[0], b[1])
    return np.column_stack((t0, s0, t1, s1))


def delta_spread(rect: DiagRect, points: PointSet) -> int:
    """Exact boundary spread of a diagonal rectangle.

    Enumerates the critical boundary heights (cone/edge intersections,
    corners, and the midpoints of consecutive criticals) and evaluates the
    endpoint-restricted chain length on every candidate pair.
    """
    ts = points.t_coords()
    ss = points.s_coords()
    inside = ((ts >= rect.t_min) & (ts <= rect.t_max)
              & (ss >= rect.s_min) & (ss <= rect.s_max))
    ys = points.ys[inside]
    return int(K.delta_spread_kernel(ys, ts[inside], ss[inside],
                                     rect.t_min, rect.t_max,
                                     rect.s_min, rect.s_max))
