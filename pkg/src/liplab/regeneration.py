"""Regeneration events: do the bottom-pair and top-pair maximizer families
of a diagonal rectangle admit intersecting curve realizations?

The decision uses the curve-intersection form. Every maximizer is a chain
of valid consecutive pairs; between a consecutive pair the set of points
reachable by slope-bounded curve realizations is a tent. The event occurs
iff at some t the upper envelope of the bottom family's tents meets or
exceeds the lower envelope of the top family's tents: at the first such t
the two extremal realizations cross (intermediate value argument), and
whenever the envelopes stay strictly separated no pair of realizations can
touch. This counts crossings in empty gaps between Poisson points, which
the shared-point form would miss; both indicators are reported so the
distinction stays measurable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .chains import (
    CapExceededError,
    ChainQuery,
    InvalidQueryError,
    Skeleton,
    build_skeleton,
    pair_tents,
)
from .geometry import DiagRect, PointTS, ts_to_xy, Diag
from .sampling import PointSet

# Margins within +-OMEGA_EPS of zero count as touching (regeneration
# friendly); both the envelope decision and the brute-force oracle use it.
OMEGA_EPS = K.OMEGA_EPS_DEFAULT

START_IDX = K.START_IDX
END_IDX = K.END_IDX


@dataclass(frozen=True)
class EnvelopePolyline:
    """Piecewise-linear reachable-s envelope; slopes lie in [-1, 1]."""

    breaks_t: np.ndarray
    breaks_s: np.ndarray
    side: str
    clip: tuple[float, float]

    def value_at(self, t: float) -> float:
        return float(K.polyline_eval(self.breaks_t, self.breaks_s, float(t)))


@dataclass(frozen=True)
class OmegaReport:
    """Outcome of the regeneration-event decision for one block.

    ``margin`` is the maximum over t of (bottom upper envelope - top lower
    envelope); the event occurs iff margin >= -OMEGA_EPS. ``shared_member``
    flags the stricter shared-Poisson-point indicator.
    """

    occurs: bool
    witness_t: float | None
    margin: float
    shared_member: bool


def valid_pairs(sk: Skeleton, q: ChainQuery,
                cap: int = K.DEFAULT_PAIR_CAP) -> np.ndarray:
    """All point pairs consecutive on some maximizer of the query.

    Rows are (p, q) indices into the point set; the virtual start and end
    appear as START_IDX and END_IDX at levels 0 and total+1. Raises
    CapExceededError beyond ``cap`` pairs.
    """
    if q.start is None or q.end is None:
        raise InvalidQueryError("valid_pairs needs an endpoint query")
    pi, qi, status = K.valid_pairs_kernel(q.points.xs, q.points.ys,
                                          sk.forward, sk.backward,
                                          sk.total, cap)
    if status != 0:
        raise CapExceededError(f"valid-pair count exceeds cap {cap}")
    return np.column_stack((pi, qi))


def tent_envelope(pairs, side: str, clip: tuple[float, float]) -> EnvelopePolyline:
    """Pointwise extremal tent envelope of consecutive-pair coordinates.

    ``pairs`` holds rows ((t0, s0), (t1, s1)) or flat (t0, s0, t1, s1);
    ``side`` selects the upper (max) or lower (min) envelope, clipped into
    the band ``clip``. An empty pair set has no maximizer and is an error.
    """
    arr = np.asarray(pairs, dtype=np.float64).reshape(-1, 4)
    if arr.shape[0] == 0:
        raise InvalidQueryError("empty pair set has no envelope")
    if side not in ("upper", "lower"):
        raise ValueError("side must be 'upper' or 'lower'")
    lo, hi = float(clip[0]), float(clip[1])
    t0 = np.ascontiguousarray(arr[:, 0])
    s0 = np.ascontiguousarray(arr[:, 1])
    t1 = np.ascontiguousarray(arr[:, 2])
    s1 = np.ascontiguousarray(arr[:, 3])
    tol = 1e-9 * (1.0 + float(np.max(np.abs(arr))))
    if np.any(t1 - t0 < -tol) or np.any(np.abs(s1 - s0) > (t1 - t0) + tol):
        raise ValueError("pair violates the slope constraint")
    if side == "upper":
        bt, bv = K.upper_envelope(t0, s0, t1, s1)
    else:
        bt, bv = K.lower_envelope(t0, s0, t1, s1)
    bt, bv = K.clip_polyline(bt, bv, lo, hi)
    return EnvelopePolyline(breaks_t=bt, breaks_s=bv, side=side, clip=(lo, hi))


def _block_queries(points: PointSet, rect: DiagRect) -> tuple[ChainQuery, ChainQuery]:
    region = Diag(rect)
    bottom = ChainQuery(points, region=region,
                        start=ts_to_xy(PointTS(rect.t_min, rect.s_min)),
                        end=ts_to_xy(PointTS(rect.t_max, rect.s_min)))
    top = ChainQuery(points, region=region,
                     start=ts_to_xy(PointTS(rect.t_min, rect.s_max)),
                     end=ts_to_xy(PointTS(rect.t_max, rect.s_max)))
    return bottom, top


def omega_occurs(points: PointSet, rect: DiagRect,
                 cap: int = K.DEFAULT_PAIR_CAP) -> OmegaReport:
    """Exact envelope-based regeneration decision for one block."""
    bottom, top = _block_queries(points, rect)
    clip = (rect.s_min, rect.s_max)
    sk_b = build_skeleton(bottom)
    ub = tent_envelope(pair_tents(bottom, valid_pairs(sk_b, bottom, cap)),
                       "upper", clip)
    sk_t = build_skeleton(top)
    lb = tent_envelope(pair_tents(top, valid_pairs(sk_t, top, cap)),
                       "lower", clip)
    margin, margin_t = K.polyline_max_diff(ub.breaks_t, ub.breaks_s,
                                           lb.breaks_t, lb.breaks_s)
    occurs = margin >= -OMEGA_EPS
    shared = bool(np.any(sk_b.member & sk_t.member))
    return OmegaReport(occurs=bool(occurs),
                       witness_t=float(margin_t) if occurs else None,
                       margin=float(margin), shared_member=shared)


def enumerate_maximizers(q: ChainQuery, cap: int) -> list[np.ndarray]:
    """Every maximal chain of the query, as point index arrays.

    Depth-first traversal of the valid-pair DAG; the path count is checked
    against ``cap`` before materializing.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    sk = build_skeleton(q)
    pairs = valid_pairs(sk, q)
    succ: dict[int, list[int]] = {}
    for p, qq in pairs:
        succ.setdefault(int(p), []).append(int(qq))
    # count paths before enumerating
    counts: dict[int, int] = {END_IDX: 1}

    def count_from(v: int) -> int:
        if v in counts:
            return counts[v]
        c = sum(count_from(w) for w in succ.get(v, ()))
        counts[v] = c
        return c

    n_paths = count_from(START_IDX)
    if n_paths > cap:
        raise CapExceededError(f"{n_paths} maximizers exceed cap {cap}")
    out: list[np.ndarray] = []
    path: list[int] = []

    def walk(v: int):
        if v == END_IDX:
            out.append(np.array(path, dtype=np.int64))
            return
        for w in succ.get(v, ()):
            if w != END_IDX:
                path.append(w)
                walk(w)
                path.pop()
            else:
                walk(w)

    walk(START_IDX)
    return out


def _chain_tent_polyline(q: ChainQuery, chain: np.ndarray, side: str,
                         clip: tuple[float, float]) -> EnvelopePolyline:
    # one maximizer's own reachable band: tents of its consecutive points
    ts = q.points.t_coords()
    ss = q.points.s_coords()
    a_t = (q.start.x + q.start.y) / K.SQRT2
    a_s = (q.start.y - q.start.x) / K.SQRT2
    b_t = (q.end.x + q.end.y) / K.SQRT2
    b_s = (q.end.y - q.end.x) / K.SQRT2
    knots_t = [a_t] + [float(ts[i]) for i in chain] + [b_t]
    knots_s = [a_s] + [float(ss[i]) for i in chain] + [b_s]
    rows = [(knots_t[i], knots_s[i], knots_t[i + 1], knots_s[i + 1])
            for i in range(len(knots_t) - 1)]
    return tent_envelope(rows, side, clip)


def omega_bruteforce(points: PointSet, rect: DiagRect, cap: int) -> bool:
    """Oracle for omega_occurs: enumerate both maximizer families and test
    every (bottom, top) pair for intersecting curve realizations by tent
    comparison. Exact on instances small enough to enumerate."""
    bottom, top = _block_queries(points, rect)
    max_b = enumerate_maximizers(bottom, cap)
    max_t = enumerate_maximizers(top, cap)
    clip = (rect.s_min, rect.s_max)
    top_polys = [_chain_tent_polyline(top, c, "lower", clip) for c in max_t]
    for cb in max_b:
        pb = _chain_tent_polyline(bottom, cb, "upper", clip)
        for pt in top_polys:
            margin, _ = K.polyline_max_diff(pb.breaks_t, pb.breaks_s,
                                            pt.breaks_t, pt.breaks_s)
            if margin >= -OMEGA_EPS:
                return True
    return False
