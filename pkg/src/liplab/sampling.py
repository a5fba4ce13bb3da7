"""Reproducible unit-intensity Poisson sampling in regions.

A sample is fully determined by a ``SeedSpec``: the experiment seed plus a
64-bit stream index. Distinct streams give statistically independent
draws; the derivation is the documented SplitMix64 scheme in
``_kernels``. Everything is stateless, so concurrent sampling of distinct
streams is safe and replicate order never matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .geometry import (
    AxisRect,
    ConvexPolygon,
    Diag,
    PointXY,
    Region,
    Strip,
)

_U64 = 1 << 64


@dataclass(frozen=True)
class SeedSpec:
    """Experiment seed plus replicate stream index (both 64-bit)."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < _U64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if not 0 <= self.stream < _U64:
            raise ValueError("stream must fit in an unsigned 64-bit integer")

    def with_stream(self, stream: int) -> "SeedSpec":
        return SeedSpec(self.seed, stream)


class PointSet:
    """Immutable planar point collection, sorted lexicographically by (x, y).

    Exact duplicate points are dropped at construction (a probability-zero
    event under the Poisson law, but hand-built fixtures may contain them).
    """

    __slots__ = ("xs", "ys")

    def __init__(self, xs: np.ndarray, ys: np.ndarray, *, presorted: bool = False):
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValueError("xs and ys must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("coordinates must be finite")
        if not presorted and xs.size > 1:
            order = np.lexsort((ys, xs))
            xs = xs[order]
            ys = ys[order]
            dup = np.zeros(xs.size, dtype=bool)
            dup[1:] = (xs[1:] == xs[:-1]) & (ys[1:] == ys[:-1])
            if dup.any():
                xs = xs[~dup]
                ys = ys[~dup]
        self.xs = xs
        self.ys = ys
        self.xs.setflags(write=False)
        self.ys.setflags(write=False)

    @classmethod
    def from_points(cls, points) -> "PointSet":
        xs = np.array([p.x for p in points], dtype=np.float64)
        ys = np.array([p.y for p in points], dtype=np.float64)
        return cls(xs, ys)

    @classmethod
    def from_ts(cls, ts, ss) -> "PointSet":
        ts = np.asarray(ts, dtype=np.float64)
        ss = np.asarray(ss, dtype=np.float64)
        return cls((ts - ss) / K.SQRT2, (ts + ss) / K.SQRT2)

    @property
    def count(self) -> int:
        return int(self.xs.size)

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other):
        return (isinstance(other, PointSet)
                and np.array_equal(self.xs, other.xs)
                and np.array_equal(self.ys, other.ys))

    def __repr__(self):
        return f"PointSet(count={self.count})"

    def point(self, i: int) -> PointXY:
        return PointXY(float(self.xs[i]), float(self.ys[i]))

    def t_coords(self) -> np.ndarray:
        return (self.xs + self.ys) / K.SQRT2

    def s_coords(self) -> np.ndarray:
        return (self.ys - self.xs) / K.SQRT2


def poisson_count(mean: float, seed: SeedSpec) -> int:
    """Exact Poisson(mean) draw for the given seed/stream pair."""
    if not (math.isfinite(mean) and mean >= 0.0):
        raise ValueError("mean must be finite and nonnegative")
    st = K.rng_init(np.uint64(seed.seed), np.uint64(seed.stream))
    return int(K.poisson_draw(st, float(mean)))


def sample_region(region: Region, seed: SeedSpec) -> PointSet:
    """Unit-intensity Poisson sample of a region.

    The point count is Poisson(area); given the count, points are iid
    uniform on the region. A zero-area region yields an empty set.
    """
    s = np.uint64(seed.seed)
    j = np.uint64(seed.stream)
    if isinstance(region, AxisRect):
        xs, ys = K.sample_axis_rect(s, j, region.x0, region.y0, region.x1, region.y1)
        return PointSet(xs, ys, presorted=True)
    if isinstance(region, Strip):
        xs, ys = K.sample_strip(s, j, region.n, region.half_width)
        return PointSet(xs, ys, presorted=True)
    if isinstance(region, Diag):
        r = region.rect
        xs, ys, _, _ = K.sample_diag_rect(s, j, r.t_min, r.s_min, r.length, r.width)
        return PointSet(xs, ys)
    if isinstance(region, ConvexPolygon):
        vx = np.array([v.x for v in region.vertices], dtype=np.float64)
        vy = np.array([v.y for v in region.vertices], dtype=np.float64)
        t_lo, t_hi, s_lo, s_hi = region.ts_bounds()
        xs, ys = K.sample_polygon(s, j, vx, vy, region.area(), t_lo, t_hi, s_lo, s_hi)
        return PointSet(xs, ys, presorted=True)
    raise TypeError(f"unsupported region type: {type(region).__name__}")
