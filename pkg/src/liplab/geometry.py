"""Coordinate systems, regions, containment and the dominance order.

Two coordinate systems are used throughout:

* ``(x, y)`` -- the usual Cartesian plane.
* ``(t, s)`` -- diagonal coordinates: ``t`` measures distance along the
  line ``y = x`` and ``s`` along ``y = -x``, i.e. ``t = (x+y)/sqrt(2)``,
  ``s = (y-x)/sqrt(2)``.

An increasing path is monotone in both ``x`` and ``y``; in diagonal
coordinates this is exactly the slope constraint ``|ds/dt| <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PointXY:
    """Point in Cartesian coordinates."""

    x: float
    y: float


@dataclass(frozen=True)
class PointTS:
    """Point in diagonal coordinates (t along y=x, s along y=-x)."""

    t: float
    s: float


def xy_to_ts(p: PointXY) -> PointTS:
    """Rotate a Cartesian point into diagonal coordinates."""
    return PointTS((p.x + p.y) / SQRT2, (p.y - p.x) / SQRT2)


def ts_to_xy(p: PointTS) -> PointXY:
    """Rotate a diagonal-coordinate point back to Cartesian coordinates."""
    return PointXY((p.t - p.s) / SQRT2, (p.t + p.s) / SQRT2)


def dominates(p: PointXY, q: PointXY) -> bool:
    """True iff ``q`` is weakly above and to the right of ``p``.

    Weak inequalities are used deliberately: ties have measure zero under
    the Poisson law, and weak comparison makes hand-built fixtures with
    exact ties behave predictably.
    """
    return q.x >= p.x and q.y >= p.y


def dominates_ts(p: PointTS, q: PointTS) -> bool:
    """Dominance expressed in diagonal coordinates (cone condition)."""
    return q.t - p.t >= abs(q.s - p.s)


@dataclass(frozen=True)
class DiagRect:
    """Axis-aligned rectangle in diagonal coordinates.

    The region is ``{(t, s): t_min <= t <= t_min + length,
    s_min <= s <= s_min + width}``.
    """

    t_min: float
    s_min: float
    length: float
    width: float

    def __post_init__(self):
        if not (self.length > 0 and self.width > 0):
            raise ValueError("DiagRect needs positive length and width")

    @property
    def t_max(self) -> float:
        return self.t_min + self.length

    @property
    def s_max(self) -> float:
        return self.s_min + self.width

    def contains_ts(self, t: float, s: float) -> bool:
        return self.t_min <= t <= self.t_max and self.s_min <= s <= self.s_max


class Region:
    """Convex sampling/constraint region. Closed boundaries everywhere."""

    def contains(self, p: PointXY) -> bool:
        raise NotImplementedError

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains_tol(self, p: PointXY, tol: float) -> bool:
        """Containment up to an absolute slack; for validating endpoints
        that sit exactly on boundaries through rotation round-off."""
        raise NotImplementedError

    def area(self) -> float:
        raise NotImplementedError

    def ts_bounds(self) -> tuple[float, float, float, float]:
        """Bounding rectangle ``(t_lo, t_hi, s_lo, s_hi)`` in diagonal coords."""
        raise NotImplementedError


@dataclass(frozen=True)
class AxisRect(Region):
    """Cartesian axis-aligned rectangle ``[x0, x1] x [y0, y1]``."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x1 >= self.x0 and self.y1 >= self.y0):
            raise ValueError("AxisRect needs x1 >= x0 and y1 >= y0")

    def contains(self, p: PointXY) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return ((xs >= self.x0) & (xs <= self.x1)
                & (ys >= self.y0) & (ys <= self.y1))

    def contains_tol(self, p: PointXY, tol: float) -> bool:
        return (self.x0 - tol <= p.x <= self.x1 + tol
                and self.y0 - tol <= p.y <= self.y1 + tol)

    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def ts_bounds(self) -> tuple[float, float, float, float]:
        corners = [
            xy_to_ts(PointXY(self.x0, self.y0)),
            xy_to_ts(PointXY(self.x1, self.y0)),
            xy_to_ts(PointXY(self.x0, self.y1)),
            xy_to_ts(PointXY(self.x1, self.y1)),
        ]
        ts = [c.t for c in corners]
        ss = [c.s for c in corners]
        return min(ts), max(ts), min(ss), max(ss)


def AxisSquare(n: float) -> AxisRect:
    """The square ``[0, n]^2``."""
    return AxisRect(0.0, 0.0, float(n), float(n))


@dataclass(frozen=True)
class Diag(Region):
    """Region backed by a diagonal rectangle."""

    rect: DiagRect

    def contains(self, p: PointXY) -> bool:
        q = xy_to_ts(p)
        return self.rect.contains_ts(q.t, q.s)

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        t = (xs + ys) / SQRT2
        s = (ys - xs) / SQRT2
        r = self.rect
        return (t >= r.t_min) & (t <= r.t_max) & (s >= r.s_min) & (s <= r.s_max)

    def contains_tol(self, p: PointXY, tol: float) -> bool:
        q = xy_to_ts(p)
        r = self.rect
        return (r.t_min - tol <= q.t <= r.t_max + tol
                and r.s_min - tol <= q.s <= r.s_max + tol)

    def area(self) -> float:
        return self.rect.length * self.rect.width

    def ts_bounds(self) -> tuple[float, float, float, float]:
        r = self.rect
        return r.t_min, r.t_max, r.s_min, r.s_max


class Strip(Region):
    """``[0, n]^2`` intersected with the band ``|y - x| <= d``.

    The half-width may be given either as an explicit ``half_width`` d or
    as an exponent ``gamma`` with d = n**gamma, so experiments can bypass
    the rounding inherent in n**gamma when they need exact widths.
    """

    def __init__(self, n: float, gamma: float | None = None,
                 half_width: float | None = None):
        if (gamma is None) == (half_width is None):
            raise ValueError("Strip needs exactly one of gamma or half_width")
        if gamma is not None:
            if not 0.0 < gamma < 2.0 / 3.0:
                raise ValueError("Strip exponent gamma must lie in (0, 2/3)")
            half_width = float(n) ** gamma
        if half_width < 0:
            raise ValueError("Strip half-width must be nonnegative")
        self.n = float(n)
        self.gamma = gamma
        self.half_width = float(half_width)

    def __repr__(self):
        return f"Strip(n={self.n}, gamma={self.gamma}, half_width={self.half_width})"

    def __eq__(self, other):
        return (isinstance(other, Strip) and self.n == other.n
                and self.half_width == other.half_width)

    def __hash__(self):
        return hash((self.n, self.half_width))

    def contains(self, p: PointXY) -> bool:
        return (0.0 <= p.x <= self.n and 0.0 <= p.y <= self.n
                and abs(p.y - p.x) <= self.half_width)

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return ((xs >= 0.0) & (xs <= self.n) & (ys >= 0.0) & (ys <= self.n)
                & (np.abs(ys - xs) <= self.half_width))

    def contains_tol(self, p: PointXY, tol: float) -> bool:
        return (-tol <= p.x <= self.n + tol and -tol <= p.y <= self.n + tol
                and abs(p.y - p.x) <= self.half_width + tol)

    def area(self) -> float:
        d = min(self.half_width, self.n)
        return self.n**2 - (self.n - d) ** 2

    def ts_bounds(self) -> tuple[float, float, float, float]:
        d = min(self.half_width, self.n)
        return 0.0, SQRT2 * self.n, -d / SQRT2, d / SQRT2


class ConvexPolygon(Region):
    """Convex polygon given by its Cartesian vertices.

    Vertices are normalized to counter-clockwise order at construction;
    non-convex input is rejected.
    """

    def __init__(self, vertices):
        vs = [(float(p.x), float(p.y)) if isinstance(p, PointXY) else (float(p[0]), float(p[1]))
              for p in vertices]
        if len(vs) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        arr = np.asarray(vs, dtype=np.float64)
        signed = _shoelace(arr)
        if signed < 0:
            arr = arr[::-1].copy()
            signed = -signed
        if signed <= 0:
            raise ValueError("polygon is degenerate")
        if not _is_convex(arr):
            raise ValueError("polygon is not convex")
        self.vertices = tuple(PointXY(x, y) for x, y in arr)
        self._arr = arr
        self._area = signed

    def __repr__(self):
        return f"ConvexPolygon({list(self.vertices)})"

    def contains(self, p: PointXY) -> bool:
        a = self._arr
        n = len(a)
        for i in range(n):
            x0, y0 = a[i]
            x1, y1 = a[(i + 1) % n]
            cross = (x1 - x0) * (p.y - y0) - (y1 - y0) * (p.x - x0)
            if cross < 0.0:
                return False
        return True

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        a = self._arr
        n = len(a)
        out = np.ones(xs.shape, dtype=bool)
        for i in range(n):
            x0, y0 = a[i]
            x1, y1 = a[(i + 1) % n]
            out &= (x1 - x0) * (ys - y0) - (y1 - y0) * (xs - x0) >= 0.0
        return out

    def contains_tol(self, p: PointXY, tol: float) -> bool:
        a = self._arr
        n = len(a)
        scale = float(np.max(np.abs(a))) + abs(p.x) + abs(p.y) + 1.0
        for i in range(n):
            x0, y0 = a[i]
            x1, y1 = a[(i + 1) % n]
            if (x1 - x0) * (p.y - y0) - (y1 - y0) * (p.x - x0) < -tol * scale:
                return False
        return True

    def area(self) -> float:
        return self._area

    def ts_bounds(self) -> tuple[float, float, float, float]:
        ts = [xy_to_ts(v) for v in self.vertices]
        return (min(c.t for c in ts), max(c.t for c in ts),
                min(c.s for c in ts), max(c.s for c in ts))


def _shoelace(arr: np.ndarray) -> float:
    x, y = arr[:, 0], arr[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _is_convex(arr: np.ndarray) -> bool:
    # CCW-oriented input; collinear runs allowed, right turns are not.
    n = len(arr)
    scale = float(np.max(np.abs(arr))) + 1.0
    tol = -1e-12 * scale * scale
    for i in range(n):
        ax, ay = arr[i]
        bx, by = arr[(i + 1) % n]
        cx, cy = arr[(i + 2) % n]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if cross < tol:
            return False
    return True


def region_contains(r: Region, p: PointXY) -> bool:
    """Set membership with closed boundaries."""
    return r.contains(p)


def region_area(r: Region) -> float:
    """Lebesgue area of the region."""
    return r.area()
