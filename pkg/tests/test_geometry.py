import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liplab.geometry import (
    AxisRect,
    AxisSquare,
    ConvexPolygon,
    Diag,
    DiagRect,
    PointTS,
    PointXY,
    Strip,
    dominates,
    dominates_ts,
    region_area,
    region_contains,
    ts_to_xy,
    xy_to_ts,
)

SQRT2 = math.sqrt(2.0)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_xy_to_ts_known_values():
    p = xy_to_ts(PointXY(SQRT2, 0.0))
    assert p.t == pytest.approx(1.0, abs=1e-15)
    assert p.s == pytest.approx(-1.0, abs=1e-15)
    assert xy_to_ts(PointXY(0.0, 0.0)) == PointTS(0.0, 0.0)
    q = xy_to_ts(PointXY(1.0, 1.0))
    assert q.t == pytest.approx(SQRT2, abs=1e-15)
    assert q.s == 0.0


def test_ts_to_xy_known_values():
    p = ts_to_xy(PointTS(1.0, -1.0))
    assert p.x == pytest.approx(SQRT2, abs=1e-15)
    assert p.y == pytest.approx(0.0, abs=1e-15)
    assert ts_to_xy(PointTS(0.0, 0.0)) == PointXY(0.0, 0.0)


def test_round_trip_bulk():
    rng = np.random.default_rng(1)
    xs = rng.uniform(-1e6, 1e6, 1_000_000)
    ys = rng.uniform(-1e6, 1e6, 1_000_000)
    t = (xs + ys) / SQRT2
    s = (ys - xs) / SQRT2
    x2 = (t - s) / SQRT2
    y2 = (t + s) / SQRT2
    scale = 1.0 + np.hypot(xs, ys)
    assert np.all(np.abs(x2 - xs) <= 1e-9 * scale)
    assert np.all(np.abs(y2 - ys) <= 1e-9 * scale)


@given(finite, finite)
def test_round_trip_scalar(x, y):
    p = PointXY(x, y)
    q = ts_to_xy(xy_to_ts(p))
    scale = 1.0 + math.hypot(x, y)
    assert abs(q.x - x) <= 1e-9 * scale
    assert abs(q.y - y) <= 1e-9 * scale


def test_dominates_examples():
    assert dominates(PointXY(1, 1), PointXY(2, 3))
    assert not dominates(PointXY(2, 3), PointXY(1, 1))
    # cone condition in diagonal coordinates
    assert dominates_ts(PointTS(0, 0), PointTS(2, 1))
    assert not dominates_ts(PointTS(0, 0), PointTS(1, 2))
    # weak: equal points dominate each other
    assert dominates(PointXY(1, 1), PointXY(1, 1))


@given(finite, finite, finite, finite)
def test_dominance_transform_consistency(x1, y1, x2, y2):
    p, q = PointXY(x1, y1), PointXY(x2, y2)
    a, b = xy_to_ts(p), xy_to_ts(q)
    # skip the measure-zero boundary where rounding decides
    margin = min(abs(q.x - p.x), abs(q.y - p.y))
    if margin <= 1e-6 * (1.0 + abs(x1) + abs(x2) + abs(y1) + abs(y2)):
        return
    assert dominates(p, q) == (b.t >= a.t and abs(b.s - a.s) <= b.t - a.t)


def test_region_contains_examples():
    strip = Strip(10, half_width=5)
    assert region_contains(strip, PointXY(5, 5))
    assert not region_contains(strip, PointXY(0, 6))
    rect = Diag(DiagRect(0, 0, 4, 2))
    assert region_contains(rect, ts_to_xy(PointTS(4, 2)))  # corner closed
    assert not region_contains(rect, ts_to_xy(PointTS(4.01, 2)))


def test_region_area_examples():
    assert region_area(Diag(DiagRect(0, 0, 4, 2))) == pytest.approx(8.0)
    assert region_area(Strip(10, half_width=10)) == pytest.approx(100.0)
    assert region_area(Strip(10, half_width=5)) == pytest.approx(75.0)


@pytest.mark.parametrize("n,d", [(10, 5), (10, 10), (100, 3), (64, 64**0.3)])
def test_strip_area_matches_midpoint_integration(n, d):
    strip = Strip(n, half_width=d)
    cells = 400
    h = n / cells
    xs = (np.arange(cells) + 0.5) * h
    width_at = np.minimum(n, xs + d) - np.maximum(0.0, xs - d)
    numeric = float(np.sum(np.clip(width_at, 0.0, None)) * h)
    assert strip.area() == pytest.approx(numeric, rel=1e-3)


def test_strip_closed_formula():
    for n, d in [(10, 5), (100, 1), (7, 7)]:
        assert Strip(n, half_width=d).area() == pytest.approx(n**2 - (n - d) ** 2)


def test_strip_gamma_resolves_half_width():
    s = Strip(100, gamma=0.5)
    assert s.half_width == pytest.approx(10.0)
    with pytest.raises(ValueError):
        Strip(100, gamma=0.7)
    with pytest.raises(ValueError):
        Strip(100)
    with pytest.raises(ValueError):
        Strip(100, gamma=0.5, half_width=3.0)


def test_axis_square_and_rect():
    sq = AxisSquare(10)
    assert sq.area() == 100
    assert sq.contains(PointXY(10, 10)) and not sq.contains(PointXY(10.1, 0))
    with pytest.raises(ValueError):
        AxisRect(1, 0, 0, 1)


def test_diag_rect_validation():
    with pytest.raises(ValueError):
        DiagRect(0, 0, 0, 1)
    with pytest.raises(ValueError):
        DiagRect(0, 0, 1, -1)


def test_polygon_area_contains_and_convexity():
    tri = ConvexPolygon([PointXY(0, 0), PointXY(2, 0), PointXY(0, 2)])
    assert tri.area() == pytest.approx(2.0)
    assert tri.contains(PointXY(0.5, 0.5))
    assert tri.contains(PointXY(1, 1))  # hypotenuse closed
    assert not tri.contains(PointXY(1.2, 1.2))
    # clockwise input is normalized
    tri2 = ConvexPolygon([PointXY(0, 0), PointXY(0, 2), PointXY(2, 0)])
    assert tri2.area() == pytest.approx(2.0)
    # non-convex rejected at construction
    with pytest.raises(ValueError):
        ConvexPolygon([PointXY(0, 0), PointXY(2, 0), PointXY(0.1, 0.1),
                       PointXY(0, 2)])
    with pytest.raises(ValueError):
        ConvexPolygon([PointXY(0, 0), PointXY(1, 1)])
