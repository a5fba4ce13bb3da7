import math

import numpy as np
import pytest

from liplab.chains import (
    ChainQuery,
    InvalidQueryError,
    build_skeleton,
    delta_spread,
    longest_chain,
    transversal_S,
)
from liplab.geometry import Diag, DiagRect, PointTS, PointXY, Strip, ts_to_xy
from liplab.sampling import PointSet, SeedSpec, sample_region

from oracles import (
    oracle_chain_length,
    oracle_delta_grid,
    oracle_member_set,
)

SQRT2 = math.sqrt(2.0)


def ts_points(pairs) -> PointSet:
    return PointSet.from_ts(np.array([p[0] for p in pairs], dtype=float),
                            np.array([p[1] for p in pairs], dtype=float))


def random_diag_instance(rng, k_max=12):
    ell = rng.uniform(2.0, 8.0)
    w = rng.uniform(1.0, 3.0)
    k = int(rng.integers(0, k_max + 1))
    ts = rng.uniform(0, ell, k)
    ss = rng.uniform(0, w, k)
    rect = DiagRect(0.0, 0.0, ell, w)
    # random endpoints on the boundary edges, the end inside the start's cone
    s_a = float(rng.uniform(0, w))
    s_b = float(rng.uniform(max(0.0, s_a - ell), min(w, s_a + ell)))
    return rect, ts_points(list(zip(ts, ss))), PointTS(0.0, s_a), PointTS(ell, s_b)


def test_longest_chain_total_order():
    ps = PointSet(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0, 3.0]))
    r = longest_chain(ChainQuery(ps))
    assert r.length == 3
    assert r.witness.tolist() == [0, 1, 2]


def test_longest_chain_antichain():
    ps = PointSet(np.array([1.0, 2.0, 3.0]), np.array([3.0, 2.0, 1.0]))
    assert longest_chain(ChainQuery(ps)).length == 1


def test_longest_chain_rect_example():
    # brute force confirms the chain {(1,0.5),(3,0.2)} of length 2
    rect = DiagRect(0, 0, 4, 2)
    pts = ts_points([(1, 0.5), (2, 1.8), (3, 0.2)])
    q = ChainQuery(pts, region=Diag(rect),
                   start=ts_to_xy(PointTS(0, 0)), end=ts_to_xy(PointTS(4, 0)))
    r = longest_chain(q)
    assert r.length == 2
    mask = q.feasible_mask()
    assert oracle_chain_length(pts.xs, pts.ys, mask) == 2


def test_invalid_endpoint_order_rejected():
    ps = PointSet(np.array([1.0]), np.array([1.0]))
    with pytest.raises(InvalidQueryError):
        ChainQuery(ps, start=PointXY(2, 2), end=PointXY(0, 0))
    with pytest.raises(InvalidQueryError):
        ChainQuery(ps, region=Diag(DiagRect(0, 0, 1, 1)), start=PointXY(-5, 0),
                   end=PointXY(0.5, 0.5))


def test_oracle_equivalence_random_instances():
    rng = np.random.default_rng(2024)
    for _ in range(250):
        rect, pts, a, b = random_diag_instance(rng)
        q = ChainQuery(pts, region=Diag(rect),
                       start=ts_to_xy(a), end=ts_to_xy(b))
        got = longest_chain(q)
        mask = q.feasible_mask()
        want = oracle_chain_length(pts.xs, pts.ys, mask)
        assert got.length == want
        # witness is a valid feasible chain of that length
        w = got.witness
        assert w.size == got.length
        for i, j in zip(w[:-1], w[1:]):
            assert pts.xs[i] <= pts.xs[j] and pts.ys[i] <= pts.ys[j]
        assert all(mask[i] for i in w)


def test_endpoints_not_counted_and_coinciding_points_excluded():
    a, b = PointTS(0, 0), PointTS(4, 0)
    pts = ts_points([(0, 0), (2, 0.5), (4, 0)])  # duplicates of both endpoints
    q = ChainQuery(pts, start=ts_to_xy(a), end=ts_to_xy(b))
    assert longest_chain(q).length == 1


def test_restriction_monotonicity():
    rng = np.random.default_rng(5)
    n = 60.0
    square = sample_region(Strip(n, half_width=n), SeedSpec(77, 0))
    lengths = []
    for d in (2.0, 6.0, 20.0, 60.0):
        q = ChainQuery(square, region=Strip(n, half_width=d),
                       start=PointXY(0, 0), end=PointXY(n, n))
        lengths.append(longest_chain(q).length)
    assert lengths == sorted(lengths)
    free = longest_chain(ChainQuery(square)).length
    assert lengths[-1] <= free
    # adding a point never decreases the length
    q0 = ChainQuery(square)
    base = longest_chain(q0).length
    mid = PointSet(np.append(square.xs, 30.0), np.append(square.ys, 30.0))
    assert longest_chain(ChainQuery(mid)).length >= base


def test_superadditivity_through_midpoint():
    rng = np.random.default_rng(9)
    for _ in range(40):
        pts = ts_points(list(zip(rng.uniform(0, 10, 25), rng.uniform(-3, 3, 25))))
        a, c = PointTS(0, 0), PointTS(10, 0)
        mid_t = rng.uniform(3, 7)
        mid = PointTS(mid_t, rng.uniform(-1, 1))
        whole = longest_chain(ChainQuery(pts, start=ts_to_xy(a), end=ts_to_xy(c))).length
        first = longest_chain(ChainQuery(pts, start=ts_to_xy(a), end=ts_to_xy(mid))).length
        second = longest_chain(ChainQuery(pts, start=ts_to_xy(mid), end=ts_to_xy(c))).length
        assert whole >= first + second


def test_coordinate_invariance_under_area_preserving_scaling():
    rng = np.random.default_rng(11)
    for lam in (0.5, 2.0, 3.7):
        xs = rng.uniform(0, 50, 300)
        ys = rng.uniform(0, 50, 300)
        base = longest_chain(ChainQuery(PointSet(xs, ys))).length
        scaled = longest_chain(ChainQuery(PointSet(xs * lam, ys / lam))).length
        assert scaled == base


def test_skeleton_examples():
    chain3 = PointSet(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0, 3.0]))
    sk = build_skeleton(ChainQuery(chain3))
    assert sk.forward.tolist() == [1, 2, 3]
    assert sk.backward.tolist() == [3, 2, 1]
    assert sk.member.tolist() == [True, True, True]
    assert sk.total == 3

    anti = PointSet(np.array([1.0, 2.0, 3.0]), np.array([3.0, 2.0, 1.0]))
    sk = build_skeleton(ChainQuery(anti))
    assert sk.forward.tolist() == [1, 1, 1]
    assert sk.backward.tolist() == [1, 1, 1]
    assert sk.member.tolist() == [True, True, True]
    assert sk.total == 1


def test_skeleton_member_set_matches_enumeration():
    rng = np.random.default_rng(33)
    for _ in range(120):
        rect, pts, a, b = random_diag_instance(rng, k_max=10)
        q = ChainQuery(pts, region=Diag(rect),
                       start=ts_to_xy(a), end=ts_to_xy(b))
        sk = build_skeleton(q)
        mask = q.feasible_mask()
        want = oracle_member_set(pts.xs, pts.ys, mask)
        got = set(np.flatnonzero(sk.member).tolist())
        assert got == want
        # witness points are always members; max forward equals total
        if sk.total > 0:
            assert int(sk.forward.max()) == sk.total
            w = longest_chain(q).witness
            assert all(sk.member[i] for i in w)


def test_transversal_single_point():
    q = ChainQuery(ts_points([(2, 1)]),
                   start=ts_to_xy(PointTS(0, 0)), end=ts_to_xy(PointTS(4, 0)))
    rep = transversal_S(q)
    assert rep.s_points == pytest.approx(1.0, abs=1e-12)


def test_transversal_empty():
    empty = PointSet(np.array([]), np.array([]))
    q = ChainQuery(empty, start=ts_to_xy(PointTS(0, 0)), end=ts_to_xy(PointTS(4, 0)))
    rep = transversal_S(q)
    assert rep.s_points == 0.0
    assert rep.s_envelope == pytest.approx(2.0, abs=1e-12)


def test_transversal_envelope_dominates_points():
    rng = np.random.default_rng(44)
    for _ in range(60):
        k = int(rng.integers(0, 20))
        pts = ts_points(list(zip(rng.uniform(0, 12, k), rng.uniform(-4, 4, k))))
        q = ChainQuery(pts, start=ts_to_xy(PointTS(0, 0)),
                       end=ts_to_xy(PointTS(12, 0)))
        rep = transversal_S(q)
        assert rep.s_envelope >= rep.s_points - 1e-12


def test_transversal_needs_aligned_endpoints():
    empty = PointSet(np.array([]), np.array([]))
    with pytest.raises(InvalidQueryError):
        transversal_S(ChainQuery(empty, start=ts_to_xy(PointTS(0, 0)),
                                 end=ts_to_xy(PointTS(4, 2))))
    with pytest.raises(InvalidQueryError):
        transversal_S(ChainQuery(empty, start=ts_to_xy(PointTS(0, 0))))


def test_delta_spread_examples():
    empty = PointSet(np.array([]), np.array([]))
    assert delta_spread(DiagRect(0, 0, 4, 1), empty) == 0
    # single point reachable from every boundary pair
    assert delta_spread(DiagRect(0, 0, 4, 1), ts_points([(2, 0.5)])) == 0
    # corner point reachable only from high left-boundary points
    assert delta_spread(DiagRect(0, 0, 2, 2), ts_points([(0.5, 1.9)])) == 1


def test_delta_spread_against_grid_oracle():
    rng = np.random.default_rng(55)
    for _ in range(40):
        ell = rng.uniform(2, 5)
        w = rng.uniform(1, 3)
        k = int(rng.integers(0, 9))
        ts = rng.uniform(0, ell, k)
        ss = rng.uniform(0, w, k)
        rect = DiagRect(0.0, 0.0, ell, w)
        got = delta_spread(rect, ts_points(list(zip(ts, ss))))
        want = oracle_delta_grid(ts, ss, 0.0, ell, 0.0, w, mesh=251)
        assert got == want, (ts, ss, ell, w)
