"""Replicate-parallel Monte Carlo drivers.

Each driver loops over replicates with ``prange``; replicate ``j`` of arm
``arm`` consumes the stream ``(arm << 32) | j`` of the experiment seed, and
writes only its own output slot, so results are bit-identical for any
thread count.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from ._kernels import (
    SQRT2,
    UNBOUNDED,
    chain_length,
    chain_length_masked,
    forward_lengths,
    backward_lengths,
    member_mask,
    valid_pairs_kernel,
    pairs_to_tents,
    upper_envelope,
    lower_envelope,
    clip_polyline,
    polyline_max_diff,
    polyline_abs_max,
    poisson_draw,
    rng_init,
    rng_unit,
    sample_axis_rect,
    sample_strip,
    sample_diag_rect,
)


@njit(cache=True, inline="always")
def _stream_of(arm, j):
    return (np.uint64(arm) << np.uint64(32)) | np.uint64(j)


@njit(cache=True, parallel=True)
def batch_rect_lengths(seed, arm, m, width, height):
    """Point-to-point chain lengths across the rectangle [0,w] x [0,h]."""
    out = np.empty(m, dtype=np.int64)
    for j in prange(m):
        xs, ys = sample_axis_rect(np.uint64(seed), _stream_of(arm, j),
                                  0.0, 0.0, width, height)
        out[j] = chain_length(ys)
    return out


@njit(cache=True)
def _seq_chain_length(st, n):
    # patience over n uniforms drawn on the fly; identical in law to the
    # chain length of n iid uniform points scanned in x-order
    cap = 256
    tails = np.empty(cap, dtype=np.float64)
    size = 0
    for _ in range(n):
        v = rng_unit(st)
        if size > 0 and v >= tails[size - 1]:
            j = size
        else:
            lo = 0
            hi = size
            while lo < hi:
                mid = (lo + hi) >> 1
                if tails[mid] > v:
                    hi = mid
                else:
                    lo = mid + 1
            j = lo
        if j == size:
            if size == cap:
                cap *= 2
                grown = np.empty(cap, dtype=np.float64)
                grown[:size] = tails[:size]
                tails = grown
            tails[size] = v
            size += 1
        else:
            tails[j] = v
    return size


@njit(cache=True, parallel=True)
def batch_area_lengths(seed, arm, m, area):
    """Point-to-point chain lengths across any axis rectangle of the given
    area.

    Only the area matters for axis rectangles: the y values of a uniform
    sample read in x-order form an iid uniform sequence, so x coordinates
    are never materialized. Used by the tail experiment, where the full
    2-d sampler would dominate the budget.
    """
    out = np.empty(m, dtype=np.int64)
    for j in prange(m):
        st = rng_init(np.uint64(seed), _stream_of(arm, j))
        n = poisson_draw(st, area)
        out[j] = _seq_chain_length(st, n)
    return out


@njit(cache=True, parallel=True)
def batch_strip_lengths(seed, arm, m, side, half_width):
    """Corner-to-corner chain lengths in the strip |y-x| <= d of [0,side]^2."""
    out = np.empty(m, dtype=np.int64)
    for j in prange(m):
        xs, ys = sample_strip(np.uint64(seed), _stream_of(arm, j), side, half_width)
        out[j] = chain_length(ys)
    return out


@njit(cache=True, parallel=True)
def batch_nested_strip_lengths(seed, arm, m, side, half_widths):
    """Chain lengths for nested strips evaluated on one shared square sample.

    Column k holds the length restricted to |y-x| <= half_widths[k]; the
    final column is the unrestricted length of the same sample.
    """
    nd = half_widths.size
    out = np.empty((m, nd + 1), dtype=np.int64)
    for j in prange(m):
        xs, ys = sample_axis_rect(np.uint64(seed), _stream_of(arm, j),
                                  0.0, 0.0, side, side)
        n = xs.size
        mask = np.empty(n, dtype=np.bool_)
        for k in range(nd):
            d = half_widths[k]
            for i in range(n):
                mask[i] = abs(ys[i] - xs[i]) <= d
            out[j, k] = chain_length_masked(ys, mask)
        out[j, nd] = chain_length(ys)
    return out


@njit(cache=True, parallel=True)
def batch_diag_lengths(seed, arm, m, length, width):
    """Free-endpoint chain lengths in a diagonal rectangle."""
    out = np.empty(m, dtype=np.int64)
    for j in prange(m):
        xs, ys, ts, ss = sample_diag_rect(np.uint64(seed), _stream_of(arm, j),
                                          0.0, 0.0, length, width)
        out[j] = chain_length(ys)
    return out


@njit(cache=True)
def _transversal_one(xs, ys, side, pair_cap):
    """(length, s_points, s_envelope) for the corner-to-corner query of a
    square sample; s_envelope is -1.0 when pair enumeration overflows."""
    n = xs.size
    mask = np.ones(n, dtype=np.bool_)
    fwd = np.empty(n, dtype=np.int32)
    bwd = np.empty(n, dtype=np.int32)
    total = forward_lengths(ys, mask, fwd)
    backward_lengths(ys, mask, bwd)
    member = member_mask(fwd, bwd, total)
    s_pts = 0.0
    for i in range(n):
        if member[i]:
            s = abs(ys[i] - xs[i]) / SQRT2
            if s > s_pts:
                s_pts = s
    pi, qi, status = valid_pairs_kernel(xs, ys, fwd, bwd, total, pair_cap)
    if status != 0:
        return total, s_pts, -1.0
    pts_t = np.empty(n, dtype=np.float64)
    pts_s = np.empty(n, dtype=np.float64)
    for i in range(n):
        pts_t[i] = (xs[i] + ys[i]) / SQRT2
        pts_s[i] = (ys[i] - xs[i]) / SQRT2
    end_t = SQRT2 * side
    t0, s0, t1, s1 = pairs_to_tents(pi, qi, pts_t, pts_s, 0.0, 0.0, end_t, 0.0)
    ub_t, ub_v = upper_envelope(t0, s0, t1, s1)
    lb_t, lb_v = lower_envelope(t0, s0, t1, s1)
    s_env = polyline_abs_max(ub_t, ub_v, 0.0)
    s_env2 = polyline_abs_max(lb_t, lb_v, 0.0)
    if s_env2 > s_env:
        s_env = s_env2
    return total, s_pts, s_env


@njit(cache=True, parallel=True)
def batch_transversal(seed, arm, m, side, pair_cap):
    lengths = np.empty(m, dtype=np.int64)
    s_pts = np.empty(m, dtype=np.float64)
    s_env = np.empty(m, dtype=np.float64)
    for j in prange(m):
        xs, ys = sample_axis_rect(np.uint64(seed), _stream_of(arm, j),
                                  0.0, 0.0, side, side)
        total, sp, se = _transversal_one(xs, ys, side, pair_cap)
        lengths[j] = total
        s_pts[j] = sp
        s_env[j] = se
    return lengths, s_pts, s_env


@njit(cache=True)
def _omega_one(xs, ys, ts, ss, length, width, pair_cap, eps):
    """Regeneration-event decision for one diagonal-rectangle sample.

    Returns (occurs, margin, witness_t, shared_member, status); status 1
    flags a pair-cap overflow.
    """
    n = xs.size
    mask_b = np.empty(n, dtype=np.bool_)
    mask_t = np.empty(n, dtype=np.bool_)
    for i in range(n):
        t = ts[i]
        s = ss[i]
        mask_b[i] = (t >= abs(s)) and (length - t >= abs(s))
        dt = s - width
        mask_t[i] = (t >= abs(dt)) and (length - t >= abs(dt))
    fwd = np.empty(n, dtype=np.int32)
    bwd = np.empty(n, dtype=np.int32)

    total_b = forward_lengths(ys, mask_b, fwd)
    backward_lengths(ys, mask_b, bwd)
    member_b = member_mask(fwd, bwd, total_b)
    pi, qi, st1 = valid_pairs_kernel(xs, ys, fwd, bwd, total_b, pair_cap)
    if st1 != 0:
        return False, 0.0, 0.0, False, 1
    t0, s0, t1, s1 = pairs_to_tents(pi, qi, ts, ss, 0.0, 0.0, length, 0.0)
    ub_t, ub_v = upper_envelope(t0, s0, t1, s1)
    ub_t, ub_v = clip_polyline(ub_t, ub_v, 0.0, width)

    total_t = forward_lengths(ys, mask_t, fwd)
    backward_lengths(ys, mask_t, bwd)
    member_t = member_mask(fwd, bwd, total_t)
    pi2, qi2, st2 = valid_pairs_kernel(xs, ys, fwd, bwd, total_t, pair_cap)
    if st2 != 0:
        return False, 0.0, 0.0, False, 1
    t0, s0, t1, s1 = pairs_to_tents(pi2, qi2, ts, ss, 0.0, width, length, width)
    lb_t, lb_v = lower_envelope(t0, s0, t1, s1)
    lb_t, lb_v = clip_polyline(lb_t, lb_v, 0.0, width)

    margin, margin_t = polyline_max_diff(ub_t, ub_v, lb_t, lb_v)
    shared = False
    for i in range(n):
        if member_b[i] and member_t[i]:
            shared = True
            break
    occurs = margin >= -eps
    return occurs, margin, margin_t, shared, 0


@njit(cache=True, parallel=True)
def batch_omega(seed, arm, m, length, width, pair_cap, eps):
    occurs = np.zeros(m, dtype=np.int8)
    margin = np.empty(m, dtype=np.float64)
    shared = np.zeros(m, dtype=np.int8)
    status = np.zeros(m, dtype=np.int8)
    counts = np.empty(m, dtype=np.int64)
    for j in prange(m):
        xs, ys, ts, ss = sample_diag_rect(np.uint64(seed), _stream_of(arm, j),
                                          0.0, 0.0, length, width)
        occ, mar, _, sh, st = _omega_one(xs, ys, ts, ss, length, width, pair_cap, eps)
        occurs[j] = 1 if occ else 0
        margin[j] = mar
        shared[j] = 1 if sh else 0
        status[j] = st
        counts[j] = xs.size
    return occurs, margin, shared, status, counts
