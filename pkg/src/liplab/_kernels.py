"""Numba kernels: counter-seeded RNG, exact Poisson sampling, region
samplers, patience passes, maximizer skeletons, tent envelopes.

Everything here is deterministic given a ``(seed, stream)`` pair and free
of global state, so kernels may run concurrently on any number of threads.

RNG scheme (documented contract, also in the README): a SplitMix64
generator whose initial state and per-stream increment are derived from
``(seed, stream)`` with the SplitMix64 avalanche finalizer ``mix64``::

    state0    = mix64(mix64(seed + PHI) ^ (stream + SALT))
    increment = mix64(stream + PHI) | 1
    next()    : state += increment; output mix64(state)

``PHI = 0x9E3779B97F4A7C15`` and ``SALT = 0x6A09E667F3BCC909``. Uniform
doubles take the top 53 bits of the output.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

PHI = np.uint64(0x9E3779B97F4A7C15)
SALT = np.uint64(0x6A09E667F3BCC909)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)

INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53

SQRT2 = math.sqrt(2.0)

# Poisson sampling switches from inversion to transformed rejection here.
POISSON_INVERSION_CUTOFF = 30.0

# Abort threshold for maximizer-pair enumeration on pathological instances.
DEFAULT_PAIR_CAP = 10_000_000

# Envelope margins within this slack of zero count as touching.
OMEGA_EPS_DEFAULT = 1e-9

# Large finite stand-in for an unbounded envelope clip.
UNBOUNDED = 1e18


# ---------------------------------------------------------------------------
# RNG
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def rng_init(seed, stream):
    """State vector [state, increment] for the (seed, stream) pair."""
    st = np.empty(2, dtype=np.uint64)
    st[0] = _mix64(_mix64(seed + PHI) ^ (stream + SALT))
    st[1] = _mix64(stream + PHI) | _ONE
    return st


@njit(cache=True, inline="always")
def rng_next(st):
    st[0] = st[0] + st[1]
    return _mix64(st[0])


@njit(cache=True, inline="always")
def rng_unit(st):
    """Uniform double in [0, 1)."""
    return float(rng_next(st) >> np.uint64(11)) * INV_2_53


@njit(cache=True, inline="always")
def rng_unit_open(st):
    """Uniform double in (0, 1); safe for logarithms."""
    return (float(rng_next(st) >> np.uint64(11)) + 0.5) * INV_2_53


@njit(cache=True, inline="always")
def rng_exponential(st):
    return -math.log(rng_unit_open(st))


# ---------------------------------------------------------------------------
# Exact Poisson sampling
# ---------------------------------------------------------------------------

@njit(cache=True)
def poisson_draw(st, mean):
    """Exact Poisson(mean) draw.

    Inversion by unscaled products for small means; Hormann's PTRS
    transformed rejection for large means. Both are exact samplers.
    """
    if mean <= 0.0:
        return 0
    if mean < POISSON_INVERSION_CUTOFF:
        limit = math.exp(-mean)
        k = 0
        prod = rng_unit_open(st)
        while prod > limit:
            k += 1
            prod *= rng_unit_open(st)
        return k
    # PTRS (transformed rejection with squeeze), exact for mean >= 10.
    smu = math.sqrt(mean)
    b = 0.931 + 2.53 * smu
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_mean = math.log(mean)
    while True:
        u = rng_unit_open(st) - 0.5
        v = rng_unit_open(st)
        us = 0.5 - abs(u)
        k = int(math.floor((2.0 * a / us + b) * u + mean + 0.43))
        if us >= 0.07 and v <= v_r:
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        lhs = math.log(v * inv_alpha / (a / (us * us) + b))
        if lhs <= k * log_mean - mean - math.lgamma(k + 1.0):
            return k


# ---------------------------------------------------------------------------
# Sorting helpers
# ---------------------------------------------------------------------------

@njit(cache=True)
def _fix_lex_ties(xs, ys):
    # Insertion-sort y within runs of exactly equal x (measure-zero event).
    n = xs.size
    i = 0
    while i < n - 1:
        if xs[i + 1] == xs[i]:
            j = i + 1
            while j < n and xs[j] == xs[i]:
                j += 1
            for a in range(i + 1, j):
                v = ys[a]
                b = a - 1
                while b >= i and ys[b] > v:
                    ys[b + 1] = ys[b]
                    b -= 1
                ys[b + 1] = v
            i = j
        else:
            i += 1


@njit(cache=True)
def _dedup_sorted(xs, ys):
    """Drop exact duplicate points from lexicographically sorted arrays."""
    n = xs.size
    if n == 0:
        return xs, ys
    keep = 1
    for i in range(1, n):
        if xs[i] == xs[keep - 1] and ys[i] == ys[keep - 1]:
            continue
        xs[keep] = xs[i]
        ys[keep] = ys[i]
        keep += 1
    if keep == n:
        return xs, ys
    return xs[:keep].copy(), ys[:keep].copy()


@njit(cache=True)
def _lex_sort(xs, ys):
    order = np.argsort(xs)
    xs2 = xs[order]
    ys2 = ys[order]
    _fix_lex_ties(xs2, ys2)
    return _dedup_sorted(xs2, ys2)


# ---------------------------------------------------------------------------
# Region samplers
# ---------------------------------------------------------------------------

@njit(cache=True)
def sample_axis_rect(seed, stream, x0, y0, x1, y1):
    """Poisson sample of [x0,x1] x [y0,y1], returned sorted by x.

    The sorted x coordinates are generated directly as normalized
    cumulative sums of unit exponentials (the order-statistics
    representation of sorted iid uniforms), which avoids an O(n log n)
    sort on the hot path. y coordinates are iid uniform.
    """
    st = rng_init(seed, stream)
    area = (x1 - x0) * (y1 - y0)
    n = poisson_draw(st, area)
    xs = np.empty(n, dtype=np.float64)
    ys = np.empty(n, dtype=np.float64)
    if n == 0:
        return xs, ys
    acc = 0.0
    for i in range(n):
        acc += rng_exponential(st)
        xs[i] = acc
    acc += rng_exponential(st)
    scale = (x1 - x0) / acc
    for i in range(n):
        xs[i] = x0 + xs[i] * scale
    h = y1 - y0
    for i in range(n):
        ys[i] = y0 + rng_unit(st) * h
    _fix_lex_ties(xs, ys)
    return _dedup_sorted(xs, ys)


@njit(cache=True)
def sample_strip(seed, stream, side, half_width):
    """Poisson sample of [0,side]^2 intersected with |y-x| <= half_width.

    Points are drawn by per-point rejection from the diagonal bounding
    rectangle of the strip; acceptance probability is 1 - d/(2*side) >= 1/2.
    """
    st = rng_init(seed, stream)
    d = min(half_width, side)
    area = side * side - (side - d) * (side - d)
    n = poisson_draw(st, area)
    xs = np.empty(n, dtype=np.float64)
    ys = np.empty(n, dtype=np.float64)
    if n == 0 or area <= 0.0:
        return xs[:0], ys[:0]
    t_hi = SQRT2 * side
    s_hw = d / SQRT2
    for i in range(n):
        while True:
            t = rng_unit(st) * t_hi
            s = (2.0 * rng_unit(st) - 1.0) * s_hw
            x = (t - s) / SQRT2
            y = (t + s) / SQRT2
            if 0.0 <= x <= side and 0.0 <= y <= side:
                xs[i] = x
                ys[i] = y
                break
    return _lex_sort(xs, ys)


@njit(cache=True)
def sample_diag_rect(seed, stream, t_min, s_min, length, width):
    """Poisson sample of a diagonal rectangle.

    Returns (xs, ys, ts, ss) sorted lexicographically by (x, y); the exact
    sampled diagonal coordinates ride along to avoid rotation round-off in
    cone tests.
    """
    st = rng_init(seed, stream)
    n = poisson_draw(st, length * width)
    ts = np.empty(n, dtype=np.float64)
    ss = np.empty(n, dtype=np.float64)
    xs = np.empty(n, dtype=np.float64)
    ys = np.empty(n, dtype=np.float64)
    for i in range(n):
        t = t_min + rng_unit(st) * length
        s = s_min + rng_unit(st) * width
        ts[i] = t
        ss[i] = s
        xs[i] = (t - s) / SQRT2
        ys[i] = (t + s) / SQRT2
    order = np.argsort(xs)
    xs2 = xs[order]
    ys2 = ys[order]
    ts2 = ts[order]
    ss2 = ss[order]
    _fix_lex_ties(xs2, ys2)
    # duplicate removal: measure zero, flagged rather than repaired here
    return xs2, ys2, ts2, ss2


@njit(cache=True)
def sample_polygon(seed, stream, vx, vy, area, t_lo, t_hi, s_lo, s_hi):
    """Poisson sample of a convex CCW polygon by rejection from its
    diagonal-coordinate bounding rectangle."""
    st = rng_init(seed, stream)
    n = poisson_draw(st, area)
    xs = np.empty(n, dtype=np.float64)
    ys = np.empty(n, dtype=np.float64)
    if n == 0:
        return xs, ys
    m = vx.size
    for i in range(n):
        while True:
            t = t_lo + rng_unit(st) * (t_hi - t_lo)
            s = s_lo + rng_unit(st) * (s_hi - s_lo)
            x = (t - s) / SQRT2
            y = (t + s) / SQRT2
            inside = True
            for j in range(m):
                j2 = j + 1
                if j2 == m:
                    j2 = 0
                cross = (vx[j2] - vx[j]) * (y - vy[j]) - (vy[j2] - vy[j]) * (x - vx[j])
                if cross < 0.0:
                    inside = False
                    break
            if inside:
                xs[i] = x
                ys[i] = y
                break
    return _lex_sort(xs, ys)


# ---------------------------------------------------------------------------
# Patience passes (weak dominance = longest non-decreasing y subsequence
# over points sorted lexicographically by (x, y))
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _upper_bound(tails, size, v):
    # first index j in [0, size) with tails[j] > v
    lo = 0
    hi = size
    while lo < hi:
        mid = (lo + hi) >> 1
        if tails[mid] > v:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True)
def chain_length_masked(ys, mask):
    n = ys.size
    cap = 256
    tails = np.empty(cap, dtype=np.float64)
    size = 0
    for i in range(n):
        if not mask[i]:
            continue
        v = ys[i]
        if size > 0 and v >= tails[size - 1]:
            j = size
        else:
            j = _upper_bound(tails, size, v)
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


@njit(cache=True)
def chain_length(ys):
    n = ys.size
    cap = 256
    tails = np.empty(cap, dtype=np.float64)
    size = 0
    for i in range(n):
        v = ys[i]
        if size > 0 and v >= tails[size - 1]:
            j = size
        else:
            j = _upper_bound(tails, size, v)
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


@njit(cache=True)
def forward_lengths(ys, mask, out):
    """out[i] = longest feasible chain ending at point i (inclusive).

    The patience insertion position of y_i is exactly that length; masked
    points get 0. Returns the overall chain length.
    """
    n = ys.size
    cap = 256
    tails = np.empty(cap, dtype=np.float64)
    size = 0
    for i in range(n):
        if not mask[i]:
            out[i] = 0
            continue
        v = ys[i]
        if size > 0 and v >= tails[size - 1]:
            j = size
        else:
            j = _upper_bound(tails, size, v)
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
        out[i] = j + 1
    return size


@njit(cache=True)
def backward_lengths(ys, mask, out):
    """out[i] = longest feasible chain starting at point i (inclusive).

    Mirror of the forward pass: scan in reverse lexicographic order and
    negate y so weak dominance keeps its orientation.
    """
    n = ys.size
    cap = 256
    tails = np.empty(cap, dtype=np.float64)
    size = 0
    for i in range(n - 1, -1, -1):
        if not mask[i]:
            out[i] = 0
            continue
        v = -ys[i]
        if size > 0 and v >= tails[size - 1]:
            j = size
        else:
            j = _upper_bound(tails, size, v)
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
        out[i] = j + 1
    return size


@njit(cache=True)
def chain_witness(ys, mask):
    """Indices (into the lex order) of one maximal chain, via patience
    back-pointers."""
    n = ys.size
    cap = 256
    tails = np.empty(cap, dtype=np.float64)
    tops = np.empty(cap, dtype=np.int64)
    prev = np.full(n, -1, dtype=np.int64)
    size = 0
    for i in range(n):
        if not mask[i]:
            continue
        v = ys[i]
        if size > 0 and v >= tails[size - 1]:
            j = size
        else:
            j = _upper_bound(tails, size, v)
        if j == size:
            if size == cap:
                cap *= 2
                grown = np.empty(cap, dtype=np.float64)
                grown[:size] = tails[:size]
                tails = grown
                grown_t = np.empty(cap, dtype=np.int64)
                grown_t[:size] = tops[:size]
                tops = grown_t
            size += 1
        tails[j] = v
        tops[j] = i
        if j > 0:
            prev[i] = tops[j - 1]
    out = np.empty(size, dtype=np.int64)
    if size == 0:
        return out
    k = tops[size - 1]
    for pos in range(size - 1, -1, -1):
        out[pos] = k
        k = prev[k]
    return out


# ---------------------------------------------------------------------------
# Binary indexed tree with prefix-max queries (order-statistic tree over
# y-ranks); used by the public skeleton builder and the boundary-spread
# enumeration.
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def bit_update_max(tree, idx, val):
    i = idx + 1
    n = tree.size - 1
    while i <= n:
        if tree[i] < val:
            tree[i] = val
        i += i & (-i)


@njit(cache=True, inline="always")
def bit_prefix_max(tree, idx):
    i = idx + 1
    best = 0
    while i > 0:
        if tree[i] > best:
            best = tree[i]
        i -= i & (-i)
    return best


@njit(cache=True, inline="always")
def _lower_bound_arr(arr, v):
    lo = 0
    hi = arr.size
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, inline="always")
def _upper_bound_arr(arr, v):
    lo = 0
    hi = arr.size
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] <= v:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def skeleton_bit(ys, mask, fwd, bwd):
    """Forward/backward chain lengths via prefix-max Fenwick queries over
    y-ranks; exact y-ties share a rank so weak dominance includes them."""
    n = ys.size
    nf = 0
    for i in range(n):
        if mask[i]:
            nf += 1
    sorted_y = np.empty(nf, dtype=np.float64)
    j = 0
    for i in range(n):
        if mask[i]:
            sorted_y[j] = ys[i]
            j += 1
    sorted_y.sort()
    k = sorted_y.size
    tree = np.zeros(k + 1, dtype=np.int64)
    total = 0
    for i in range(n):
        if not mask[i]:
            fwd[i] = 0
            continue
        hi_rank = _upper_bound_arr(sorted_y, ys[i]) - 1
        f = 1 + bit_prefix_max(tree, hi_rank)
        fwd[i] = f
        if f > total:
            total = f
        bit_update_max(tree, _lower_bound_arr(sorted_y, ys[i]), f)
    for i in range(k + 1):
        tree[i] = 0
    # backward pass over mirrored ranks: suffix max over y' >= y_i
    for i in range(n - 1, -1, -1):
        if not mask[i]:
            bwd[i] = 0
            continue
        lo_rank = _lower_bound_arr(sorted_y, ys[i])
        g = 1 + bit_prefix_max(tree, k - 1 - lo_rank)
        bwd[i] = g
        up_rank = _upper_bound_arr(sorted_y, ys[i]) - 1
        bit_update_max(tree, k - 1 - up_rank, g)
    return total


# ---------------------------------------------------------------------------
# Valid consecutive pairs of the maximizer family
# ---------------------------------------------------------------------------

START_IDX = -1
END_IDX = -2


@njit(cache=True)
def valid_pairs_kernel(xs, ys, fwd, bwd, total, cap):
    """All pairs of points consecutive on some maximizer.

    A pair (p, q) qualifies iff both are members (fwd + bwd - 1 == total),
    fwd(q) == fwd(p) + 1 and p weakly dominates into q. Virtual endpoints
    join as levels 0 and total+1 with indices START_IDX / END_IDX.

    Returns (p_idx, q_idx, status); status is 1 on cap overflow, else 0.
    """
    n = xs.size
    if total == 0:
        pi = np.empty(1, dtype=np.int64)
        qi = np.empty(1, dtype=np.int64)
        pi[0] = START_IDX
        qi[0] = END_IDX
        return pi, qi, 0
    member = np.zeros(n, dtype=np.bool_)
    level_count = np.zeros(total + 1, dtype=np.int64)
    for i in range(n):
        if fwd[i] > 0 and fwd[i] + bwd[i] - 1 == total:
            member[i] = True
            level_count[fwd[i]] += 1
    # bucket members by level, preserving lex order
    offsets = np.zeros(total + 2, dtype=np.int64)
    for lv in range(1, total + 1):
        offsets[lv + 1] = offsets[lv] + level_count[lv]
    fill = offsets[:-1].copy()
    by_level = np.empty(offsets[total + 1], dtype=np.int64)
    for i in range(n):
        if member[i]:
            lv = fwd[i]
            by_level[fill[lv]] = i
            fill[lv] += 1
    # count pass
    n_pairs = level_count[1] + level_count[total]
    for lv in range(1, total):
        a0, a1 = offsets[lv], offsets[lv + 1]
        b0, b1 = offsets[lv + 1], offsets[lv + 2]
        for a in range(a0, a1):
            p = by_level[a]
            for b in range(b0, b1):
                q = by_level[b]
                if xs[p] <= xs[q] and ys[p] <= ys[q]:
                    n_pairs += 1
        if n_pairs > cap:
            return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), 1)
    pi = np.empty(n_pairs, dtype=np.int64)
    qi = np.empty(n_pairs, dtype=np.int64)
    w = 0
    for a in range(offsets[1], offsets[2]):
        pi[w] = START_IDX
        qi[w] = by_level[a]
        w += 1
    for lv in range(1, total):
        a0, a1 = offsets[lv], offsets[lv + 1]
        b0, b1 = offsets[lv + 1], offsets[lv + 2]
        for a in range(a0, a1):
            p = by_level[a]
            for b in range(b0, b1):
                q = by_level[b]
                if xs[p] <= xs[q] and ys[p] <= ys[q]:
                    pi[w] = p
                    qi[w] = q
                    w += 1
    for a in range(offsets[total], offsets[total + 1]):
        pi[w] = by_level[a]
        qi[w] = END_IDX
        w += 1
    return pi, qi, 0


@njit(cache=True)
def member_mask(fwd, bwd, total):
    n = fwd.size
    out = np.zeros(n, dtype=np.bool_)
    if total == 0:
        return out
    for i in range(n):
        if fwd[i] > 0 and fwd[i] + bwd[i] - 1 == total:
            out[i] = True
    return out


# ---------------------------------------------------------------------------
# Tent envelopes
# ---------------------------------------------------------------------------
#
# For a consecutive pair p -> q the reachable band at time t in [t_p, t_q]
# is the tent  [max(s_p-(t-t_p), s_q-(t_q-t)), min(s_p+(t-t_p), s_q+(t_q-t))].
# The upper envelope over all pairs is computed with a sweep: a tent's
# upper boundary is the line A+t (A = s_p - t_p) until its apex
# t = (B-A)/2 (B = s_q + t_q), then B-t. Max-heaps with lazy deletion
# track the active rising/falling lines; envelope vertices are the event
# points plus the rising/falling crossings inside each event gap.


@njit(cache=True, inline="always")
def _heap_push(vals, ids, size, v, i):
    vals[size] = v
    ids[size] = i
    c = size
    while c > 0:
        par = (c - 1) >> 1
        if vals[par] < vals[c]:
            vals[par], vals[c] = vals[c], vals[par]
            ids[par], ids[c] = ids[c], ids[par]
            c = par
        else:
            break
    return size + 1


@njit(cache=True, inline="always")
def _heap_pop(vals, ids, size):
    size -= 1
    vals[0] = vals[size]
    ids[0] = ids[size]
    c = 0
    while True:
        l = 2 * c + 1
        r = l + 1
        big = c
        if l < size and vals[l] > vals[big]:
            big = l
        if r < size and vals[r] > vals[big]:
            big = r
        if big == c:
            break
        vals[big], vals[c] = vals[c], vals[big]
        ids[big], ids[c] = ids[c], ids[big]
        c = big
    return size


@njit(cache=True)
def upper_envelope(t0, s0, t1, s1):
    """Upper envelope polyline of slope +-1 tents. Returns (bt, bv).

    Pairs must satisfy t1 >= t0 and |s1-s0| <= t1-t0; the envelope is
    defined on [min t0, max t1] wherever at least one tent is active.
    """
    p = t0.size
    a_line = np.empty(p, dtype=np.float64)
    b_line = np.empty(p, dtype=np.float64)
    apex = np.empty(p, dtype=np.float64)
    for i in range(p):
        a_line[i] = s0[i] - t0[i]
        b_line[i] = s1[i] + t1[i]
        ap = 0.5 * (b_line[i] - a_line[i])
        # clamp against rotation round-off so event order stays consistent
        if ap < t0[i]:
            ap = t0[i]
        elif ap > t1[i]:
            ap = t1[i]
        apex[i] = ap
    # events: type 0 = rising insert at t0, 1 = apex, 2 = falling remove at t1
    ev_t = np.empty(3 * p, dtype=np.float64)
    ev_type = np.empty(3 * p, dtype=np.int64)
    ev_id = np.empty(3 * p, dtype=np.int64)
    for i in range(p):
        ev_t[3 * i] = t0[i]
        ev_type[3 * i] = 0
        ev_id[3 * i] = i
        ev_t[3 * i + 1] = apex[i]
        ev_type[3 * i + 1] = 1
        ev_id[3 * i + 1] = i
        ev_t[3 * i + 2] = t1[i]
        ev_type[3 * i + 2] = 2
        ev_id[3 * i + 2] = i
    order = np.argsort(ev_t)

    heap_a_v = np.empty(p, dtype=np.float64)
    heap_a_i = np.empty(p, dtype=np.int64)
    heap_b_v = np.empty(p, dtype=np.float64)
    heap_b_i = np.empty(p, dtype=np.int64)
    alive_a = np.zeros(p, dtype=np.bool_)
    alive_b = np.zeros(p, dtype=np.bool_)
    size_a = 0
    size_b = 0

    cap = 8 * p + 8
    bt = np.empty(cap, dtype=np.float64)
    bv = np.empty(cap, dtype=np.float64)
    nb = 0

    ne = 3 * p
    e = 0
    prev_t = 0.0
    have_prev = False
    while e < ne:
        t = ev_t[order[e]]
        # crossing vertex inside the gap (prev_t, t)
        if have_prev and t > prev_t:
            while size_a > 0 and not alive_a[heap_a_i[0]]:
                size_a = _heap_pop(heap_a_v, heap_a_i, size_a)
            while size_b > 0 and not alive_b[heap_b_i[0]]:
                size_b = _heap_pop(heap_b_v, heap_b_i, size_b)
            if size_a > 0 and size_b > 0:
                tx = 0.5 * (heap_b_v[0] - heap_a_v[0])
                if prev_t < tx < t:
                    bt[nb] = tx
                    bv[nb] = 0.5 * (heap_a_v[0] + heap_b_v[0])
                    nb += 1
        # apply inserts at t (tent starts, apex switchovers to falling)
        e2 = e
        while e2 < ne and ev_t[order[e2]] == t:
            idx = order[e2]
            i = ev_id[idx]
            if ev_type[idx] == 0:
                alive_a[i] = True
                size_a = _heap_push(heap_a_v, heap_a_i, size_a, a_line[i], i)
            elif ev_type[idx] == 1:
                alive_b[i] = True
                size_b = _heap_push(heap_b_v, heap_b_i, size_b, b_line[i], i)
            e2 += 1
        # evaluate at t with closing tents still active
        while size_a > 0 and not alive_a[heap_a_i[0]]:
            size_a = _heap_pop(heap_a_v, heap_a_i, size_a)
        while size_b > 0 and not alive_b[heap_b_i[0]]:
            size_b = _heap_pop(heap_b_v, heap_b_i, size_b)
        val = -UNBOUNDED
        if size_a > 0:
            val = heap_a_v[0] + t
        if size_b > 0:
            v2 = heap_b_v[0] - t
            if v2 > val:
                val = v2
        if val > -UNBOUNDED:
            if nb > 0 and bt[nb - 1] == t:
                if val > bv[nb - 1]:
                    bv[nb - 1] = val
            else:
                bt[nb] = t
                bv[nb] = val
                nb += 1
        # apply removals at t
        e3 = e
        while e3 < ne and ev_t[order[e3]] == t:
            idx = order[e3]
            i = ev_id[idx]
            if ev_type[idx] == 1:
                alive_a[i] = False
            elif ev_type[idx] == 2:
                alive_b[i] = False
            e3 += 1
        e = e3
        prev_t = t
        have_prev = True
    return bt[:nb].copy(), bv[:nb].copy()


@njit(cache=True)
def clip_polyline(bt, bv, lo, hi):
    """Clamp a polyline into [lo, hi], inserting the crossing vertices."""
    n = bt.size
    if n == 0:
        return bt, bv
    cap = 3 * n + 4
    ot = np.empty(cap, dtype=np.float64)
    ov = np.empty(cap, dtype=np.float64)
    m = 0
    for i in range(n):
        if i > 0:
            ta, va = bt[i - 1], bv[i - 1]
            tb, vb = bt[i], bv[i]
            if tb > ta:
                for bound in (lo, hi):
                    if (va - bound) * (vb - bound) < 0.0:
                        tx = ta + (tb - ta) * (bound - va) / (vb - va)
                        if ta < tx < tb:
                            ot[m] = tx
                            ov[m] = bound
                            m += 1
        v = bv[i]
        if v < lo:
            v = lo
        elif v > hi:
            v = hi
        ot[m] = bt[i]
        ov[m] = v
        m += 1
    # crossings were appended in t order already (one segment at a time),
    # but both bounds in one segment may need ordering
    for i in range(1, m):
        if ot[i] < ot[i - 1]:
            ot[i], ot[i - 1] = ot[i - 1], ot[i]
            ov[i], ov[i - 1] = ov[i - 1], ov[i]
    return ot[:m].copy(), ov[:m].copy()


@njit(cache=True, inline="always")
def polyline_eval(bt, bv, t):
    n = bt.size
    if n == 0:
        return math.nan
    if t <= bt[0]:
        return bv[0]
    if t >= bt[n - 1]:
        return bv[n - 1]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if bt[mid] <= t:
            lo = mid
        else:
            hi = mid
    if bt[hi] == bt[lo]:
        return bv[lo]
    w = (t - bt[lo]) / (bt[hi] - bt[lo])
    return bv[lo] + w * (bv[hi] - bv[lo])


@njit(cache=True)
def polyline_max_diff(at, av, bt_, bv_):
    """Max and argmax of A(t) - B(t) over the union of breakpoints."""
    best = -np.inf
    best_t = math.nan
    for i in range(at.size):
        d = av[i] - polyline_eval(bt_, bv_, at[i])
        if d > best:
            best = d
            best_t = at[i]
    for i in range(bt_.size):
        d = polyline_eval(at, av, bt_[i]) - bv_[i]
        if d > best:
            best = d
            best_t = bt_[i]
    return best, best_t


@njit(cache=True)
def polyline_abs_max(bt, bv, s_ref):
    best = 0.0
    for i in range(bt.size):
        d = abs(bv[i] - s_ref)
        if d > best:
            best = d
    return best


@njit(cache=True)
def pairs_to_tents(pi, qi, pts_t, pts_s, start_t, start_s, end_t, end_s):
    """Expand (index, index) pairs into tent coordinate arrays, resolving
    the virtual endpoint indices."""
    n = pi.size
    t0 = np.empty(n, dtype=np.float64)
    s0 = np.empty(n, dtype=np.float64)
    t1 = np.empty(n, dtype=np.float64)
    s1 = np.empty(n, dtype=np.float64)
    for i in range(n):
        p = pi[i]
        if p == START_IDX:
            t0[i] = start_t
            s0[i] = start_s
        else:
            t0[i] = pts_t[p]
            s0[i] = pts_s[p]
        q = qi[i]
        if q == END_IDX:
            t1[i] = end_t
            s1[i] = end_s
        else:
            t1[i] = pts_t[q]
            s1[i] = pts_s[q]
    return t0, s0, t1, s1


@njit(cache=True)
def lower_envelope(t0, s0, t1, s1):
    """Lower envelope of tents: mirror of the upper envelope in s -> -s."""
    bt, bv = upper_envelope(t0, -s0, t1, -s1)
    return bt, -bv


# ---------------------------------------------------------------------------
# Boundary spread of a diagonal rectangle
# ---------------------------------------------------------------------------

@njit(cache=True)
def _edge_candidates(ts, ss, edge_t, left_side, s_lo, s_hi):
    """Candidate boundary heights: the heights where some point enters or
    leaves the boundary point's dominance cone, the two corners, and the
    midpoints of consecutive criticals (the reachable set on an open piece
    can differ from both of its endpoints)."""
    n = ts.size
    raw = np.empty(2 * n + 2, dtype=np.float64)
    m = 0
    for i in range(n):
        if left_side:
            r = ts[i] - edge_t
        else:
            r = edge_t - ts[i]
        if r < 0.0:
            continue
        lo = ss[i] - r
        hi = ss[i] + r
        if s_lo <= lo <= s_hi:
            raw[m] = lo
            m += 1
        if s_lo <= hi <= s_hi:
            raw[m] = hi
            m += 1
    raw[m] = s_lo
    m += 1
    raw[m] = s_hi
    m += 1
    vals = np.sort(raw[:m])
    out = np.empty(2 * m, dtype=np.float64)
    w = 0
    for i in range(m):
        v = vals[i]
        if w > 0 and v == out[w - 1]:
            continue
        if w > 0:
            mid = 0.5 * (out[w - 1] + v)
            out[w] = mid
            w += 1
        out[w] = v
        w += 1
    return out[:w].copy()


@njit(cache=True)
def delta_spread_kernel(ys, ts, ss, t_l, t_r, s_lo, s_hi):
    """Exact boundary spread: max minus min of the endpoint-to-endpoint
    restricted chain length over all (left boundary, right boundary) pairs.

    Points must be pre-filtered to the rectangle and sorted
    lexicographically by (x, y). For a fixed left point the chain lengths
    into every candidate right point are answered offline: points enter a
    prefix-max Fenwick tree over (s - t)-ranks as the (s + t) threshold
    grows with the right-boundary height.
    """
    n = ys.size
    left = _edge_candidates(ts, ss, t_l, True, s_lo, s_hi)
    right = _edge_candidates(ts, ss, t_r, False, s_lo, s_hi)
    us = np.empty(n, dtype=np.float64)
    vs = np.empty(n, dtype=np.float64)
    for i in range(n):
        us[i] = ss[i] + ts[i]
        vs[i] = ss[i] - ts[i]
    order_u = np.argsort(us)
    sorted_v = np.sort(vs)
    mask = np.empty(n, dtype=np.bool_)
    f_a = np.empty(n, dtype=np.int64)
    tree = np.zeros(n + 1, dtype=np.int64)
    best_max = np.int64(0)
    best_min = np.int64(0)
    first = True
    for ai in range(left.size):
        a = left[ai]
        for i in range(n):
            mask[i] = (ts[i] - t_l) >= abs(ss[i] - a)
        forward_lengths(ys, mask, f_a)
        for i in range(n + 1):
            tree[i] = 0
        ptr = 0
        for bi in range(right.size):
            b = right[bi]
            thr = b + t_r
            while ptr < n and us[order_u[ptr]] <= thr:
                p = order_u[ptr]
                if f_a[p] > 0:
                    rnk = _lower_bound_arr(sorted_v, vs[p])
                    bit_update_max(tree, n - 1 - rnk, f_a[p])
                ptr += 1
            lb = _lower_bound_arr(sorted_v, b - t_r)
            val = bit_prefix_max(tree, n - 1 - lb)
            if first:
                best_max = val
                best_min = val
                first = False
            else:
                if val > best_max:
                    best_max = val
                if val < best_min:
                    best_min = val
    return best_max - best_min
