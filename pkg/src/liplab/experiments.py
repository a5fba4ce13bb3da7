"""Monte Carlo drivers reproducing the scaling laws at desk scale.

Each driver fans replicates out through the batch kernels (stream =
``(size_index << 32) | replicate``), aggregates in replicate order, and
returns reports plus a RecordSet from which every report can be
recomputed. Identical configuration means bit-identical records, for any
thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from . import _batch as B
from ._kernels import DEFAULT_PAIR_CAP, OMEGA_EPS_DEFAULT
from .stats import (
    KSReport,
    ProbReport,
    SlopeReport,
    SummaryStats,
    ks_one_sample_normal,
    ks_two_sample,
    ols_slope,
    prob_report,
    summarize,
)

DEFAULT_SEED = 987654321
SQRT2 = math.sqrt(2.0)


def set_threads(threads: int) -> int:
    """Cap the kernel thread pool; returns the applied count.

    Results never depend on this value (replicates write indexed slots),
    only wall time does. Requests beyond the hardware pool are clamped.
    """
    limit = numba.config.NUMBA_NUM_THREADS
    n = max(1, min(int(threads), limit))
    numba.set_num_threads(n)
    return n


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared configuration for the multi-size drivers."""

    sizes: tuple
    m: int
    seed: int = DEFAULT_SEED
    gamma: float | None = None
    delta: float | None = None
    delta_prime: float | None = None
    threads: int = 0  # 0 = use all available

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need m >= 2 replicates")
        ss = list(self.sizes)
        if any(b <= a for a, b in zip(ss, ss[1:])):
            raise ValueError("sizes must be strictly increasing")
        if self.gamma is not None and not 0.0 < self.gamma < 2.0 / 3.0:
            raise ValueError("gamma must lie in (0, 2/3)")
        if self.delta is not None and not 0.0 < self.delta < 1.0 / 12.0:
            raise ValueError("delta must lie in (0, 1/12)")
        if self.delta_prime is not None:
            if self.delta is None:
                raise ValueError("delta_prime needs delta")
            if not 0.0 < self.delta_prime < 1.0 / 6.0 - 2.0 * self.delta:
                raise ValueError("delta_prime must lie in (0, 1/6 - 2*delta)")


@dataclass(frozen=True)
class ReplicateRecord:
    """One replicate's measurements; a pure function of (config, size,
    replicate)."""

    size_index: int
    replicate: int
    measured: dict


class RecordSet:
    """Column-oriented replicate records, ordered by (size index, replicate)."""

    def __init__(self, columns: list[str], arrays: dict, meta: dict):
        self.columns = list(columns)
        self.arrays = {c: np.asarray(arrays[c]) for c in columns}
        self.meta = dict(meta)
        lengths = {a.size for a in self.arrays.values()}
        if len(lengths) > 1:
            raise ValueError("ragged record columns")
        self.num_rows = lengths.pop() if lengths else 0

    def column(self, name: str) -> np.ndarray:
        return self.arrays[name]

    def iter_records(self):
        key_cols = [c for c in ("size", "arm", "w", "replicate") if c in self.columns]
        value_cols = [c for c in self.columns if c not in key_cols]
        size_col = next((c for c in key_cols if c != "replicate"), None)
        for i in range(self.num_rows):
            measured = {c: self.arrays[c][i].item() for c in value_cols}
            yield ReplicateRecord(
                size_index=int(self.arrays[size_col][i]) if size_col else 0,
                replicate=int(self.arrays["replicate"][i]),
                measured=measured,
            )


def _meta(experiment: str, seed: int, **params) -> dict:
    return {"experiment": experiment, "seed": int(seed), "params": params}


def _concat_records(columns, chunks, meta) -> RecordSet:
    arrays = {c: np.concatenate([np.asarray(ch[c]) for ch in chunks])
              for c in columns}
    return RecordSet(columns, arrays, meta)


# ---------------------------------------------------------------------------
# Unrestricted square: Tracy-Widom constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwConstantsResult:
    c1_hat: float
    c2_hat: float
    stats: SummaryStats
    records: RecordSet


def run_tw_constants(n: int, m: int, seed: int = DEFAULT_SEED,
                     threads: int = 0) -> TwConstantsResult:
    """Estimate the mean/variance constants of the unrestricted square
    chain length: c1 = (2n - mean)/n^(1/3), c2 = var/n^(2/3)."""
    if n < 100:
        raise ValueError("need n >= 100")
    if m < 2:
        raise ValueError("need m >= 2")
    set_threads(threads) if threads else None
    lengths = B.batch_rect_lengths(np.uint64(seed), 0, m, float(n), float(n))
    stats = summarize(lengths)
    c1 = (2.0 * n - stats.mean) / n ** (1.0 / 3.0)
    c2 = stats.variance / n ** (2.0 / 3.0)
    records = RecordSet(
        ["size", "replicate", "length"],
        {"size": np.full(m, n, dtype=np.int64),
         "replicate": np.arange(m, dtype=np.int64),
         "length": lengths},
        _meta("tw-constants", seed, n=n, m=m))
    return TwConstantsResult(c1_hat=c1, c2_hat=c2, stats=stats, records=records)


# ---------------------------------------------------------------------------
# Strip scaling and Gaussian limit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StripScalingResult:
    mean_deficiency: SlopeReport | None
    variance: SlopeReport | None
    per_size: list
    records: RecordSet


def run_strip_scaling(config: ExperimentConfig) -> StripScalingResult:
    """Corner-to-corner strip lengths across sizes; fits the deficiency
    exponent log(2n - mean) ~ log n and the variance exponent."""
    if config.gamma is None:
        raise ValueError("strip scaling needs gamma")
    if config.threads:
        set_threads(config.threads)
    chunks = []
    per_size = []
    for i, n in enumerate(config.sizes):
        d = float(n) ** config.gamma
        lengths = B.batch_strip_lengths(np.uint64(config.seed), i, config.m,
                                        float(n), d)
        st = summarize(lengths)
        deficiency = 2.0 * n - st.mean
        if deficiency <= 0.0:
            raise RuntimeError(f"non-positive mean deficiency at n={n}")
        per_size.append({"n": int(n), "half_width": d, "mean": st.mean,
                         "variance": st.variance, "deficiency": deficiency})
        chunks.append({"size": np.full(config.m, n, dtype=np.int64),
                       "replicate": np.arange(config.m, dtype=np.int64),
                       "length": lengths})
    log_n = [math.log(r["n"]) for r in per_size]
    if len(per_size) >= 3:
        mean_fit = ols_slope(log_n, [math.log(r["deficiency"]) for r in per_size])
        var_fit = ols_slope(log_n, [math.log(r["variance"]) for r in per_size])
    else:
        mean_fit = None
        var_fit = None
    meta = _meta("strip-scaling", config.seed, gamma=config.gamma,
                 sizes=list(config.sizes), m=config.m)
    records = _concat_records(["size", "replicate", "length"], chunks, meta)
    return StripScalingResult(mean_deficiency=mean_fit, variance=var_fit,
                              per_size=per_size, records=records)


@dataclass(frozen=True)
class CltResult:
    ks: KSReport
    stats: SummaryStats
    records: RecordSet


def run_clt(n: int, gamma: float, m: int, seed: int = DEFAULT_SEED,
            threads: int = 0) -> CltResult:
    """Gaussian-limit check: standardized strip lengths against N(0,1)."""
    if not 0.0 < gamma < 2.0 / 3.0:
        raise ValueError("gamma must lie in (0, 2/3)")
    if m < 20:
        raise ValueError("need m >= 20 for the KS report")
    if threads:
        set_threads(threads)
    lengths = B.batch_strip_lengths(np.uint64(seed), 0, m, float(n),
                                    float(n) ** gamma)
    ks = ks_one_sample_normal(lengths)
    stats = summarize(lengths)
    records = RecordSet(
        ["size", "replicate", "length"],
        {"size": np.full(m, n, dtype=np.int64),
         "replicate": np.arange(m, dtype=np.int64),
         "length": lengths},
        _meta("clt", seed, n=n, gamma=gamma, m=m))
    return CltResult(ks=ks, stats=stats, records=records)


# ---------------------------------------------------------------------------
# Transversal fluctuations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransversalResult:
    slope: SlopeReport | None
    per_size: list
    records: RecordSet


def run_transversal(ns, m: int, seed: int = DEFAULT_SEED,
                    threads: int = 0) -> TransversalResult:
    """Median transversal fluctuation of the corner-to-corner square query
    across sizes; fits log median(s_points) against log n."""
    if m < 2:
        raise ValueError("need m >= 2")
    if threads:
        set_threads(threads)
    chunks = []
    per_size = []
    for i, n in enumerate(ns):
        lengths, s_pts, s_env = B.batch_transversal(
            np.uint64(seed), i, m, float(n), DEFAULT_PAIR_CAP)
        med = float(np.median(s_pts))
        per_size.append({"n": int(n), "median_s_points": med,
                         "median_s_envelope": float(np.median(s_env))})
        chunks.append({"size": np.full(m, n, dtype=np.int64),
                       "replicate": np.arange(m, dtype=np.int64),
                       "length": lengths, "s_points": s_pts,
                       "s_envelope": s_env})
    if len(per_size) >= 3:
        slope = ols_slope([math.log(r["n"]) for r in per_size],
                          [math.log(r["median_s_points"]) for r in per_size])
    else:
        slope = None
    meta = _meta("transversal", seed, sizes=[int(n) for n in ns], m=m)
    records = _concat_records(
        ["size", "replicate", "length", "s_points", "s_envelope"], chunks, meta)
    return TransversalResult(slope=slope, per_size=per_size, records=records)


# ---------------------------------------------------------------------------
# Regeneration-event frequency
# ---------------------------------------------------------------------------

def block_dims(n: int, delta: float, delta_prime: float) -> tuple[float, float]:
    """Basic-block dimensions: width n^(2/3) (log n)^(1/3+delta), length
    n*floor(sqrt(log n)) + 2n/(log n)^delta_prime."""
    ln = math.log(n)
    if ln <= 0:
        raise ValueError("need n > 1")
    w = n ** (2.0 / 3.0) * ln ** (1.0 / 3.0 + delta)
    tau = n / ln ** delta_prime
    ell = n * math.floor(math.sqrt(ln)) + 2.0 * tau
    return ell, w


@dataclass(frozen=True)
class OmegaSizeReport:
    n: int
    ell_b: float
    w_b: float
    prob: ProbReport
    shared_rate: float


@dataclass(frozen=True)
class OmegaResult:
    reports: list
    records: RecordSet


def run_omega(ns, delta: float, delta_prime: float, m: int,
              seed: int = DEFAULT_SEED, threads: int = 0) -> OmegaResult:
    """Regeneration-event frequency in basic blocks, per size, with Wilson
    intervals."""
    if not 0.0 < delta < 1.0 / 12.0:
        raise ValueError("delta must lie in (0, 1/12)")
    if not 0.0 < delta_prime < 1.0 / 6.0 - 2.0 * delta:
        raise ValueError("delta_prime must lie in (0, 1/6 - 2*delta)")
    if m < 1:
        raise ValueError("need m >= 1")
    if threads:
        set_threads(threads)
    chunks = []
    reports = []
    for i, n in enumerate(ns):
        ell, w = block_dims(int(n), delta, delta_prime)
        occurs, margin, shared, status, counts = B.batch_omega(
            np.uint64(seed), i, m, ell, w, DEFAULT_PAIR_CAP, OMEGA_EPS_DEFAULT)
        if np.any(status != 0):
            raise RuntimeError(f"pair cap exceeded in {int(np.sum(status != 0))} "
                               f"replicates at n={n}")
        k = int(np.sum(occurs))
        reports.append(OmegaSizeReport(
            n=int(n), ell_b=ell, w_b=w, prob=prob_report(k, m),
            shared_rate=float(np.mean(shared))))
        chunks.append({"size": np.full(m, n, dtype=np.int64),
                       "replicate": np.arange(m, dtype=np.int64),
                       "omega": occurs.astype(np.int64),
                       "shared_member": shared.astype(np.int64),
                       "margin": margin,
                       "n_points": counts,
                       "ell_b": np.full(m, ell),
                       "w_b": np.full(m, w)})
    meta = _meta("omega", seed, sizes=[int(n) for n in ns], delta=delta,
                 delta_prime=delta_prime, m=m)
    records = _concat_records(
        ["size", "replicate", "omega", "shared_member", "margin",
         "n_points", "ell_b", "w_b"], chunks, meta)
    return OmegaResult(reports=reports, records=records)


# ---------------------------------------------------------------------------
# Point-to-point distributional identity
# ---------------------------------------------------------------------------

def point_to_point_lengths(t: float, s: float, m: int, seed: int,
                           arm: int = 0) -> np.ndarray:
    """Replicated lengths of the chain from the origin to (t, s) in
    diagonal coordinates. Identically zero when |s| > t (empty cone)."""
    if abs(s) > t:
        return np.zeros(m, dtype=np.int64)
    w = (t - s) / SQRT2
    h = (t + s) / SQRT2
    return B.batch_rect_lengths(np.uint64(seed), arm, m, w, h)


@dataclass(frozen=True)
class DistIdentityResult:
    ks: KSReport
    t_equivalent: float
    records: RecordSet


def run_dist_identity(t: float, s: float, m: int, seed: int = DEFAULT_SEED,
                      threads: int = 0) -> DistIdentityResult:
    """Two-sample KS between the (t, s) chain length and the (sqrt(t^2-s^2), 0)
    chain length; the two laws coincide exactly."""
    if not abs(s) < t:
        raise ValueError("need |s| < t (otherwise the length is identically 0)")
    if m < 20:
        raise ValueError("need m >= 20")
    if threads:
        set_threads(threads)
    t_eq = math.sqrt(t * t - s * s)
    a = point_to_point_lengths(t, s, m, seed, arm=0)
    b = point_to_point_lengths(t_eq, 0.0, m, seed, arm=1)
    ks = ks_two_sample(a, b)
    meta = _meta("dist-identity", seed, t=t, s=s, t_equivalent=t_eq, m=m)
    records = _concat_records(
        ["arm", "replicate", "length"],
        [{"arm": np.zeros(m, dtype=np.int64),
          "replicate": np.arange(m, dtype=np.int64), "length": a},
         {"arm": np.ones(m, dtype=np.int64),
          "replicate": np.arange(m, dtype=np.int64), "length": b}],
        meta)
    return DistIdentityResult(ks=ks, t_equivalent=t_eq, records=records)


# ---------------------------------------------------------------------------
# Tail shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailResult:
    tables: dict
    slopes: dict
    stats: SummaryStats
    records: RecordSet


def run_tail(t: float, thresholds, side: str, m: int,
             seed: int = DEFAULT_SEED, threads: int = 0) -> TailResult:
    """Standardized tail frequencies of the point-to-point length at
    thresholds T, with shape fits: log p against T^(3/2) for the upper
    tail and against T^3 for the lower tail.

    Centering uses the in-sample mean and standard deviation (the exact
    centering constants have no closed form); this bias is recorded in the
    metadata.
    """
    thresholds = [float(T) for T in thresholds]
    if any(not 1.0 <= T <= t ** (2.0 / 3.0) for T in thresholds):
        raise ValueError("thresholds must lie in [1, t^(2/3)]")
    if sorted(thresholds) != thresholds:
        raise ValueError("thresholds must be increasing")
    if side not in ("upper", "lower", "both"):
        raise ValueError("side must be upper, lower or both")
    if m < 2:
        raise ValueError("need m >= 2")
    if threads:
        set_threads(threads)
    lengths = B.batch_area_lengths(np.uint64(seed), 0, m, 0.5 * t * t)
    stats = summarize(lengths)
    z = (lengths - stats.mean) / math.sqrt(stats.variance)
    sides = ("upper", "lower") if side == "both" else (side,)
    tables = {}
    slopes = {}
    for sd in sides:
        if sd == "upper":
            probs = [float(np.mean(z >= T)) for T in thresholds]
            xs = [T ** 1.5 for T in thresholds]
        else:
            probs = [float(np.mean(z <= -T)) for T in thresholds]
            xs = [T ** 3 for T in thresholds]
        tables[sd] = list(zip(thresholds, probs))
        positive = [(x, p) for x, p in zip(xs, probs) if p > 0.0]
        if len(positive) >= 3:
            slopes[sd] = ols_slope([x for x, _ in positive],
                                   [math.log(p) for _, p in positive])
        else:
            slopes[sd] = None
    meta = _meta("tail", seed, t=t, thresholds=thresholds, side=side, m=m,
                 centering="in-sample mean/sd (biased against the exact "
                           "centering constants)")
    records = RecordSet(
        ["replicate", "length"],
        {"replicate": np.arange(m, dtype=np.int64), "length": lengths},
        meta)
    return TailResult(tables=tables, slopes=slopes, stats=stats, records=records)


# ---------------------------------------------------------------------------
# Diagonal-rectangle profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VarianceProfileResult:
    rows: list
    records: RecordSet


def run_variance_profile(ell: float, ws, m: int, seed: int = DEFAULT_SEED,
                         threads: int = 0) -> VarianceProfileResult:
    """Exploratory normalized variance var * w^(1/2) / ell across widths."""
    if m < 2:
        raise ValueError("need m >= 2")
    if threads:
        set_threads(threads)
    chunks = []
    rows = []
    for i, w in enumerate(ws):
        lengths = B.batch_diag_lengths(np.uint64(seed), i, m, float(ell), float(w))
        st = summarize(lengths)
        rows.append({"w": float(w), "variance": st.variance,
                     "normalized": st.variance * math.sqrt(w) / ell})
        chunks.append({"w": np.full(m, float(w)),
                       "replicate": np.arange(m, dtype=np.int64),
                       "length": lengths})
    meta = _meta("variance-profile", seed, ell=ell, ws=[float(w) for w in ws], m=m)
    records = _concat_records(["w", "replicate", "length"], chunks, meta)
    return VarianceProfileResult(rows=rows, records=records)


@dataclass(frozen=True)
class BlockExpectationResult:
    stats: SummaryStats
    deficiency: float
    bracket_low: float
    bracket_high: float
    condition_ok: bool
    records: RecordSet


def run_block_expectation(ell: float, w: float, m: int,
                          seed: int = DEFAULT_SEED, threads: int = 0,
                          delta: float = 0.05) -> BlockExpectationResult:
    """Mean deficiency sqrt(2)*ell - mean(L) of a diagonal rectangle,
    bracketed by the shape bounds (ell/w)/(log w)^(5/3-delta) and
    (ell/w)*(log w)^(1/3+delta) evaluated with unit constants (the true
    constants are unquantified; the bracket is for orientation only)."""
    if m < 2:
        raise ValueError("need m >= 2")
    if not 0.0 < delta < 1.0 / 6.0:
        raise ValueError("delta must lie in (0, 1/6)")
    if threads:
        set_threads(threads)
    lengths = B.batch_diag_lengths(np.uint64(seed), 0, m, float(ell), float(w))
    st = summarize(lengths)
    deficiency = SQRT2 * ell - st.mean
    lw = math.log(w)
    low = (ell / w) / lw ** (5.0 / 3.0 - delta) if lw > 0 else math.nan
    high = (ell / w) * lw ** (1.0 / 3.0 + delta) if lw > 0 else math.nan
    cond = w * lw ** (5.0 / 3.0) <= ell ** (2.0 / 3.0) if lw > 0 else False
    records = RecordSet(
        ["replicate", "length"],
        {"replicate": np.arange(m, dtype=np.int64), "length": lengths},
        _meta("block-expectation", seed, ell=ell, w=w, m=m, delta=delta))
    return BlockExpectationResult(stats=st, deficiency=deficiency,
                                  bracket_low=low, bracket_high=high,
                                  condition_ok=cond, records=records)


# ---------------------------------------------------------------------------
# Nested strips on a shared sample
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NestedStripsResult:
    gammas: tuple
    all_monotone: bool
    records: RecordSet


def run_nested_strips(n: int, gammas, m: int, seed: int = DEFAULT_SEED,
                      threads: int = 0) -> NestedStripsResult:
    """Strip lengths for several exponents evaluated on one shared square
    sample per replicate, plus the unrestricted length; nested strips are
    pointwise monotone, exactly."""
    gammas = tuple(sorted(float(g) for g in gammas))
    if any(not 0.0 < g < 2.0 / 3.0 for g in gammas):
        raise ValueError("gammas must lie in (0, 2/3)")
    if m < 1:
        raise ValueError("need m >= 1")
    if threads:
        set_threads(threads)
    ds = np.array([float(n) ** g for g in gammas])
    table = B.batch_nested_strip_lengths(np.uint64(seed), 0, m, float(n), ds)
    monotone = bool(np.all(np.diff(table, axis=1) >= 0))
    cols = [f"length_gamma_{g:g}" for g in gammas] + ["length_free"]
    arrays = {"size": np.full(m, n, dtype=np.int64),
              "replicate": np.arange(m, dtype=np.int64)}
    for k, c in enumerate(cols):
        arrays[c] = table[:, k]
    records = RecordSet(["size", "replicate"] + cols, arrays,
                        _meta("nested-strips", seed, n=n,
                              gammas=list(gammas), m=m))
    return NestedStripsResult(gammas=gammas, all_monotone=monotone,
                              records=records)
