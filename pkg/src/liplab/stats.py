"""Statistics primitives for the experiment drivers.

Self-contained on purpose: the normal CDF uses a documented rational
approximation rather than a library call, so reports are reproducible
bit-for-bit from the repository alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Kolmogorov-Smirnov asymptotic 95% critical coefficient, scaled by a
# safety factor absorbing finite-size deviation from the limit law.
KS_COEFF = 1.358
KS_SAFETY = 1.4


@dataclass(frozen=True)
class SummaryStats:
    """Standard moment summary; variance uses the unbiased n-1 divisor,
    skewness and excess kurtosis the plain moment ratios."""

    m: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    min: float
    max: float
    sem: float


@dataclass(frozen=True)
class SlopeReport:
    """Least-squares line through (log x, log y) style data."""

    xs: tuple
    ys: tuple
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class KSReport:
    statistic: float
    m: int
    threshold: float
    passed: bool
    safety_factor: float = KS_SAFETY


@dataclass(frozen=True)
class ProbReport:
    successes: int
    trials: int
    p_hat: float
    wilson_low: float
    wilson_high: float


def summarize(samples) -> SummaryStats:
    """Moment summary of a sample; needs at least two values."""
    a = np.asarray(samples, dtype=np.float64)
    m = a.size
    if m < 2:
        raise ValueError("summarize needs at least 2 samples")
    mean = float(a.mean())
    d = a - mean
    m2 = float(np.mean(d * d))
    var = float(np.sum(d * d) / (m - 1))
    if m2 > 0.0:
        skew = float(np.mean(d**3)) / m2**1.5
        kurt = float(np.mean(d**4)) / (m2 * m2) - 3.0
    else:
        skew = 0.0
        kurt = 0.0
    return SummaryStats(m=m, mean=mean, variance=var, skewness=skew,
                        excess_kurtosis=kurt, min=float(a.min()),
                        max=float(a.max()), sem=math.sqrt(var / m))


def ols_slope(xs, ys) -> SlopeReport:
    """Ordinary least squares fit; needs >= 3 points and non-degenerate xs."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.size < 3 or x.size != y.size:
        raise ValueError("ols_slope needs >= 3 paired points")
    sxx = float(np.sum((x - x.mean()) ** 2))
    if sxx == 0.0:
        raise ValueError("xs are degenerate")
    sxy = float(np.sum((x - x.mean()) * (y - y.mean())))
    slope = sxy / sxx
    intercept = float(y.mean()) - slope * float(x.mean())
    resid = y - (intercept + slope * x)
    syy = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / syy if syy > 0.0 else 1.0
    return SlopeReport(xs=tuple(x.tolist()), ys=tuple(y.tolist()),
                       slope=slope, intercept=intercept, r_squared=r2)


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the Abramowitz-Stegun 26.2.17 rational
    approximation (|error| < 7.5e-8)."""
    if x < 0.0:
        return 1.0 - normal_cdf(-x)
    k = 1.0 / (1.0 + 0.2316419 * x)
    poly = k * (0.319381530 + k * (-0.356563782 + k * (1.781477937
               + k * (-1.821255978 + k * 1.330274429))))
    pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return 1.0 - pdf * poly


def ks_one_sample_normal(samples, min_m: int = 20) -> KSReport:
    """Sup-distance of the empirical CDF against the standard normal after
    standardizing by the sample's own mean and standard deviation."""
    a = np.asarray(samples, dtype=np.float64)
    m = a.size
    if m < min_m:
        raise ValueError(f"need at least {min_m} samples")
    sd = a.std(ddof=1)
    if sd == 0.0:
        raise ValueError("zero-variance sample")
    z = np.sort((a - a.mean()) / sd)
    cdf = np.array([normal_cdf(v) for v in z])
    i = np.arange(m, dtype=np.float64)
    d = float(np.max(np.maximum(cdf - i / m, (i + 1.0) / m - cdf)))
    threshold = KS_COEFF * KS_SAFETY / math.sqrt(m)
    return KSReport(statistic=d, m=m, threshold=threshold, passed=d < threshold)


def ks_two_sample(a, b, min_m: int = 20) -> KSReport:
    """Two-sample sup-distance between empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    m1, m2 = a.size, b.size
    if min(m1, m2) < min_m:
        raise ValueError(f"need at least {min_m} samples per side")
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / m1
    cdf_b = np.searchsorted(b, grid, side="right") / m2
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    threshold = KS_COEFF * KS_SAFETY * math.sqrt((m1 + m2) / (m1 * m2))
    return KSReport(statistic=d, m=min(m1, m2), threshold=threshold,
                    passed=d < threshold)


def wilson_ci(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes out of range")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def prob_report(successes: int, trials: int, z: float = 1.96) -> ProbReport:
    lo, hi = wilson_ci(successes, trials, z)
    return ProbReport(successes=successes, trials=trials,
                      p_hat=successes / trials, wilson_low=lo, wilson_high=hi)
