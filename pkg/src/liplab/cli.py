"""Command line front end: one subcommand per experiment plus one-shot
sampling and length queries.

Exit codes: 0 success, 1 a pass/fail report failed its threshold, 2
invalid invocation. Raw replicate records go to ``--out`` as CSV; summary
reports go to ``--json``. Seeds default to a fixed constant so bare
invocations are reproducible; ``--threads`` (or the LIPLAB_THREADS
environment variable) only affects wall time, never output bytes.
"""

from __future__ import annotations

import sys

import click
import numpy as np

from . import experiments as X
from . import reports as R
from ._kernels import DEFAULT_PAIR_CAP
from .chains import delta_spread
from .geometry import AxisSquare, Diag, DiagRect, Strip
from .sampling import SeedSpec, sample_region
from .experiments import DEFAULT_SEED, RecordSet


def _sizes_list(text: str) -> list[int]:
    try:
        sizes = [int(v) for v in text.split(",") if v]
    except ValueError:
        raise click.UsageError(f"bad size list: {text!r}")
    if not sizes:
        raise click.UsageError("empty size list")
    return sizes


def _floats_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v]
    except ValueError:
        raise click.UsageError(f"bad number list: {text!r}")
    if not vals:
        raise click.UsageError("empty number list")
    return vals


def _emit(records: RecordSet, out, json_path, experiment, config, reports):
    csv_text = R.records_to_csv(records)
    if out:
        from pathlib import Path
        Path(out).write_text(csv_text, encoding="utf-8")
    else:
        click.echo(csv_text, nl=False)
    if json_path:
        R.write_summary_json(json_path, experiment, config, reports)


def _run(fn, *args, **kwargs):
    # domain validation errors are invalid invocations (exit 2)
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _common(f):
    f = click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True,
                     help="Experiment seed (64-bit unsigned).")(f)
    f = click.option("--threads", type=int, default=0, envvar="LIPLAB_THREADS",
                     help="Worker thread cap; 0 = all available. Output "
                          "bytes never depend on it.")(f)
    f = click.option("--out", type=click.Path(), default=None,
                     help="CSV path for raw replicate records "
                          "(default: stdout).")(f)
    f = click.option("--json", "json_path", type=click.Path(), default=None,
                     help="Optional JSON summary path.")(f)
    return f


@click.group()
@click.version_option(package_name="liplab")
def main():
    """Longest-increasing-path simulation laboratory."""


@main.command("sample")
@click.option("--n", type=float, default=None, help="Square side [0,n]^2.")
@click.option("--gamma", type=float, default=None, help="Strip exponent.")
@click.option("--ell", type=float, default=None, help="Diagonal rectangle length.")
@click.option("--w", type=float, default=None, help="Diagonal rectangle width.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--threads", type=int, default=0, envvar="LIPLAB_THREADS",
              help="Accepted for interface uniformity; sampling is one-shot.")
@click.option("--out", type=click.Path(), default=None)
def cmd_sample(n, gamma, ell, w, seed, threads, out):
    """One Poisson sample of a region, as x,y rows."""
    if threads:
        X.set_threads(threads)
    if ell is not None and w is not None:
        region = Diag(DiagRect(0.0, 0.0, ell, w))
        params = {"ell": ell, "w": w}
    elif n is not None and gamma is not None:
        region = _run(Strip, n, gamma=gamma)
        params = {"n": n, "gamma": gamma}
    elif n is not None:
        region = AxisSquare(n)
        params = {"n": n}
    else:
        raise click.UsageError("give --n [--gamma] or --ell and --w")
    ps = sample_region(region, SeedSpec(seed, 0))
    records = RecordSet(["x", "y"], {"x": ps.xs, "y": ps.ys},
                        {"experiment": "sample", "seed": seed, "params": params})
    _emit(records, out, None, "sample", params, {})


@main.command("length")
@click.option("--n", type=float, default=None, help="Square side.")
@click.option("--gamma", type=float, default=None, help="Strip exponent.")
@click.option("--ell", type=float, default=None)
@click.option("--w", type=float, default=None)
@click.option("--m", type=int, default=1, show_default=True,
              help="Number of replicates.")
@_common
def cmd_length(n, gamma, ell, w, m, seed, threads, out, json_path):
    """Chain length of sampled regions (square, strip, or diagonal rect)."""
    from . import _batch as B
    if threads:
        X.set_threads(threads)
    if m < 1:
        raise click.UsageError("need m >= 1")
    if ell is not None and w is not None:
        lengths = B.batch_diag_lengths(np.uint64(seed), 0, m, ell, w)
        params = {"ell": ell, "w": w, "m": m}
    elif n is not None and gamma is not None:
        if not 0.0 < gamma < 2.0 / 3.0:
            raise click.UsageError("gamma must lie in (0, 2/3)")
        lengths = B.batch_strip_lengths(np.uint64(seed), 0, m, n, n ** gamma)
        params = {"n": n, "gamma": gamma, "m": m}
    elif n is not None:
        lengths = B.batch_rect_lengths(np.uint64(seed), 0, m, n, n)
        params = {"n": n, "m": m}
    else:
        raise click.UsageError("give --n [--gamma] or --ell and --w")
    records = RecordSet(
        ["replicate", "length"],
        {"replicate": np.arange(m, dtype=np.int64), "length": lengths},
        {"experiment": "length", "seed": seed, "params": params})
    reports = {}
    if m >= 2:
        reports["stats"] = X.summarize(lengths)
    _emit(records, out, json_path, "length", params, reports)


@main.command("delta")
@click.option("--ell", type=float, required=True)
@click.option("--w", type=float, required=True)
@click.option("--m", type=int, default=1, show_default=True)
@_common
def cmd_delta(ell, w, m, seed, threads, out, json_path):
    """Boundary spread of sampled diagonal rectangles."""
    if m < 1:
        raise click.UsageError("need m >= 1")
    rect = DiagRect(0.0, 0.0, ell, w)
    region = Diag(rect)
    vals = np.empty(m, dtype=np.int64)
    counts = np.empty(m, dtype=np.int64)
    for j in range(m):
        ps = sample_region(region, SeedSpec(seed, j))
        vals[j] = delta_spread(rect, ps)
        counts[j] = ps.count
    params = {"ell": ell, "w": w, "m": m}
    records = RecordSet(
        ["replicate", "delta_spread", "n_points"],
        {"replicate": np.arange(m, dtype=np.int64), "delta_spread": vals,
         "n_points": counts},
        {"experiment": "delta", "seed": seed, "params": params})
    reports = {"stats": X.summarize(vals)} if m >= 2 else {}
    _emit(records, out, json_path, "delta", params, reports)


@main.command("omega")
@click.option("--sizes", required=True, help="Comma-separated n values.")
@click.option("--delta", type=float, default=0.05, show_default=True)
@click.option("--delta-prime", type=float, default=0.05, show_default=True)
@click.option("--m", type=int, default=100, show_default=True)
@_common
def cmd_omega(sizes, delta, delta_prime, m, seed, threads, out, json_path):
    """Regeneration-event frequency in basic blocks."""
    res = _run(X.run_omega, _sizes_list(sizes), delta, delta_prime, m,
               seed=seed, threads=threads)
    config = {"sizes": _sizes_list(sizes), "delta": delta,
              "delta_prime": delta_prime, "m": m, "seed": seed}
    _emit(res.records, out, json_path, "omega", config,
          {"per_size": res.reports})


@main.command("tw-constants")
@click.option("--n", type=int, default=500, show_default=True)
@click.option("--m", type=int, default=400, show_default=True)
@_common
def cmd_tw(n, m, seed, threads, out, json_path):
    """Mean/variance constants of the unrestricted square length."""
    res = _run(X.run_tw_constants, n, m, seed=seed, threads=threads)
    config = {"n": n, "m": m, "seed": seed}
    _emit(res.records, out, json_path, "tw-constants", config,
          {"c1_hat": res.c1_hat, "c2_hat": res.c2_hat, "stats": res.stats})


@main.command("strip-scaling")
@click.option("--gamma", type=float, required=True)
@click.option("--sizes", required=True, help="Comma-separated n values.")
@click.option("--m", type=int, default=200, show_default=True)
@_common
def cmd_strip_scaling(gamma, sizes, m, seed, threads, out, json_path):
    """Strip mean-deficiency and variance exponents across sizes."""
    cfg = _run(X.ExperimentConfig, sizes=tuple(_sizes_list(sizes)), m=m,
               seed=seed, gamma=gamma, threads=threads)
    res = _run(X.run_strip_scaling, cfg)
    config = {"gamma": gamma, "sizes": _sizes_list(sizes), "m": m, "seed": seed}
    _emit(res.records, out, json_path, "strip-scaling", config,
          {"mean_deficiency": res.mean_deficiency, "variance": res.variance,
           "per_size": res.per_size})


@main.command("clt")
@click.option("--n", type=int, default=8192, show_default=True)
@click.option("--gamma", type=float, required=True)
@click.option("--m", type=int, default=1000, show_default=True)
@_common
def cmd_clt(n, gamma, m, seed, threads, out, json_path):
    """Gaussian-limit KS check for the strip length."""
    res = _run(X.run_clt, n, gamma, m, seed=seed, threads=threads)
    config = {"n": n, "gamma": gamma, "m": m, "seed": seed}
    _emit(res.records, out, json_path, "clt", config,
          {"ks": res.ks, "stats": res.stats})
    if not res.ks.passed:
        click.echo(f"FAIL: KS statistic {res.ks.statistic:.5f} >= "
                   f"threshold {res.ks.threshold:.5f}", err=True)
        sys.exit(1)


@main.command("transversal")
@click.option("--sizes", required=True, help="Comma-separated n values.")
@click.option("--m", type=int, default=200, show_default=True)
@_common
def cmd_transversal(sizes, m, seed, threads, out, json_path):
    """Transversal fluctuation exponent across sizes."""
    res = _run(X.run_transversal, _sizes_list(sizes), m, seed=seed,
               threads=threads)
    config = {"sizes": _sizes_list(sizes), "m": m, "seed": seed}
    _emit(res.records, out, json_path, "transversal", config,
          {"slope": res.slope, "per_size": res.per_size})


@main.command("dist-identity")
@click.option("--t", type=float, default=200.0, show_default=True)
@click.option("--s", type=float, default=120.0, show_default=True)
@click.option("--m", type=int, default=2000, show_default=True)
@_common
def cmd_dist_identity(t, s, m, seed, threads, out, json_path):
    """Two-sample KS between equal-area point-to-point lengths."""
    res = _run(X.run_dist_identity, t, s, m, seed=seed, threads=threads)
    config = {"t": t, "s": s, "m": m, "seed": seed}
    _emit(res.records, out, json_path, "dist-identity", config,
          {"ks": res.ks, "t_equivalent": res.t_equivalent})
    if not res.ks.passed:
        click.echo(f"FAIL: KS statistic {res.ks.statistic:.5f} >= "
                   f"threshold {res.ks.threshold:.5f}", err=True)
        sys.exit(1)


@main.command("tail")
@click.option("--t", type=float, default=1000.0, show_default=True)
@click.option("--thresholds", default="1,1.5,2,2.5", show_default=True)
@click.option("--side", type=click.Choice(["upper", "lower", "both"]),
              default="both", show_default=True)
@click.option("--m", type=int, default=50000, show_default=True)
@_common
def cmd_tail(t, thresholds, side, m, seed, threads, out, json_path):
    """Standardized tail frequencies and shape fits."""
    res = _run(X.run_tail, t, _floats_list(thresholds), side, m, seed=seed,
               threads=threads)
    config = {"t": t, "thresholds": _floats_list(thresholds), "side": side,
              "m": m, "seed": seed}
    _emit(res.records, out, json_path, "tail", config,
          {"tables": res.tables, "slopes": res.slopes, "stats": res.stats})


@main.command("variance-profile")
@click.option("--ell", type=float, required=True)
@click.option("--ws", required=True, help="Comma-separated widths.")
@click.option("--m", type=int, default=100, show_default=True)
@_common
def cmd_variance_profile(ell, ws, m, seed, threads, out, json_path):
    """Normalized variance across widths (exploratory, no pass/fail)."""
    res = _run(X.run_variance_profile, ell, _floats_list(ws), m, seed=seed,
               threads=threads)
    config = {"ell": ell, "ws": _floats_list(ws), "m": m, "seed": seed}
    _emit(res.records, out, json_path, "variance-profile", config,
          {"rows": res.rows})


@main.command("block-expectation")
@click.option("--ell", type=float, required=True)
@click.option("--w", type=float, required=True)
@click.option("--m", type=int, default=100, show_default=True)
@click.option("--delta", type=float, default=0.05, show_default=True)
@_common
def cmd_block_expectation(ell, w, m, delta, seed, threads, out, json_path):
    """Mean deficiency of a diagonal rectangle with orientation bracket."""
    res = _run(X.run_block_expectation, ell, w, m, seed=seed, threads=threads,
               delta=delta)
    config = {"ell": ell, "w": w, "m": m, "delta": delta, "seed": seed}
    _emit(res.records, out, json_path, "block-expectation", config,
          {"stats": res.stats, "deficiency": res.deficiency,
           "bracket_low": res.bracket_low, "bracket_high": res.bracket_high,
           "condition_ok": res.condition_ok})


if __name__ == "__main__":
    main()
