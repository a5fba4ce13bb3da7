import json

import numpy as np
import pytest
from click.testing import CliRunner

from liplab.cli import main
from liplab.reports import read_records_csv
from liplab.stats import summarize


@pytest.fixture()
def runner():
    return CliRunner()


def test_length_deterministic_rerun(runner):
    a = runner.invoke(main, ["length", "--n", "100", "--seed", "7"])
    b = runner.invoke(main, ["length", "--n", "100", "--seed", "7"])
    assert a.exit_code == 0
    assert a.output == b.output
    assert "replicate,length" in a.output


def test_strip_scaling_format_contract(runner, tmp_path):
    out = tmp_path / "r.csv"
    js = tmp_path / "r.json"
    res = runner.invoke(main, [
        "strip-scaling", "--gamma", "0.3", "--sizes", "64,128,256",
        "--m", "3", "--seed", "1", "--out", str(out), "--json", str(js)])
    assert res.exit_code == 0, res.output
    lines = out.read_text().splitlines()
    header = next(l for l in lines if not l.startswith("#"))
    assert header == "size,replicate,length"
    payload = json.loads(js.read_text())
    assert payload["schema_version"] == 1
    assert "slope" in payload["reports"]["mean_deficiency"]
    assert payload["config"]["gamma"] == 0.3


def test_clt_gamma_out_of_range_exits_2(runner):
    res = runner.invoke(main, ["clt", "--gamma", "0.9", "--n", "64", "--m", "20"])
    assert res.exit_code == 2


def test_invalid_flag_rejected(runner):
    res = runner.invoke(main, ["length", "--n", "10", "--frobnicate", "1"])
    assert res.exit_code == 2


def test_missing_required_args(runner):
    assert runner.invoke(main, ["length"]).exit_code == 2
    assert runner.invoke(main, ["strip-scaling", "--gamma", "0.3"]).exit_code == 2
    assert runner.invoke(main, ["omega", "--sizes", "abc"]).exit_code == 2


def test_csv_loss_free_roundtrip(runner, tmp_path):
    out = tmp_path / "tw.csv"
    js = tmp_path / "tw.json"
    res = runner.invoke(main, [
        "tw-constants", "--n", "128", "--m", "8", "--seed", "3",
        "--out", str(out), "--json", str(js)])
    assert res.exit_code == 0, res.output
    records = read_records_csv(out)
    st = summarize(records.column("length"))
    payload = json.loads(js.read_text())
    want = payload["reports"]["stats"]
    assert abs(st.mean - want["mean"]) <= 1e-12 * max(1.0, abs(want["mean"]))
    assert abs(st.variance - want["variance"]) <= 1e-12 * max(1.0, want["variance"])
    assert records.meta["seed"] == 3
    assert records.meta["experiment"] == "tw-constants"


def test_threads_do_not_change_bytes(runner, tmp_path):
    outputs = []
    for threads in ("1", "8"):
        out = tmp_path / f"t{threads}.csv"
        res = runner.invoke(main, [
            "transversal", "--sizes", "32,64", "--m", "4", "--seed", "2",
            "--threads", threads, "--out", str(out)])
        assert res.exit_code == 0, res.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_sample_subcommand(runner):
    res = runner.invoke(main, ["sample", "--n", "20", "--seed", "5"])
    assert res.exit_code == 0
    lines = [l for l in res.output.splitlines() if l and not l.startswith("#")]
    assert lines[0] == "x,y"
    pts = [tuple(map(float, l.split(","))) for l in lines[1:]]
    assert all(0 <= x <= 20 and 0 <= y <= 20 for x, y in pts)
    assert pts == sorted(pts)
    res2 = runner.invoke(main, ["sample"])
    assert res2.exit_code == 2


def test_delta_subcommand(runner):
    res = runner.invoke(main, ["delta", "--ell", "6", "--w", "2",
                               "--m", "3", "--seed", "4"])
    assert res.exit_code == 0
    lines = [l for l in res.output.splitlines() if l and not l.startswith("#")]
    assert lines[0] == "replicate,delta_spread,n_points"
    assert len(lines) == 4


def test_dist_identity_pass_exit_zero(runner):
    res = runner.invoke(main, ["dist-identity", "--t", "60", "--s", "36",
                               "--m", "300", "--seed", "5"])
    assert res.exit_code == 0, res.output


def test_tail_subcommand(runner, tmp_path):
    js = tmp_path / "tail.json"
    res = runner.invoke(main, [
        "tail", "--t", "80", "--thresholds", "1,1.5", "--side", "upper",
        "--m", "100", "--seed", "5", "--out", str(tmp_path / "t.csv"),
        "--json", str(js)])
    assert res.exit_code == 0, res.output
    payload = json.loads(js.read_text())
    assert "upper" in payload["reports"]["tables"]


def test_block_expectation_and_variance_profile(runner):
    res = runner.invoke(main, ["block-expectation", "--ell", "100", "--w", "6",
                               "--m", "10", "--seed", "5"])
    assert res.exit_code == 0
    res2 = runner.invoke(main, ["variance-profile", "--ell", "80",
                                "--ws", "4,8", "--m", "6", "--seed", "5"])
    assert res2.exit_code == 0


def test_omega_subcommand(runner, tmp_path):
    js = tmp_path / "om.json"
    res = runner.invoke(main, ["omega", "--sizes", "30,50", "--m", "5",
                               "--seed", "5", "--json", str(js),
                               "--out", str(tmp_path / "om.csv")])
    assert res.exit_code == 0, res.output
    payload = json.loads(js.read_text())
    assert len(payload["reports"]["per_size"]) == 2
    assert "wilson_low" in payload["reports"]["per_size"][0]["prob"]
