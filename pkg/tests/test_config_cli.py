"""Configuration parsing, the CLI driver, report emission, exit codes."""

import csv
import json

import numpy as np
import pytest

from radineq import ModelManifold, ProfileFamily, materialize
from radineq.cli import main
from radineq.config import (RunConfig, parse_config, parse_manifold_spec,
                            parse_weight)
from radineq.errors import ConfigError, ConvergenceError
from radineq.radial import save_profile
from radineq.runner import RunResult, emit_report, run_suites

SMALL_CONFIG = """\
seed = 0
output = "{out}"
format = "both"
suites = ["bg", "hardy", "hpw"]

[[manifolds]]
kind = "euclidean"
n = 3

[[manifolds]]
kind = "cone"
n = 3
c = 0.5
delta = 1.0

[[corpus]]
family = "gaussian"
alpha = 1.0

[[corpus]]
family = "bump"
R = 1.0
k = 2.0
"""


def test_parse_default_config():
    cfg = RunConfig.default()
    assert len(cfg.manifolds) == 6
    assert len(cfg.corpus) == 5
    assert cfg.suites == ["bg", "ps", "lemmas", "hardy", "hpw", "hs", "ckn",
                          "ibp"]


def test_parse_config_rejects_p_out_of_range():
    text = SMALL_CONFIG.format(out="x") + "\n[params.hardy]\np = [3.0]\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert "1 < p < n" in str(exc.value)


def test_parse_config_collects_all_errors():
    text = """\
suites = ["hardy", "mystery"]
format = "xml"

[[manifolds]]
kind = "torus"
n = 3

[[corpus]]
family = "gaussian"

[params.lemmas]
weights = ["power:oops"]
"""
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    msg = str(exc.value)
    assert "torus" in msg
    assert "mystery" in msg
    assert "xml" in msg


def test_parse_config_requires_sections():
    with pytest.raises(ConfigError) as exc:
        parse_config('suites = ["bg"]')
    msg = str(exc.value)
    assert "manifold" in msg and "corpus" in msg


def test_parse_config_bad_toml():
    with pytest.raises(ConfigError):
        parse_config("this is not toml [[[")


def test_parse_weight():
    assert parse_weight("constant").form == "constant"
    w = parse_weight("power:-2")
    assert w.form == "power" and w.exponent == -2.0
    with pytest.raises(ConfigError):
        parse_weight("power:abc")


def test_parse_manifold_spec():
    m = parse_manifold_spec("euclidean", 3)
    assert m.is_euclidean
    m2 = parse_manifold_spec("cone(0.5,1.0)", 4)
    assert m2.warp.c == 0.5 and m2.n == 4
    with pytest.raises(ConfigError):
        parse_manifold_spec("sphere", 3)


def test_run_suites_and_reports(tmp_path):
    cfg = parse_config(SMALL_CONFIG.format(out=tmp_path / "rep"))
    result = run_suites(cfg)
    assert result.all_passed
    # bg: 2 manifolds; hardy: 2 x 2 x 1; hpw: 2 x 2
    assert len(result.reports) == 2 + 4 + 4
    paths = emit_report(result, cfg.output, cfg.format)
    assert len(paths) == 2

    lines = (tmp_path / "rep.jsonl").read_text().splitlines()
    assert len(lines) == len(result.reports)
    rec = json.loads(lines[0])
    for key in ("name", "manifold", "n", "theta", "constant", "deficit",
                "tolerance", "pass"):
        assert key in rec

    with (tmp_path / "rep.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    pairs = {(r.name, r.manifold) for r in result.reports}
    assert len(rows) == len(pairs)
    assert sum(int(r["count"]) for r in rows) == len(result.reports)


def test_verify_exit_ok_and_deterministic(tmp_path, capsys):
    cfg_path = tmp_path / "run.toml"
    cfg_path.write_text(SMALL_CONFIG.format(out=tmp_path / "a"))
    assert main(["verify", "--config", str(cfg_path)]) == 0
    first = (tmp_path / "a.jsonl").read_bytes()
    summary = json.loads(capsys.readouterr().out)
    assert summary["all_passed"] is True

    assert main(["verify", "--config", str(cfg_path),
                 "--output", str(tmp_path / "b")]) == 0
    second = (tmp_path / "b.jsonl").read_bytes()
    assert first == second


def test_verify_suite_override(tmp_path, capsys):
    cfg_path = tmp_path / "run.toml"
    cfg_path.write_text(SMALL_CONFIG.format(out=tmp_path / "c"))
    assert main(["verify", "--config", str(cfg_path), "--suites", "bg"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["total_reports"] == 2
    assert main(["verify", "--config", str(cfg_path),
                 "--suites", "nope"]) == 2


def test_verify_exit_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("[[manifolds]]\nkind = 'torus'\nn = 3\n")
    assert main(["verify", "--config", str(bad)]) == 2


def test_verify_exit_numerical_error(tmp_path, monkeypatch, capsys):
    import radineq.cli as cli_mod

    def boom(cfg):
        raise ConvergenceError("synthetic divergence")

    monkeypatch.setattr(cli_mod, "run_suites", boom)
    cfg_path = tmp_path / "run.toml"
    cfg_path.write_text(SMALL_CONFIG.format(out=tmp_path / "d"))
    assert main(["verify", "--config", str(cfg_path)]) == 3
    assert "numerical error" in capsys.readouterr().err


def test_verify_exit_inequality_failure(tmp_path, monkeypatch, capsys):
    import radineq.cli as cli_mod
    from radineq.inequalities import InequalityReport

    failing = InequalityReport(
        name="hardy", params={"p": 2.0}, manifold="euclidean(n=3)",
        profile="synthetic", constant=0.25, lhs=1.0, rhs=0.1,
        deficit=-0.15, tolerance=1e-8, passed=False, theta=1.0, n=3)
    result = RunResult(reports=[failing], skipped=[])
    result.summary = {"all_passed": False, "total_reports": 1}

    monkeypatch.setattr(cli_mod, "run_suites", lambda cfg: result)
    cfg_path = tmp_path / "run.toml"
    cfg_path.write_text(SMALL_CONFIG.format(out=tmp_path / "e"))
    assert main(["verify", "--config", str(cfg_path)]) == 1


def test_theta_subcommand(capsys):
    assert main(["theta", "--manifold", "cone(0.5,1.0)", "--n", "3"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["theta"] == pytest.approx(0.25, abs=1e-6)
    assert main(["theta", "--manifold", "euclidean"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["theta"] == 1.0


def test_theta_bad_spec(capsys):
    assert main(["theta", "--manifold", "saddle"]) == 2


def test_rearrange_subcommand(tmp_path, capsys):
    m = ModelManifold.smoothed_cone(3, 0.5, 1.0)
    u = materialize(ProfileFamily("two_bump", {}), m)
    infile = tmp_path / "profile.dat"
    save_profile(u, infile)
    out = tmp_path / "star.dat"
    assert main(["rearrange", "--in", str(infile), "--out", str(out),
                 "--manifold", "cone(0.5,1.0)", "--n", "3"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert out.exists()
    assert rec["equimeasurability_max_rel_err"] <= 1e-3
    data = np.loadtxt(out)
    assert data.shape[1] == 2


def test_estimate_chs_subcommand(capsys):
    assert main(["estimate-chs", "--n", "3", "--p", "2", "--s", "1",
                 "--seed", "0", "--budget", "200", "--restarts", "1"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["bracket_low"] <= rec["value"] <= rec["bracket_high"]
    assert rec["value"] > 0.0


def test_print_default_config(capsys):
    assert main(["verify", "--print-default-config"]) == 0
    text = capsys.readouterr().out
    parse_config(text)  # must round-trip through the parser
