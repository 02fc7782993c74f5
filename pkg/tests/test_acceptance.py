"""Acceptance gate: one test per criterion, each printing PASS or FAIL.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the criterion
lines; every criterion also carries its runtime budget.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from radineq import (ModelManifold, ProfileFamily, materialize, rearrange,
                     rayleigh_quotient)
from radineq.config import RunConfig
from radineq.constants import estimate_chs, hardy_constant
from radineq.functionals import lp_norm
from radineq.runner import run_suites

CATALOG = [ModelManifold.euclidean(3), ModelManifold.euclidean(4),
           ModelManifold.smoothed_cone(3, 0.5, 1.0),
           ModelManifold.smoothed_cone(4, 0.5, 1.0),
           ModelManifold.smoothed_cone(3, 0.8, 1.0),
           ModelManifold.smoothed_cone(4, 0.8, 1.0)]


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"\n[criterion {num:2d}] {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def _suite_config(*suites) -> RunConfig:
    cfg = RunConfig.default()
    cfg.suites = list(suites)
    return cfg


def test_criterion_01_euclidean_self_consistency():
    t0 = time.perf_counter()
    families = [ProfileFamily("gaussian", {"alpha": 1.0}),
                ProfileFamily("bump", {"R": 1.0, "k": 2.0}),
                ProfileFamily("talenti", {"p": 2.0, "R": 20.0})]
    worst_id, worst_norm = 0.0, 0.0
    for n in (3, 4):
        m = ModelManifold.euclidean(n)
        for fam in families:
            u = materialize(fam, m)
            star = rearrange(u, m)
            r = np.linspace(0.0, 1.2 * u.support_radius, 3000)
            worst_id = max(worst_id,
                           float(np.max(np.abs(star(r) - np.abs(u(r))))))
            for p in (1.0, 1.5, 2.0, 3.0):
                a = lp_norm(u, m, p).value
                b = lp_norm(star, m, p).value
                worst_norm = max(worst_norm, abs(b / a - 1.0))
    dt = time.perf_counter() - t0
    ok = worst_id <= 1e-8 and worst_norm <= 1e-6 and dt < 5.0
    _verdict(1, ok, f"identity sup err {worst_id:.2e}, worst norm rel "
                    f"{worst_norm:.2e}, {dt:.2f}s")


def test_criterion_02_hpw_equality():
    t0 = time.perf_counter()
    m = ModelManifold.euclidean(3)
    u = materialize(ProfileFamily("gaussian", {"alpha": 1.0}), m)
    q = rayleigh_quotient(u, m, "hpw")
    rel = abs(q / 2.25 - 1.0)
    dt = time.perf_counter() - t0
    ok = rel <= 1e-6 and dt < 1.0
    _verdict(2, ok, f"gaussian HPW quotient {q:.10f} (rel err {rel:.2e}), "
                    f"{dt:.2f}s")


def test_criterion_03_hardy_sharpness():
    t0 = time.perf_counter()
    eps = 2e-7
    details = []
    ok = True
    for n, p in ((3, 2.0), (4, 2.0), (5, 3.0)):
        m = ModelManifold.euclidean(n, r_max=2.2e7, quad_r_min=1e-9)
        beta = (n - p) / p
        u = materialize(ProfileFamily("hardy_near_extremal",
                                      {"beta": beta, "eps": eps}), m)
        q = rayleigh_quotient(u, m, "hardy", p=p)
        c = hardy_constant(n, p)
        excess = q / c - 1.0
        details.append(f"(n={n},p={p:g}) excess {excess:.3%}")
        ok = ok and (-1e-8 <= excess <= 0.05)
    dt = time.perf_counter() - t0
    ok = ok and dt < 10.0
    _verdict(3, ok, "; ".join(details) + f", {dt:.2f}s")


def test_criterion_04_polya_szego_suite():
    t0 = time.perf_counter()
    result = run_suites(_suite_config("ps"))
    worst = 0.0
    for rep in result.reports:
        worst = min(worst, rep.deficit / max(abs(rep.rhs), 1e-300))
    dt = time.perf_counter() - t0
    ok = (len(result.reports) == 90 and result.all_passed
          and worst >= -1e-8 and dt < 60.0)
    _verdict(4, ok, f"{len(result.reports)} tuples, worst relative deficit "
                    f"{worst:.2e}, {dt:.1f}s")


def test_criterion_05_lemma_suite():
    t0 = time.perf_counter()
    result = run_suites(_suite_config("lemmas"))
    worst_eq = 0.0
    for rep in result.reports:
        if rep.params.get("weight") == "constant":
            scale = max(abs(rep.rhs), abs(rep.lhs), 1e-300)
            worst_eq = max(worst_eq, abs(rep.deficit) / scale)
    dt = time.perf_counter() - t0
    ok = (len(result.reports) == 120 and result.all_passed
          and worst_eq <= 1e-6 and dt < 60.0)
    _verdict(5, ok, f"{len(result.reports)} tuples all passed, constant-"
                    f"weight equality err {worst_eq:.2e}, {dt:.1f}s")


def test_criterion_06_theorem_suites():
    t0 = time.perf_counter()
    result = run_suites(_suite_config("hardy", "hpw", "hs", "ckn"))
    counts = {}
    for rep in result.reports:
        counts[rep.name] = counts.get(rep.name, 0) + 1
    dt = time.perf_counter() - t0
    expected = {"hardy": 30, "hpw": 30, "hardy_sobolev": 90, "ckn": 270}
    ok = counts == expected and result.all_passed and dt < 300.0
    _verdict(6, ok, f"counts {counts}, failures "
                    f"{sum(not r.passed for r in result.reports)}, {dt:.1f}s")


def test_criterion_07_ckn_ibp_identity():
    t0 = time.perf_counter()
    from radineq.inequalities import ckn_ibp_check
    worst = 0.0
    worst_cf = 0.0
    for m in CATALOG:
        u = materialize(ProfileFamily("annulus", {"a": 1.5, "w": 0.5}), m)
        for a in (0.0, 0.2, 0.4):
            rep = ckn_ibp_check(u, m, a=a)
            worst = max(worst, rep.extra["relative_mismatch"])
            if m.is_euclidean:
                worst_cf = max(worst_cf,
                               rep.extra["closed_form_rel_mismatch"])
            assert rep.passed
    dt = time.perf_counter() - t0
    ok = worst < 1e-6 and worst_cf < 1e-6 and dt < 10.0
    _verdict(7, ok, f"worst mismatch {worst:.2e}, Euclidean closed-form "
                    f"mismatch {worst_cf:.2e}, {dt:.1f}s")


def test_criterion_08_avr_and_bishop_gromov():
    t0 = time.perf_counter()
    worst = 0.0
    for c in (0.5, 0.8):
        for delta in (0.5, 1.0, 2.0):
            for n in (3, 4, 5):
                m = ModelManifold.smoothed_cone(n, c, delta)
                worst = max(worst, abs(m.avr() - c ** (n - 1)))
    monotone = True
    for m in CATALOG:
        r = np.geomspace(1e-3 * m.r_max, m.r_max, 200)
        ratios = np.asarray(m.volume_ratio(r))
        monotone = monotone and bool(np.all(np.diff(ratios) <= 1e-9))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and monotone and dt < 5.0
    _verdict(8, ok, f"worst AVR err {worst:.2e}, Bishop-Gromov monotone: "
                    f"{monotone}, {dt:.1f}s")


def test_criterion_09_constant_estimation():
    t0 = time.perf_counter()
    hardy_est = estimate_chs(3, 2.0, 2.0)
    hardy_rel = abs(hardy_est.value / 0.25 - 1.0)
    sobolev_oracle = 3.0 * 1.0 * math.pi \
        * (math.gamma(1.5) / math.gamma(3.0)) ** (2.0 / 3.0)
    sob_est = estimate_chs(3, 2.0, 0.0)
    sob_rel = abs(sob_est.value / sobolev_oracle - 1.0)
    rerun = estimate_chs(3, 2.0, 2.0)
    deterministic = (rerun.value == hardy_est.value
                     and rerun.bracket == hardy_est.bracket)
    dt = time.perf_counter() - t0
    ok = hardy_rel <= 0.01 and sob_rel <= 0.01 and deterministic and dt < 60.0
    _verdict(9, ok, f"hardy end rel err {hardy_rel:.2%}, sobolev end rel "
                    f"err {sob_rel:.2%}, deterministic: {deterministic}, "
                    f"{dt:.1f}s")


def test_criterion_10_end_to_end(tmp_path):
    cmd = [sys.executable, "-m", "radineq.cli", "verify", "--suites", "all"]
    first = subprocess.run(cmd + ["--output", str(tmp_path / "a")],
                           capture_output=True, text=True)
    second = subprocess.run(cmd + ["--output", str(tmp_path / "b")],
                            capture_output=True, text=True)
    ok = first.returncode == 0 and second.returncode == 0
    lines = (tmp_path / "a.jsonl").read_bytes() if ok else b""
    n_reports = lines.count(b"\n")
    # completeness over the default 6-manifold, 5-family catalog:
    # bg 6 + ps 6*5*3 + lemmas 6*5*4 + hardy 6*5 + hpw 6*5
    # + hs 6*5*3 + ckn 6*5*9 + ibp 6*3
    expected = 6 + 90 + 120 + 30 + 30 + 90 + 270 + 18
    identical = ok and lines == (tmp_path / "b.jsonl").read_bytes() \
        and (tmp_path / "a.csv").read_bytes() == \
            (tmp_path / "b.csv").read_bytes()
    summary = json.loads(first.stdout) if ok else {}
    ok = (ok and n_reports == expected and identical
          and summary.get("all_passed") is True)
    _verdict(10, ok, f"exit codes ({first.returncode}, {second.returncode}), "
                     f"{n_reports}/{expected} reports, byte-identical rerun: "
                     f"{identical}")
