"""Batch execution of verification suites with deterministic reporting."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .config import RunConfig, parse_weight
from .errors import ParameterError
from .inequalities import (CknParams, HsParams, InequalityReport,
                           bishop_gromov_check, ckn_ibp_check, ckn_check,
                           hardy_check, hardy_sobolev_check, hpw_check,
                           polya_szego_check, sym_lemma_check)
from .constants import ckn_admissible_a_max
from .manifold import ModelManifold
from .radial import ProfileFamily, RadialProfile, materialize
from .rearrange import rearrange

__all__ = ["RunResult", "run_suites", "emit_report"]


@dataclass
class RunResult:
    reports: list[InequalityReport]
    skipped: list[dict]
    summary: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.reports)


class _Cache:
    """Per-run memo of materialized profiles and rearrangements."""

    def __init__(self) -> None:
        self.profiles: dict = {}
        self.stars: dict = {}

    def profile(self, fam: ProfileFamily, m: ModelManifold,
                fi: int, mi: int) -> RadialProfile:
        key = (fi, mi)
        if key not in self.profiles:
            self.profiles[key] = materialize(fam, m)
        return self.profiles[key]

    def star(self, u: RadialProfile, m: ModelManifold,
             fi: int, mi: int) -> RadialProfile:
        key = (fi, mi)
        if key not in self.stars:
            self.stars[key] = rearrange(u, m)
        return self.stars[key]


def run_suites(cfg: RunConfig) -> RunResult:
    """Execute every (suite, manifold, corpus, params) tuple in stable order.

    Precondition-violating tuples are skipped with a logged reason; a suite
    whose tuples are all skipped raises."""
    reports: list[InequalityReport] = []
    skipped: list[dict] = []
    cache = _Cache()

    for suite in cfg.suites:
        before = len(reports)
        sp = cfg.suite_params(suite)
        tol_override = cfg.tolerances.get(suite)
        for mi, m in enumerate(cfg.manifolds):
            if suite == "bg":
                reports.append(bishop_gromov_check(m))
                continue
            if suite == "ibp":
                fam = ProfileFamily("annulus", {"a": 1.5, "w": 0.5})
                u = materialize(fam, m)
                for a in sp["a"]:
                    reports.append(ckn_ibp_check(u, m, a=a))
                continue
            for fi, fam in enumerate(cfg.corpus):
                u = cache.profile(fam, m, fi, mi)
                for rep in _corpus_suite(suite, sp, cfg, cache, u, m, fi, mi,
                                         skipped):
                    if tol_override is not None:
                        scale = max(abs(rep.rhs), abs(rep.constant * rep.lhs))
                        rep.tolerance = max(rep.tolerance, tol_override * scale)
                        rep.passed = bool(rep.deficit >= -rep.tolerance)
                    reports.append(rep)
        if len(reports) == before:
            raise ParameterError(
                f"suite {suite!r}: every tuple was precondition-filtered")

    result = RunResult(reports=reports, skipped=skipped)
    result.summary = _summarize(result, cfg)
    return result


def _corpus_suite(suite, sp, cfg, cache, u, m, fi, mi, skipped):
    def skip(reason, **params):
        skipped.append({"suite": suite, "manifold": mi, "profile": u.family,
                        "params": params, "reason": reason})

    if suite == "ps":
        star = cache.star(u, m, fi, mi)
        for p in sp["p"]:
            yield polya_szego_check(u, m, p=p, u_star=star)
    elif suite == "lemmas":
        star = cache.star(u, m, fi, mi)
        for p in sp["p"]:
            for wtext in sp["weights"]:
                w = parse_weight(wtext)
                yield sym_lemma_check(u, m, w, p=p, u_star=star)
    elif suite == "hardy":
        for p in sp["p"]:
            if not (1.0 < p < m.n):
                skip(f"Hardy requires 1 < p < n = {m.n}", p=p)
                continue
            yield hardy_check(u, m, p=p)
    elif suite == "hpw":
        yield hpw_check(u, m)
    elif suite == "hs":
        for p in sp["p"]:
            if not (1.0 < p < m.n):
                skip(f"Hardy-Sobolev requires 1 < p < n = {m.n}", p=p)
                continue
            for sf in sp["s_frac"]:
                hs = HsParams(p=p, s=sf * p)
                yield hardy_sobolev_check(u, m, hs, seed=cfg.seed,
                                          budget=cfg.chs_budget,
                                          restarts=cfg.chs_restarts)
    elif suite == "ckn":
        theta = m.avr()
        a_max = ckn_admissible_a_max(m.n, theta)
        for af in sp["a_frac"]:
            a = af * a_max
            if not a < a_max - 1e-12:
                skip(f"CKN requires a < {a_max:.6g}", a=a)
                continue
            for db in sp["db"]:
                ck = CknParams(a=a, b=a + db)
                yield ckn_check(u, m, ck, seed=cfg.seed,
                                budget=cfg.chs_budget,
                                restarts=cfg.chs_restarts)
    else:
        raise ParameterError(f"unknown suite {suite!r}")


def _summarize(result: RunResult, cfg: RunConfig) -> dict:
    per_suite: dict = {}
    for rep in result.reports:
        entry = per_suite.setdefault(rep.name, {
            "count": 0, "passed": 0, "failed": 0, "worst_deficit": None})
        entry["count"] += 1
        entry["passed" if rep.passed else "failed"] += 1
        scale = max(abs(rep.rhs), abs(rep.constant * rep.lhs), 1e-300)
        rel = rep.deficit / scale
        if entry["worst_deficit"] is None or rel < entry["worst_deficit"]:
            entry["worst_deficit"] = rel
    return {
        "suites": per_suite,
        "total_reports": len(result.reports),
        "total_skipped": len(result.skipped),
        "all_passed": result.all_passed,
        "seed": cfg.seed,
    }


def emit_report(result: RunResult, output: str, fmt: str = "both") -> list[Path]:
    """Write jsonl (one report per line) and/or a CSV summary table."""
    written: list[Path] = []
    base = Path(output)
    if fmt in ("jsonl", "both"):
        path = base.with_suffix(".jsonl")
        with path.open("w", encoding="utf-8") as fh:
            for rep in result.reports:
                fh.write(json.dumps(rep.to_dict(), separators=(",", ":")))
                fh.write("\n")
        written.append(path)
    if fmt in ("csv", "both"):
        path = base.with_suffix(".csv")
        rows: dict = {}
        for rep in result.reports:
            key = (rep.name, rep.manifold)
            row = rows.setdefault(key, {
                "suite": rep.name, "manifold": rep.manifold, "n": rep.n,
                "theta": rep.theta, "count": 0, "passed": 0,
                "worst_deficit": None})
            row["count"] += 1
            row["passed"] += int(rep.passed)
            scale = max(abs(rep.rhs), abs(rep.constant * rep.lhs), 1e-300)
            rel = rep.deficit / scale
            if row["worst_deficit"] is None or rel < row["worst_deficit"]:
                row["worst_deficit"] = rel
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=[
                "suite", "manifold", "n", "theta", "count", "passed",
                "worst_deficit"])
            writer.writeheader()
            for key in sorted(rows):
                writer.writerow(rows[key])
        written.append(path)
    return written
