"""Command line driver.

Subcommands:
  verify        run verification suites from a config (default: shipped catalog)
  theta         asymptotic volume ratio of a manifold spec
  rearrange     Euclidean rearrangement of a tabulated profile
  estimate-chs  Rayleigh-quotient estimate of the Hardy-Sobolev constant

Exit codes: 0 pass, 1 inequality failure, 2 config error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import DEFAULT_CONFIG_TOML, RunConfig, parse_config, \
    parse_manifold_spec
from .constants import estimate_chs
from .errors import ConfigError, RadineqError
from .rearrange import distribution, euclidean_counterpart, rearrange
from .radial import load_profile, save_profile
from .runner import emit_report, run_suites

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radineq",
        description="Verify sharp functional inequalities on rotationally "
                    "symmetric model manifolds.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run verification suites")
    verify.add_argument("--config", type=Path, default=None,
                        help="TOML run configuration (default: shipped catalog)")
    verify.add_argument("--suites", type=str, default=None,
                        help="Comma-separated suite override (e.g. hardy,hpw or all)")
    verify.add_argument("--output", type=str, default=None,
                        help="Output base path override")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--print-default-config", action="store_true",
                        help="Print the shipped default config and exit")

    theta = sub.add_parser("theta", help="Asymptotic volume ratio of a model")
    theta.add_argument("--manifold", required=True,
                       help="'euclidean' or 'cone(c,delta)'")
    theta.add_argument("--n", type=int, default=3)

    rearr = sub.add_parser("rearrange", help="Euclidean rearrangement of a profile")
    rearr.add_argument("--in", dest="infile", required=True, type=Path,
                       help="Two-column (r, u) input file")
    rearr.add_argument("--out", dest="outfile", type=Path, default=None,
                       help="Output file for u* (default: <in>.star)")
    rearr.add_argument("--manifold", required=True,
                       help="'euclidean' or 'cone(c,delta)'")
    rearr.add_argument("--n", type=int, default=3)

    chs = sub.add_parser("estimate-chs",
                         help="Estimate the sharp Hardy-Sobolev constant")
    chs.add_argument("--n", type=int, required=True)
    chs.add_argument("--p", type=float, required=True)
    chs.add_argument("--s", type=float, required=True)
    chs.add_argument("--seed", type=int, default=0)
    chs.add_argument("--budget", type=int, default=2000)
    chs.add_argument("--restarts", type=int, default=5)
    return parser


def _cmd_verify(args) -> int:
    if args.print_default_config:
        print(DEFAULT_CONFIG_TOML, end="")
        return EXIT_OK
    if args.config is not None:
        cfg = parse_config(args.config.read_text())
    else:
        cfg = RunConfig.default()
    if args.suites:
        text = args.suites
        override = ("suites = [" +
                    ", ".join(f'"{s.strip()}"' for s in text.split(",")) + "]")
        # revalidate the suite list through the config parser
        from .config import SUITES
        names = [s.strip() for s in text.split(",")]
        if names == ["all"] or "all" in names:
            names = list(SUITES)
        unknown = [s for s in names if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites: {', '.join(unknown)}")
        cfg.suites = names
        del override
    if args.output:
        cfg.output = args.output
    if args.seed is not None:
        cfg.seed = args.seed

    result = run_suites(cfg)
    paths = emit_report(result, cfg.output, cfg.format)
    print(json.dumps(result.summary, indent=2, sort_keys=True))
    for p in paths:
        print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK if result.all_passed else EXIT_FAIL


def _cmd_theta(args) -> int:
    m = parse_manifold_spec(args.manifold, args.n)
    print(json.dumps({"manifold": args.manifold, "n": m.n, "theta": m.avr()}))
    return EXIT_OK


def _cmd_rearrange(args) -> int:
    m = parse_manifold_spec(args.manifold, args.n)
    u = load_profile(args.infile)
    star = rearrange(u, m)
    out = args.outfile or args.infile.with_suffix(args.infile.suffix + ".star")
    save_profile(star, out)

    d_m = distribution(u, m, n_t=128)
    d_e = distribution(star, euclidean_counterpart(m), t_nodes=d_m.t_nodes)
    denom = np.maximum(np.abs(d_m.mu_values), 1e-300)
    rel = np.abs(d_e.mu_values - d_m.mu_values) / denom
    mask = d_m.mu_values > 1e-6 * float(np.max(d_m.mu_values))
    report = {
        "input": str(args.infile),
        "output": str(out),
        "manifold": args.manifold,
        "n": m.n,
        "theta": m.avr(),
        "support_radius": star.support_radius,
        "equimeasurability_max_rel_err": float(np.max(rel[mask])) if mask.any() else 0.0,
    }
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _cmd_estimate_chs(args) -> int:
    est = estimate_chs(args.n, args.p, args.s, seed=args.seed,
                       budget=args.budget, restarts=args.restarts)
    print(json.dumps(est.to_dict(), indent=2))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "verify": _cmd_verify,
        "theta": _cmd_theta,
        "rearrange": _cmd_rearrange,
        "estimate-chs": _cmd_estimate_chs,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RadineqError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
