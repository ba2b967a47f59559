"""Command-line entry point ``sce-lab``."""

from __future__ import annotations

import argparse
import json
import sys

from . import verify
from .coeffs import load_or_build_gl2
from .errors import ConfigError, NumericalInconsistency, QuadratureFailure, ShiftConvError
from .lab import ExperimentConfig, fit_exponent, munshi_decomposition_experiment, sweep_csv, sweep_experiment, tables_for

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3, 4


def _cmd_coeffs(args) -> int:
    table = load_or_build_gl2(args.bound, args.coeff_cache)
    print(json.dumps({"bound": table.bound, "weight": table.weight, "cache": args.coeff_cache}))
    return EXIT_OK


def _reports(target: str, exhaustive: bool):
    if target == "delta":
        return [verify.verify_delta()]
    if target == "charsum":
        if exhaustive:
            return [verify.verify_c_sum(), verify.verify_curly_t(), verify.verify_weil()]
        return [verify.verify_c_sum(cmax=20), verify.verify_curly_t(bmax=6, r0m0_max=2), verify.verify_weil(cmax=100, per_c=50)]
    if target == "voronoi":
        return [verify.verify_voronoi(all_units=exhaustive)]
    if target == "hyperbola":
        grid = verify.hyperbola_grid()
        return [verify.verify_hyperbola(configs=grid if exhaustive else grid[::4])]
    if target == "ssplit":
        if exhaustive:
            return verify.verify_ssplit()
        return [verify.verify_split_exact(), verify.verify_split_simplified(q1s=(1,), signs=(1,))]
    raise ConfigError(f"unknown verification target {target!r}")


def _cmd_verify(args) -> int:
    reports = _reports(args.target, args.exhaustive)
    for rep in reports:
        print(rep.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def _gl2_for(args, cfg):
    gl2 = None
    if args.coeff_cache:
        from pathlib import Path

        if Path(args.coeff_cache).exists():
            from .coeffs import read_coeff_cache

            gl2 = read_coeff_cache(args.coeff_cache)
    return tables_for(cfg, gl2)


def _cmd_sum(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    records = sweep_experiment(cfg, _gl2_for(args, cfg), write=False)
    sys.stdout.write(sweep_csv(records))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    records = sweep_experiment(cfg, _gl2_for(args, cfg))
    summary = {"output": cfg.output_path, "records": len(records)}
    if len(records) >= 4 and all(abs(r.D_aH) > 0 for r in records):
        summary["slope"], summary["stderr"] = fit_exponent(records)
        summary["majorant_slope"], _ = fit_exponent(records, lambda r: r.abs_majorant)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _cmd_munshi(args) -> int:
    report = munshi_decomposition_experiment(args.ell, args.X, args.delta, eps=args.eps)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sce-lab", description="Shifted convolution sums: identity checks and experiments.")
    parser.add_argument("--coeff-cache", metavar="PATH", help="binary cache of GL(2) coefficients")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="coefficient tables")
    p.add_argument("action", choices=["build"])
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--coeff-cache", metavar="PATH", dest="coeff_cache_sub")
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("verify", help="run an identity verification")
    p.add_argument("target", choices=["delta", "charsum", "voronoi", "hyperbola", "ssplit"])
    p.add_argument("--exhaustive", action="store_true", help="full acceptance ranges")
    p.set_defaults(func=_cmd_verify)

    for name, func, text in (("sum", _cmd_sum, "evaluate the sums of a config and print CSV"), ("sweep", _cmd_sweep, "run a sweep and write CSV")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("munshi", help="moduli decomposition experiment")
    p.add_argument("--X", type=float, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.1)
    p.set_defaults(func=_cmd_munshi)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "coeff_cache_sub", None):
        args.coeff_cache = args.coeff_cache_sub
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureFailure, NumericalInconsistency) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ShiftConvError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
