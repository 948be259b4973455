"""Command-line entry point ``fmipsd``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 domain or
infinite-divergence error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .dist import JointDistribution
from .errors import (BudgetExhausted, DeltaNotPSD, DistributionError, DomainError,
                     InadmissibleFamily, InfiniteDivergence, NotDifferentiable, NotSymmetric,
                     NumericUnstable, RadiusExceeded, ShapeMismatch, TooLarge, UnknownGenerator)
from .fmi import mi_matrix, psd_check
from .forcing import assemble_block, delta_matrix, kernel_matrix
from .generators import NUMERIC_MAX_ORDER, classify, from_spec
from .latent import PAPER_PRESET, PRESETS, LatentFamily, get_preset
from .search import SearchConfig, SearchLog, find_counterexample
from .taylor import coefficient_table
from .verify import format_table, timed_checks

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3

INPUT_ERRORS = (UnknownGenerator, DistributionError, ShapeMismatch, NotSymmetric,
                InadmissibleFamily, TooLarge, json.JSONDecodeError, OSError, KeyError,
                ValueError, TypeError)
DOMAIN_ERRORS = (DomainError, InfiniteDivergence, RadiusExceeded, DeltaNotPSD,
                 NotDifferentiable, NumericUnstable)


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _round(obj):
    """Floats to 12 significant digits, recursively; non-finite floats become strings."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}") if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.generic):
        return _round(obj.item())
    return obj


def emit(payload) -> None:
    json.dump(_round(payload), sys.stdout, indent=2)
    sys.stdout.write("\n")


def _generator(spec):
    try:
        return from_spec(spec)
    except json.JSONDecodeError as exc:
        raise CLIError(f"--generator is not valid JSON: {exc}", EXIT_INPUT) from exc


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _family(args) -> LatentFamily:
    if args.family and args.preset:
        raise CLIError("give either --family or --preset, not both", EXIT_INPUT)
    if args.family:
        return LatentFamily.from_dict(_read_json(args.family))
    if args.preset is None:
        raise CLIError("latent needs --family or --preset", EXIT_INPUT)
    if args.preset not in PRESETS:
        raise CLIError(f"unknown preset {args.preset!r}; known: {sorted(PRESETS)}", EXIT_INPUT)
    return get_preset(args.preset, loading_scale=args.loading_scale)


# commands


def cmd_classify(args) -> int:
    f = _generator(args.generator)
    verdict = classify(f, args.order, args.tol)
    out = {"generator": f.to_spec(), "verdict": verdict.to_dict()}
    if args.with_kernel is not None:
        out["kernel"] = coefficient_table(f, args.with_kernel, args.kernel_order).to_dict()
    emit(out)
    return EXIT_OK


def cmd_matrix(args) -> int:
    j = JointDistribution.load(args.dist)
    M = mi_matrix(j, _generator(args.generator))
    emit(psd_check(M, args.tau).to_dict() if args.psd else {"matrix": M.tolist()})
    return EXIT_OK


def cmd_psd_check(args) -> int:
    data = _read_json(args.matrix)
    matrix = data["matrix"] if isinstance(data, dict) else data
    emit(psd_check(np.asarray(matrix, dtype=float), args.tau).to_dict())
    return EXIT_OK


def cmd_latent(args) -> int:
    fam = _family(args)
    f = _generator(args.generator)
    if args.what == "kernel":
        report = psd_check(kernel_matrix(f, fam), args.tau)
    elif args.what == "delta":
        report = psd_check(delta_matrix(f, fam), args.tau)
    else:
        if args.replicas < 1:
            raise CLIError("--replicas must be at least 1", EXIT_INPUT)
        B = assemble_block(kernel_matrix(f, fam), delta_matrix(f, fam), args.replicas)
        report = psd_check(B, args.tau)
    emit(report.to_dict())
    return EXIT_OK


def _search_config(args) -> SearchConfig:
    base = SearchConfig.from_dict(_read_json(args.config)) if args.config else SearchConfig()
    seed = args.seed
    if seed is None:
        env = os.environ.get("FMI_SEED")
        seed = int(env) if env not in (None, "") else base.seed
    overrides = {"seed": seed}
    for name in ("n_max", "n_random", "R_max", "delta", "order"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.a_grid:
        overrides["a_grid"] = tuple(args.a_grid)
    return SearchConfig.from_dict({**base.to_dict(), **overrides})


def cmd_counterexample(args) -> int:
    f = _generator(args.generator)
    cfg = _search_config(args)
    log = SearchLog()
    try:
        cert = find_counterexample(f, cfg, log)
    except BudgetExhausted as exc:
        emit({"outcome": "budget-exhausted", "generator": f.to_spec(),
              "verdict": classify(f, cfg.order).to_dict(),
              "best_lambda_min": exc.best_lambda_min, "best_family": log.best_provenance,
              "evaluated": exc.evaluated, "config": cfg.to_dict()})
        return EXIT_OK
    if cert is None:
        emit({"outcome": "absent", "generator": f.to_spec(),
              "verdict": classify(f, cfg.order).to_dict(), "config": cfg.to_dict()})
        return EXIT_OK
    emit({"outcome": "certificate", "evaluated": log.evaluated, "certificate": cert.to_dict()})
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    rows, elapsed = timed_checks(args.loading_scale)
    if args.json:
        emit({"rows": [r.to_dict() for r in rows], "elapsed_seconds": elapsed,
              "passed": all(r.passed for r in rows)})
    else:
        print(format_table(rows, elapsed))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fmipsd",
        description="f-divergence mutual-information matrices and their positive semidefiniteness.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    gen_help = ("catalog name (kl, chi2, tv, ...) or inline JSON such as "
                '\'{"name": "cressie-read", "alpha": 0.5}\'')

    p = sub.add_parser("classify", help="Taylor-coefficient verdict for a generator")
    p.add_argument("--generator", required=True, help=gen_help)
    p.add_argument("--order", type=int, default=NUMERIC_MAX_ORDER)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--with-kernel", type=float, default=None, metavar="A",
                   help="also tabulate predicted vs fitted kernel coefficients at bias A")
    p.add_argument("--kernel-order", type=int, default=8)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("matrix", help="f-MI matrix of a JSON distribution")
    p.add_argument("--dist", required=True)
    p.add_argument("--generator", required=True, help=gen_help)
    p.add_argument("--psd", action="store_true", help="emit a full PSD report")
    p.add_argument("--tau", type=float, default=None)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("psd-check", help="PSD report for a JSON matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--tau", type=float, default=None)
    p.set_defaults(func=cmd_psd_check)

    p = sub.add_parser("latent", help="kernel, diagonal correction or replica block of a latent family")
    p.add_argument("what", choices=("kernel", "delta", "block"))
    p.add_argument("--family", help="JSON family file")
    p.add_argument("--preset", default=None, help=f"named family (e.g. {PAPER_PRESET})")
    p.add_argument("--loading-scale", type=float, default=1.0)
    p.add_argument("--generator", required=True, help=gen_help)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--tau", type=float, default=None)
    p.set_defaults(func=cmd_latent)

    p = sub.add_parser("counterexample", help="search for an indefinite replica block")
    p.add_argument("--generator", required=True, help=gen_help)
    p.add_argument("--config", help="JSON search configuration")
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--n-random", dest="n_random", type=int)
    p.add_argument("--r-max", dest="R_max", type=int)
    p.add_argument("--a-grid", type=float, nargs="+")
    p.add_argument("--order", type=int)
    p.add_argument("--delta", type=float, help="cap the family dependence radius")
    p.add_argument("--seed", type=int, help="overrides FMI_SEED")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify-paper", help="recompute the worked-example numbers")
    p.add_argument("--loading-scale", type=float, default=1.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"fmipsd: {exc}", file=sys.stderr)
        return exc.code
    except DOMAIN_ERRORS as exc:
        print(f"fmipsd: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except INPUT_ERRORS as exc:
        print(f"fmipsd: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
