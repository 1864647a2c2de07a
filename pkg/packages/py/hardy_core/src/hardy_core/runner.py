"""Command line front end: verify, alpha, transform, identity, limit-study, suite."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

from .alpha_solver import alpha_closed_p2, solve_alpha
from .config import (
    DEFAULT_CONFIG_PATH,
    DEFAULT_SEED,
    QUAD_TOL,
    load_distribution,
    load_sequence,
    load_step_function,
    load_suite_config,
)
from .dist_core import PNormParam
from .errors import InputError, TrivialRegimeError
from .functionals import (
    VerificationReport,
    eval_classic_integral,
    eval_copson,
    eval_discrete,
    eval_hardy_gt1,
    eval_hardy_lt1,
    eval_p1_bounds,
    hardy_lower_functional,
    quantile_domain_lhs,
)
from .oracle import mc_estimate, power_integral_identity
from .report import emit_json, emit_report, write_csv
from .studies import LIMIT_FIELDNAMES, limit_study, limit_study_integral
from .suite import run_suite
from .transforms import de_atomize, decreasing_rearrangement, stretch_down, stretch_up

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VIOLATED = 2

THEOREM_REGIMES: Dict[str, tuple[str, ...]] = {
    "hardy-gt1": ("gt1",),
    "hardy-lt1": ("lt1",),
    "copson": ("gt1", "lt1", "eq1"),
    "classic-integral-gt1": ("gt1",),
    "classic-integral-lt1": ("lt1",),
    "discrete-gt1": ("gt1",),
    "discrete-lt1": ("lt1",),
    "p1-bounds": ("eq1",),
}
MC_FUNCTIONALS = {"hardy-gt1": "hardy_gt1", "hardy-lt1": "hardy_lt1", "copson": "copson"}
TRANSFORM_KINDS = ("up", "down", "rearrange", "de-atomize-up", "de-atomize-down")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level on stderr.")
    common.add_argument(
        "--out",
        default="",
        help="Output file. Defaults to standard output.",
    )
    return common


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="hardy-verify",
        description="Numerically verify probabilistic Hardy and Copson inequalities.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    verify = subparsers.add_parser("verify", parents=[common], help="Evaluate one inequality.")
    verify.add_argument("--theorem", required=True, choices=sorted(THEOREM_REGIMES))
    verify.add_argument("--dist", default="", help="Distribution JSON file.")
    verify.add_argument("--psi", default="", help="Step function JSON file.")
    verify.add_argument("--seq", default="", help="Sequence JSON file (discrete forms).")
    verify.add_argument("--p", type=float, default=2.0, help="Exponent p (default: 2).")
    verify.add_argument("--quad-tol", type=float, default=QUAD_TOL)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument(
        "--mc-n",
        type=int,
        default=0,
        help="Monte Carlo sample size for the cross-check (0 skips it).",
    )
    verify.add_argument(
        "--direction",
        default="nondecreasing",
        choices=("nondecreasing", "nonincreasing"),
        help="Declared monotonicity of psi for p1-bounds.",
    )

    alpha = subparsers.add_parser("alpha", parents=[common], help="Solve for alpha.")
    alpha.add_argument("--dist", required=True)
    alpha.add_argument("--psi", required=True)
    alpha.add_argument("--p", type=float, default=2.0)

    transform = subparsers.add_parser(
        "transform", parents=[common], help="Rearrange psi or stretch atoms away."
    )
    transform.add_argument("--kind", required=True, choices=TRANSFORM_KINDS)
    transform.add_argument("--dist", default="")
    transform.add_argument("--psi", required=True)
    transform.add_argument("--atom", type=float, default=None, help="Atom location.")
    transform.add_argument("--p", type=float, default=None)

    identity = subparsers.add_parser(
        "identity", parents=[common], help="Check the change-of-variables identities."
    )
    identity.add_argument("--mode", required=True, choices=("quantile", "lower", "tail"))
    identity.add_argument("--dist", required=True)
    identity.add_argument("--psi", required=True)
    identity.add_argument("--p", type=float, default=2.0)
    identity.add_argument("--quad-tol", type=float, default=QUAD_TOL)

    study = subparsers.add_parser(
        "limit-study", parents=[common], help="K-scaled sides as K grows (CSV)."
    )
    study.add_argument("--seq", default="", help="Sequence JSON file.")
    study.add_argument("--psi", default="", help="Step function on (0, inf) for the integral form.")
    study.add_argument("--p", type=float, default=2.0)
    study.add_argument("--K", required=True, help="Comma-separated K values, e.g. 10,100,1000.")

    suite = subparsers.add_parser(
        "suite", parents=[common], help="Run the randomized property suite."
    )
    suite.add_argument(
        "--config",
        default=str(DEFAULT_CONFIG_PATH),
        help="Suite config JSON. Defaults to config/verifier/suite.json.",
    )
    suite.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return parser.parse_args(argv)


def parse_k_values(raw: str) -> List[int]:
    values: List[int] = []
    for item in raw.split(","):
        text = item.strip()
        if not text:
            continue
        try:
            values.append(int(text))
        except ValueError as exc:
            raise InputError(f"K values must be integers, got {text!r}.", field="K") from exc
    if not values:
        raise InputError("--K needs at least one value.", field="K")
    return values


def _output_path(raw: str) -> Path | None:
    if not raw or raw == "-":
        return None
    return Path(raw).expanduser().resolve()


def _require(value: str, flag: str) -> str:
    if not value:
        raise InputError(f"{flag} is required for this command.", field=flag.lstrip("-"))
    return value


def _evaluate(args: argparse.Namespace) -> VerificationReport:
    theorem = args.theorem
    param = PNormParam(args.p)
    if param.regime not in THEOREM_REGIMES[theorem]:
        raise InputError(
            f"--theorem {theorem} does not accept p={args.p!r} (regime {param.regime}).",
            field="p",
        )
    if theorem.startswith("discrete-"):
        seq = load_sequence(_require(args.seq, "--seq"))
        return eval_discrete(seq, param, param.regime, quad_tol=args.quad_tol)  # type: ignore[arg-type]
    psi = load_step_function(_require(args.psi, "--psi"))
    if theorem.startswith("classic-integral-"):
        return eval_classic_integral(psi, param, param.regime, args.quad_tol)  # type: ignore[arg-type]
    d = load_distribution(_require(args.dist, "--dist"))
    evaluators: Dict[str, Callable[..., VerificationReport]] = {
        "hardy-gt1": eval_hardy_gt1,
        "hardy-lt1": eval_hardy_lt1,
        "copson": eval_copson,
    }
    if theorem == "p1-bounds":
        report = eval_p1_bounds(d, psi, args.direction, args.quad_tol)
    else:
        report = evaluators[theorem](d, psi, param, args.quad_tol)
    if args.mc_n > 0:
        estimate = mc_estimate(
            d, psi, param, MC_FUNCTIONALS[theorem], args.seed, args.mc_n  # type: ignore[arg-type]
        )
        agrees = estimate.agrees(report.lhs_unrooted, quad_error=report.quad_error)
        if not agrees:
            print(
                f"Warning: Monte Carlo mean {estimate.mean!r} is more than 4 standard "
                f"errors from the quadrature value {report.lhs_unrooted!r}.",
                file=sys.stderr,
            )
        report = replace(
            report,
            mc=estimate.to_dict(),
            details={**report.details, "mc_agrees": agrees},
        )
    return report


def run_verify(args: argparse.Namespace) -> int:
    if args.mc_n > 0 and args.theorem not in MC_FUNCTIONALS:
        print(f"--mc-n is not available for --theorem {args.theorem}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report = _evaluate(args)
    out_path = _output_path(args.out)
    emit_report(report, out_path)
    if out_path is not None:
        print(f"Wrote report: {out_path}")
    if report.status == "inconclusive":
        print(
            "Warning: the left side is infinite while the bound is finite; "
            "the check is inconclusive.",
            file=sys.stderr,
        )
        return EXIT_OK
    if report.status == "violated":
        print(
            f"Inequality violated: lhs={report.lhs!r} rhs={report.rhs!r} "
            f"margin={report.margin!r}",
            file=sys.stderr,
        )
        return EXIT_VIOLATED
    return EXIT_OK


def run_alpha(args: argparse.Namespace) -> int:
    d = load_distribution(args.dist)
    psi = load_step_function(args.psi)
    result = solve_alpha(d, psi, args.p)
    payload: Dict[str, Any] = dict(result.to_dict())
    if args.p == 2.0:
        payload["alpha_closed_p2"] = alpha_closed_p2(d, psi)
    payload["sharpened_constant"] = result.sharpened_constant
    emit_json(payload, _output_path(args.out))
    return EXIT_OK


def run_transform(args: argparse.Namespace) -> int:
    psi = load_step_function(args.psi)
    out_path = _output_path(args.out)
    if args.kind == "rearrange":
        p = 1.0 if args.p is None else args.p
        emit_json({"kind": "rearrange", "psi": decreasing_rearrangement(psi, p).to_dict()}, out_path)
        return EXIT_OK

    d = load_distribution(_require(args.dist, "--dist"))
    if args.kind in ("up", "down"):
        if args.atom is None:
            raise InputError("--atom is required for --kind up/down.", field="atom")
        stretch = stretch_up if args.kind == "up" else stretch_down
        output = stretch(d, psi, args.atom) if args.p is None else stretch(d, psi, args.atom, args.p)
    else:
        kind = "up" if args.kind == "de-atomize-up" else "down"
        output = de_atomize(d, psi, kind, args.p)  # type: ignore[arg-type]
    emit_json(output.to_dict(), out_path)
    if out_path is not None:
        print(f"Wrote transform: {out_path}")
    return EXIT_OK


def run_identity(args: argparse.Namespace) -> int:
    d = load_distribution(args.dist)
    psi = load_step_function(args.psi)
    if args.mode == "quantile":
        u_domain = quantile_domain_lhs(d, psi, args.p, args.quad_tol)
        x_domain = hardy_lower_functional(d, psi.abs(), PNormParam(args.p).p, args.quad_tol)
        payload = {
            "mode": "quantile",
            "lhs": x_domain.value,
            "rhs": u_domain.value,
            "gap": abs(x_domain.value - u_domain.value),
        }
    else:
        check = power_integral_identity(d, psi, args.p, args.mode, args.quad_tol)
        payload = {"mode": args.mode, **check.to_dict()}
    emit_json(payload, _output_path(args.out))
    return EXIT_OK


def run_limit_study(args: argparse.Namespace) -> int:
    k_values = parse_k_values(args.K)
    param = PNormParam(args.p)
    if args.seq:
        rows = limit_study(load_sequence(args.seq), param, k_values)
    elif args.psi:
        regime = param.require("gt1", "lt1").regime
        rows = limit_study_integral(load_step_function(args.psi), param, k_values, regime)  # type: ignore[arg-type]
    else:
        raise InputError("limit-study needs --seq or --psi.", field="seq")
    out_path = _output_path(args.out)
    write_csv(out_path, [row.to_row() for row in rows], LIMIT_FIELDNAMES)
    if out_path is not None:
        print(f"Wrote limit study: {out_path}")
    return EXIT_OK


def run_suite_command(args: argparse.Namespace) -> int:
    config, source = load_suite_config(args.config)
    print(f"Suite config: {source}", file=sys.stderr)
    result = run_suite(config, args.seed)
    out_path = _output_path(args.out)
    emit_json(result.to_dict(), out_path)
    for check in result.checks:
        if not check.ok:
            print(
                f"Check {check.name} failed {check.failures}/{check.cases} cases.",
                file=sys.stderr,
            )
    return EXIT_OK if result.ok else EXIT_VIOLATED


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "verify": run_verify,
    "alpha": run_alpha,
    "transform": run_transform,
    "identity": run_identity,
    "limit-study": run_limit_study,
    "suite": run_suite_command,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for violations.
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT_ERROR
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)
    try:
        if getattr(args, "quad_tol", QUAD_TOL) <= 0.0:
            raise InputError("--quad-tol must be positive.", field="quad_tol")
        if getattr(args, "seed", DEFAULT_SEED) < 0:
            raise InputError("--seed must be a nonnegative integer.", field="seed")
        return COMMANDS[args.command](args)
    except InputError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"Input error{where}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except TrivialRegimeError as exc:
        print(f"Trivially satisfied: {exc}", file=sys.stderr)
        return EXIT_OK
    except FileNotFoundError as exc:
        print(f"Input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"Output error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
