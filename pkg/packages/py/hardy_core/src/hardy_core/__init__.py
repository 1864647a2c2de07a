"""Numerical verification of probabilistic Hardy and Copson inequalities."""

from .alpha_solver import AlphaResult, alpha_closed_p2, solve_alpha, solve_alpha_moments
from .config import (
    DEFAULT_CONFIG_PATH,
    QUAD_TOL,
    load_distribution,
    load_sequence,
    load_step_function,
    load_suite_config,
)
from .dist_core import (
    Atom,
    Cell,
    Distribution,
    PNormParam,
    Segment,
    StepFunction,
    cdf,
    compose_quantile,
    integrate,
    quantile,
    quantile_cells,
    sample,
)
from .errors import DomainError, InputError, PreconditionError, TrivialRegimeError
from .functionals import (
    SequenceInput,
    VerificationReport,
    classic_proof_identity,
    decreasing_bound_chain,
    eval_classic_integral,
    eval_copson,
    eval_discrete,
    eval_hardy_gt1,
    eval_hardy_lt1,
    eval_p1_bounds,
    quantile_domain_lhs,
)
from .oracle import (
    McEstimate,
    dkw_check,
    exact_discrete_eval,
    mc_estimate,
    power_integral_identity,
)
from .report import emit_report
from .runner import main, parse_args
from .studies import LimitRow, limit_study, limit_study_integral
from .transforms import (
    TransformOutput,
    de_atomize,
    decreasing_rearrangement,
    partial_average,
    stretch_down,
    stretch_up,
    unit_norm,
)

__all__ = [
    "AlphaResult",
    "Atom",
    "Cell",
    "DEFAULT_CONFIG_PATH",
    "Distribution",
    "DomainError",
    "InputError",
    "LimitRow",
    "McEstimate",
    "PNormParam",
    "PreconditionError",
    "QUAD_TOL",
    "Segment",
    "SequenceInput",
    "StepFunction",
    "TransformOutput",
    "TrivialRegimeError",
    "VerificationReport",
    "alpha_closed_p2",
    "cdf",
    "classic_proof_identity",
    "compose_quantile",
    "de_atomize",
    "decreasing_bound_chain",
    "decreasing_rearrangement",
    "dkw_check",
    "emit_report",
    "eval_classic_integral",
    "eval_copson",
    "eval_discrete",
    "eval_hardy_gt1",
    "eval_hardy_lt1",
    "eval_p1_bounds",
    "exact_discrete_eval",
    "integrate",
    "limit_study",
    "limit_study_integral",
    "load_distribution",
    "load_sequence",
    "load_step_function",
    "load_suite_config",
    "main",
    "mc_estimate",
    "parse_args",
    "partial_average",
    "power_integral_identity",
    "quantile",
    "quantile_cells",
    "quantile_domain_lhs",
    "sample",
    "solve_alpha",
    "solve_alpha_moments",
    "stretch_down",
    "stretch_up",
    "unit_norm",
]
