"""Limits K -> infinity that turn the probabilistic inequalities into the classic ones."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .alpha_solver import solve_alpha_moments
from .config import QUAD_TOL
from .dist_core import (
    Atom,
    Distribution,
    PNormParam,
    Segment,
    StepFunction,
    as_pnorm,
    moments,
    quantile_cells,
)
from .errors import PreconditionError
from .functionals import (
    ClassicRegime,
    SequenceInput,
    eval_classic_integral,
    eval_discrete,
    hardy_lower_functional,
    hardy_tail_functional,
)

logger = logging.getLogger(__name__)

LIMIT_FIELDNAMES = ("K", "scaled_lhs", "scaled_rhs", "alpha_K", "gap_to_classic")


@dataclass(frozen=True)
class LimitRow:
    K: int
    scaled_lhs: float
    scaled_rhs: float
    alpha_K: float | None
    gap_to_classic: float

    def to_row(self) -> dict[str, Any]:
        return {
            "K": self.K,
            "scaled_lhs": repr(self.scaled_lhs),
            "scaled_rhs": repr(self.scaled_rhs),
            "alpha_K": "" if self.alpha_K is None else repr(self.alpha_K),
            "gap_to_classic": repr(self.gap_to_classic),
        }


def _validated_sizes(k_values: Iterable[int], minimum: int) -> list[int]:
    sizes = [int(k) for k in k_values]
    if not sizes:
        raise PreconditionError("At least one K value is required.", field="K")
    for k in sizes:
        if k < max(minimum, 1):
            raise PreconditionError(
                f"K={k} is shorter than the sequence; need K >= {max(minimum, 1)}.",
                field="K",
            )
    return sizes


def _atom_law(locations: Sequence[int], k: int) -> tuple[Atom, ...]:
    return tuple(Atom(float(x), 1.0 / k) for x in locations)


def limit_study(
    seq: SequenceInput,
    p: PNormParam | float,
    k_values: Iterable[int],
) -> list[LimitRow]:
    """Scaled probabilistic sides for growing K, against the sequence inequality.

    p > 1: F uniform on {1, ..., K} and psi(k) = c_k.
    0 < p < 1: F has mass 1/K spread uniformly on (0, 1) and atoms of mass
    1/K at 2, ..., K, with psi(i + 1) = a_i.
    """
    param = as_pnorm(p).require("gt1", "lt1")
    regime: ClassicRegime = "gt1" if param.regime == "gt1" else "lt1"
    p_value = param.p
    length = seq.last_nonzero
    classic = eval_discrete(SequenceInput(seq.terms), p_value, regime)
    rows: list[LimitRow] = []

    if regime == "gt1":
        psi = StepFunction(
            points=tuple((float(i + 1), c) for i, c in enumerate(seq.terms[:length]))
        )
        for k in _validated_sizes(k_values, length):
            law = Distribution(atoms=_atom_law(range(1, k + 1), k))
            lhs = k * hardy_lower_functional(law, psi, p_value).value
            m1, mp = moments(law, psi, p_value)
            alpha = solve_alpha_moments(m1, mp, p_value).alpha if m1 > 0.0 else None
            constant = p_value / (p_value - 1.0 + (0.0 if alpha is None else alpha))
            rhs = k * (constant * mp) ** p_value
            rows.append(LimitRow(k, lhs, rhs, alpha, classic.lhs_unrooted - lhs))
            logger.debug("limit K=%d lhs=%.17g alpha=%s", k, lhs, alpha)
        return rows

    psi = StepFunction(
        points=tuple((float(i + 2), a) for i, a in enumerate(seq.terms[:length]))
    )
    for k in _validated_sizes(k_values, length + 1):
        law = Distribution(
            atoms=_atom_law(range(2, k + 1), k),
            segments=(Segment(0.0, 1.0, 1.0 / k),),
        )
        lhs = k * hardy_tail_functional(quantile_cells(law, psi), p_value)
        _, mp = moments(law, psi, p_value)
        rhs = k * (p_value / (1.0 - p_value)) ** p_value * mp**p_value
        rows.append(LimitRow(k, lhs, rhs, None, classic.lhs_unrooted - lhs))
        logger.debug("limit K=%d lhs=%.17g", k, lhs)
    return rows


def limit_study_integral(
    psi: StepFunction,
    p: PNormParam | float,
    k_values: Iterable[int],
    regime: ClassicRegime,
    quad_tol: float = QUAD_TOL,
) -> list[LimitRow]:
    """F uniform on (0, K): K times the probabilistic sides against the integral form."""
    p_value = as_pnorm(p).require(regime).p
    classic = eval_classic_integral(psi, p_value, regime, quad_tol)
    support_end = max([b for b in psi.breakpoints if b > 0.0], default=0.0)
    rows: list[LimitRow] = []
    for k in _validated_sizes(k_values, math.ceil(support_end)):
        law = Distribution.uniform(0.0, float(k))
        m1, mp = moments(law, psi, p_value)
        if regime == "gt1":
            lhs = k * hardy_lower_functional(law, psi, p_value, quad_tol).value
            alpha = solve_alpha_moments(m1, mp, p_value).alpha if m1 > 0.0 else None
            constant = p_value / (p_value - 1.0 + (0.0 if alpha is None else alpha))
            rhs = k * (constant * mp) ** p_value
        else:
            lhs = k * hardy_tail_functional(quantile_cells(law, psi), p_value)
            alpha = None
            rhs = k * (p_value / (1.0 - p_value)) ** p_value * mp**p_value
        rows.append(LimitRow(k, lhs, rhs, alpha, classic.lhs_unrooted - lhs))
    return rows


__all__ = ["LIMIT_FIELDNAMES", "LimitRow", "limit_study", "limit_study_integral"]
