"""Independent second opinions for the evaluators.

Exact nested enumeration on atomic laws, Monte Carlo over the outer variable
with the inner conditional expectation computed exactly, and the power
integral identities used when removing atoms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Literal, NamedTuple

import numpy as np

from .config import QUAD_TOL
from .dist_core import (
    Distribution,
    PNormParam,
    StepFunction,
    as_pnorm,
    cdf_array,
    quantile_cells,
    require_nonnegative,
    sample,
)
from .errors import DomainError, InputError, PreconditionError
from .quadrature import ZERO, Quadrature, adaptive_gauss_legendre

logger = logging.getLogger(__name__)

Functional = Literal["hardy_gt1", "hardy_lt1", "copson"]
IdentityMode = Literal["lower", "tail"]

MAX_EXACT_ATOMS = 10_000
MIN_MC_SAMPLES = 1_000
DEFAULT_DKW_LEVEL = 1e-3
AGREEMENT_FLOOR = 1e-12


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int
    seed: int

    def agrees(self, value: float, widths: float = 4.0, quad_error: float = 0.0) -> bool:
        """Within ``widths`` standard errors, or within rounding of ``value``.

        The absolute floor covers integrands whose draws are all the same
        number, where the standard error is pure rounding noise.
        """
        if math.isinf(self.mean) or math.isinf(value):
            return self.mean == value
        floor = max(AGREEMENT_FLOOR * max(1.0, abs(value)), quad_error)
        return abs(self.mean - value) <= widths * self.std_error + floor

    def to_dict(self) -> dict[str, Any]:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "n": self.n,
            "seed": self.seed,
        }


def _integrand_values(psi: StepFunction, functional: Functional, xs: np.ndarray) -> np.ndarray:
    values = psi.evaluate(xs)
    if functional == "hardy_lt1":
        return values
    return np.abs(values)


def _check_functional(functional: str, p: PNormParam, psi: StepFunction) -> None:
    if functional == "hardy_gt1":
        p.require("gt1")
    elif functional == "hardy_lt1":
        p.require("lt1")
        require_nonnegative(psi)
    elif functional == "copson":
        if p.regime == "lt1":
            require_nonnegative(psi)
    else:
        raise InputError(f"Unknown functional: {functional}", field="functional")


def _safe_ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    """Elementwise quotient with 0/0 := 0 and x/0 := inf."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = numerator / denominator
    ratio = np.where(denominator == 0.0, np.where(numerator > 0.0, np.inf, 0.0), ratio)
    return ratio


def exact_discrete_eval(
    d: Distribution,
    psi: StepFunction,
    p: PNormParam | float,
    functional: Functional,
) -> float:
    """Un-rooted functional on an atomic law by nested per-row sums."""
    param = as_pnorm(p)
    _check_functional(functional, param, psi)
    if not d.is_atomic:
        raise PreconditionError("Exact enumeration needs a purely atomic law.", field="dist")
    if len(d.atoms) > MAX_EXACT_ATOMS:
        raise PreconditionError(
            f"Exact enumeration is limited to {MAX_EXACT_ATOMS} atoms.", field="dist"
        )

    xs = np.asarray([atom.x for atom in d.atoms])
    masses = np.asarray([atom.mass for atom in d.atoms])
    values = _integrand_values(psi, functional, xs)
    weighted = masses * values
    count = len(xs)

    rows = np.empty(count)
    if functional == "hardy_gt1":
        for i in range(count):
            rows[i] = float(np.sum(weighted[: i + 1])) / float(np.sum(masses[: i + 1]))
    elif functional == "hardy_lt1":
        for i in range(count):
            tail = float(np.sum(weighted[i:]))
            below = float(np.sum(masses[:i]))
            rows[i] = float(_safe_ratio(np.asarray(tail), np.asarray(below)))
    else:
        levels = np.asarray([float(np.sum(masses[: j + 1])) for j in range(count)])
        for i in range(count):
            rows[i] = float(np.sum(weighted[i:] / levels[i:]))
    powered = np.where(rows == 0.0, 0.0, np.power(rows, param.p))
    if np.any(np.isinf(powered) & (masses > 0.0)):
        return math.inf
    return float(np.sum(masses * powered))


def _inner_values(
    d: Distribution, psi: StepFunction, functional: Functional, xs: np.ndarray
) -> np.ndarray:
    """Ratio inside the p-th power for each draw, computed exactly."""
    magnitude = psi if functional == "hardy_lt1" else psi.abs()
    cells = quantile_cells(d, magnitude)
    if functional == "hardy_gt1":
        below = np.zeros_like(xs)
        for cell in cells:
            if cell.atom:
                below += np.where(xs >= cell.x0, cell.value * cell.mass, 0.0)
            else:
                share = np.clip((xs - cell.x0) / (cell.x1 - cell.x0), 0.0, 1.0)
                below += cell.value * cell.mass * share
        return _safe_ratio(below, cdf_array(d, xs))

    if functional == "hardy_lt1":
        total = sum(cell.value * cell.mass for cell in cells)
        strictly_below = np.zeros_like(xs)
        for cell in cells:
            if cell.atom:
                strictly_below += np.where(xs > cell.x0, cell.value * cell.mass, 0.0)
            else:
                share = np.clip((xs - cell.x0) / (cell.x1 - cell.x0), 0.0, 1.0)
                strictly_below += cell.value * cell.mass * share
        tail = np.maximum(total - strictly_below, 0.0)
        return _safe_ratio(tail, cdf_array(d, xs, "left"))

    above = np.zeros_like(xs)
    for cell in cells:
        if cell.value == 0.0:
            continue
        if cell.atom:
            above += np.where(xs <= cell.x0, cell.value * cell.mass / cell.u1, 0.0)
            continue
        share = np.clip((xs - cell.x0) / (cell.x1 - cell.x0), 0.0, 1.0)
        level = cell.u0 + cell.mass * share
        with np.errstate(divide="ignore"):
            contribution = cell.value * np.log(cell.u1 / level)
        above += np.where(xs >= cell.x1, 0.0, contribution)
    return above


def mc_estimate(
    d: Distribution,
    psi: StepFunction,
    p: PNormParam | float,
    functional: Functional,
    seed: int,
    n: int,
) -> McEstimate:
    """Monte Carlo over X ~ d of the un-rooted functional."""
    param = as_pnorm(p)
    _check_functional(functional, param, psi)
    if n < MIN_MC_SAMPLES:
        raise DomainError(f"Monte Carlo needs n >= {MIN_MC_SAMPLES}, got {n}.", field="mc_n")
    xs = sample(d, seed, n)
    inner = _inner_values(d, psi, functional, xs)
    draws = np.where(inner == 0.0, 0.0, np.power(inner, param.p))
    if np.any(np.isinf(draws)):
        return McEstimate(math.inf, math.inf, n, seed)
    mean = float(np.mean(draws))
    std_error = float(np.std(draws, ddof=1)) / math.sqrt(n)
    logger.debug("mc %s p=%g n=%d mean=%.17g se=%.3g", functional, param.p, n, mean, std_error)
    return McEstimate(mean, std_error, n, seed)


class IdentityCheck(NamedTuple):
    lhs: float
    rhs: float
    gap: float

    def to_dict(self) -> dict[str, float]:
        return {"lhs": self.lhs, "rhs": self.rhs, "gap": self.gap}


def power_integral_identity(
    d: Distribution,
    psi: StepFunction,
    p: PNormParam | float,
    mode: IdentityMode,
    quad_tol: float = QUAD_TOL,
) -> IdentityCheck:
    """[int psi dF]^p against p int G^(p-1) psi dF.

    G is the cumulative integral of psi dF up to x ("lower", p > 1) or from x
    on ("tail", 0 < p < 1). Both sides agree for continuous laws; atoms
    break the identity.
    """
    param = as_pnorm(p)
    if mode == "lower":
        param.require("gt1")
    elif mode == "tail":
        param.require("lt1")
    else:
        raise InputError(f"Unknown identity mode: {mode}", field="mode")
    require_nonnegative(psi)
    p_value = param.p
    cells = quantile_cells(d, psi)
    total = math.fsum(cell.value * cell.mass for cell in cells)
    q = p_value - 1.0

    result = ZERO
    if mode == "lower":
        running = 0.0
        for cell in cells:
            c = cell.value
            start = running
            running += c * cell.mass
            if c == 0.0:
                continue
            if cell.atom:
                result = result + Quadrature(cell.mass * c * running**q, 0.0)
            elif start == 0.0:
                result = result + Quadrature(running**p_value / p_value, 0.0)
            else:

                def lower(
                    vs: np.ndarray, start: float = start, c: float = c, u0: float = cell.u0
                ) -> np.ndarray:
                    return c * np.power(start + c * (vs - u0), q)

                result = result + adaptive_gauss_legendre(lower, cell.u0, cell.u1, quad_tol)
    else:
        running = 0.0
        for cell in reversed(cells):
            c = cell.value
            end = running
            running += c * cell.mass
            if c == 0.0:
                continue
            if cell.atom:
                result = result + Quadrature(cell.mass * c * running**q, 0.0)
            elif end == 0.0:
                # (1 - y)^(p-1) type endpoint singularity: antiderivative.
                result = result + Quadrature(running**p_value / p_value, 0.0)
            else:

                def tail(
                    vs: np.ndarray, end: float = end, c: float = c, u1: float = cell.u1
                ) -> np.ndarray:
                    return c * np.power(end + c * (u1 - vs), q)

                result = result + adaptive_gauss_legendre(tail, cell.u0, cell.u1, quad_tol)

    lhs = total**p_value
    rhs = p_value * result.value
    logger.debug("identity %s p=%g lhs=%.17g rhs=%.17g", mode, p_value, lhs, rhs)
    return IdentityCheck(lhs, rhs, abs(lhs - rhs))


@dataclass(frozen=True)
class DkwResult:
    max_deviation: float
    epsilon: float
    n: int
    level: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.epsilon


def dkw_check(
    d: Distribution, seed: int, n: int, level: float = DEFAULT_DKW_LEVEL
) -> DkwResult:
    """Sup distance between the empirical CDF of ``sample`` and F."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}.", field="level")
    draws = np.sort(sample(d, seed, n))
    support = np.unique(draws)
    empirical_right = np.searchsorted(draws, support, side="right") / n
    empirical_left = np.searchsorted(draws, support, side="left") / n
    deviation = max(
        float(np.max(np.abs(empirical_right - cdf_array(d, support)))),
        float(np.max(np.abs(empirical_left - cdf_array(d, support, "left")))),
    )
    epsilon = math.sqrt(math.log(2.0 / level) / (2.0 * n))
    return DkwResult(deviation, epsilon, n, level)


__all__ = [
    "DkwResult",
    "IdentityCheck",
    "McEstimate",
    "dkw_check",
    "exact_discrete_eval",
    "mc_estimate",
    "power_integral_identity",
]
