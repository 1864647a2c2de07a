"""Both sides of the Hardy and Copson inequalities.

Probabilistic forms are evaluated on the u-space cells of ``quantile_cells``;
on a continuous cell F is linear and psi constant, so the inner integrals are
linear in u and each outer integral is either a closed form (incomplete beta
or gamma function) or a smooth integrand for adaptive Gauss-Legendre.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Literal, Sequence

import numpy as np
from scipy import special

from .alpha_solver import solve_alpha_moments
from .config import QUAD_TOL
from .dist_core import (
    Atom,
    Cell,
    Distribution,
    PNormParam,
    StepFunction,
    as_pnorm,
    cdf_array,
    compose_quantile,
    moments,
    quantile_array,
    quantile_cells,
    require_monotone,
    require_nonnegative,
)
from .errors import DomainError, InputError, PreconditionError
from .quadrature import ZERO, Quadrature, adaptive_gauss_legendre

logger = logging.getLogger(__name__)

BoundDirection = Literal["upper_bound", "lower_bound"]
Status = Literal["satisfied", "violated", "inconclusive"]
ClassicRegime = Literal["gt1", "lt1"]

COPSON_LOG_CUTOFF = 100.0
DEFAULT_SUMMATION_LIMIT = 10**6
_MARGIN_FLOOR = 1e-300


@dataclass(frozen=True)
class VerificationReport:
    theorem: str
    p: float
    lhs: float
    rhs_sharpened: float | None
    rhs_classic: float
    alpha: float | None
    satisfied: bool
    margin: float
    quad_error: float
    direction: BoundDirection
    lhs_unrooted: float
    rhs_unrooted: float
    status: Status
    details: dict[str, Any] = field(default_factory=dict)
    mc: dict[str, Any] | None = None

    @property
    def rhs(self) -> float:
        return self.rhs_classic if self.rhs_sharpened is None else self.rhs_sharpened


@dataclass(frozen=True)
class SequenceInput:
    terms: tuple[float, ...]
    tail: Literal["zeros", "truncated"] = "zeros"
    tail_bound: float | None = None

    def __post_init__(self) -> None:
        terms = tuple(float(t) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise DomainError("The sequence must contain at least one term.", field="terms")
        for index, term in enumerate(terms):
            if not math.isfinite(term) or term < 0.0:
                raise DomainError(
                    "Sequence terms must be finite and nonnegative.",
                    field=f"terms[{index}]",
                )
        if self.tail not in ("zeros", "truncated"):
            raise InputError('"tail" must be "zeros" or "truncated".', field="tail")
        if self.tail == "truncated":
            if self.tail_bound is None or not self.tail_bound >= 0.0:
                raise InputError(
                    "A truncated sequence needs a nonnegative tail_bound.",
                    field="tail_bound",
                )

    @classmethod
    def from_dict(cls, payload: Any) -> "SequenceInput":
        if not isinstance(payload, dict):
            raise InputError("Sequence JSON root must be an object.")
        raw_terms = payload.get("terms")
        if not isinstance(raw_terms, list):
            raise InputError('"terms" must be a JSON array.', field="terms")
        for index, item in enumerate(raw_terms):
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                raise InputError("Sequence terms must be numbers.", field=f"terms[{index}]")
        tail = payload.get("tail", "zeros")
        bound = payload.get("tail_bound")
        if bound is not None and (isinstance(bound, bool) or not isinstance(bound, (int, float))):
            raise InputError('"tail_bound" must be a number.', field="tail_bound")
        return cls(
            tuple(float(t) for t in raw_terms),
            tail,
            None if bound is None else float(bound),
        )

    @property
    def last_nonzero(self) -> int:
        """Length of the prefix that ends with the last nonzero term."""
        for index in range(len(self.terms), 0, -1):
            if self.terms[index - 1] != 0.0:
                return index
        return 0


def build_report(
    theorem: str,
    p: float,
    *,
    lhs_unrooted: float,
    rhs_unrooted: float,
    lhs: float,
    rhs_classic: float,
    direction: BoundDirection,
    quad_error: float,
    rhs_sharpened: float | None = None,
    alpha: float | None = None,
    quad_tol: float = QUAD_TOL,
    details: dict[str, Any] | None = None,
) -> VerificationReport:
    rhs = rhs_classic if rhs_sharpened is None else rhs_sharpened
    tolerance = 5.0 * quad_tol + 1e-12 * (abs(rhs) if math.isfinite(rhs) else 0.0)
    status: Status
    if direction == "upper_bound":
        if math.isinf(lhs) and not math.isinf(rhs):
            status = "inconclusive"
        else:
            status = "satisfied" if lhs <= rhs + tolerance else "violated"
        margin = _margin(rhs, lhs, rhs)
    else:
        status = "satisfied" if lhs >= rhs - tolerance else "violated"
        margin = _margin(lhs, rhs, rhs)
    logger.debug("%s p=%g lhs=%.17g rhs=%.17g status=%s", theorem, p, lhs, rhs, status)
    return VerificationReport(
        theorem=theorem,
        p=p,
        lhs=lhs,
        rhs_sharpened=rhs_sharpened,
        rhs_classic=rhs_classic,
        alpha=alpha,
        satisfied=status == "satisfied",
        margin=margin,
        quad_error=quad_error,
        direction=direction,
        lhs_unrooted=lhs_unrooted,
        rhs_unrooted=rhs_unrooted,
        status=status,
        details=dict(details or {}),
    )


def _margin(larger: float, smaller: float, rhs: float) -> float:
    if math.isinf(larger) and math.isinf(smaller):
        return 0.0
    return (larger - smaller) / max(rhs, _MARGIN_FLOOR)


def _root(value: float, p: float) -> float:
    return value ** (1.0 / p)


# Cell integrals -------------------------------------------------------------


def _lower_cell(
    i0: float, c: float, lo: float, hi: float, p: float, tol: float
) -> Quadrature:
    """Integral over [lo, hi] of ((i0 + c (x - lo)) / x)^p dx, p > 1."""
    if not hi > lo:
        return ZERO
    if lo == 0.0:
        return Quadrature(c**p * hi, 0.0)
    if c == 0.0:
        return Quadrature(i0**p * (lo ** (1.0 - p) - hi ** (1.0 - p)) / (p - 1.0), 0.0)
    shift = i0 - c * lo

    def integrand(xs: np.ndarray) -> np.ndarray:
        return np.power(np.maximum(shift + c * xs, 0.0) / xs, p)

    return adaptive_gauss_legendre(integrand, lo, hi, tol)


def _tail_cell(b: float, c: float, lo: float, hi: float, p: float) -> float:
    """Integral over [lo, hi] of ((b - c x) / x)^p dx for 0 < p < 1.

    Requires b - c x >= 0 on the cell; uses the incomplete beta function.
    """
    if not hi > lo or b <= 0.0:
        return 0.0
    if c == 0.0:
        return b**p * (hi ** (1.0 - p) - lo ** (1.0 - p)) / (1.0 - p)
    a_shape, b_shape = 1.0 - p, 1.0 + p
    t0 = min(c * lo / b, 1.0)
    t1 = min(c * hi / b, 1.0)
    span = special.betainc(a_shape, b_shape, t1) - special.betainc(a_shape, b_shape, t0)
    return b * c ** (p - 1.0) * special.beta(a_shape, b_shape) * float(span)


def _copson_cell(j1: float, c: float, u0: float, u1: float, p: float, tol: float) -> Quadrature:
    """Integral over [u0, u1] of (j1 + c ln(u1 / v))^p dv.

    With v = u1 exp(-s) this is u1 times the integral of (j1 + c s)^p e^{-s}
    over s in [0, ln(u1/u0)].
    """
    if not u1 > u0:
        return ZERO
    if c == 0.0:
        return Quadrature((u1 - u0) * j1**p, 0.0)
    length = math.inf if u0 == 0.0 else math.log(u1 / u0)
    if j1 == 0.0:
        share = 1.0 if math.isinf(length) else float(special.gammainc(p + 1.0, length))
        return Quadrature(u1 * c**p * special.gamma(p + 1.0) * share, 0.0)

    def integrand(ss: np.ndarray) -> np.ndarray:
        return u1 * np.power(j1 + c * ss, p) * np.exp(-ss)

    return adaptive_gauss_legendre(integrand, 0.0, min(length, COPSON_LOG_CUTOFF), tol)


# Hardy, p > 1 --------------------------------------------------------------


def hardy_lower_functional(
    d: Distribution, psi: StepFunction, p: float, tol: float = QUAD_TOL
) -> Quadrature:
    """x-domain value of the integral of (I(x) / F(x))^p dF(x), I(x) = int_(-inf,x] psi dF."""
    result = ZERO
    f_run = 0.0
    i_run = 0.0
    for piece in d.pieces:
        if isinstance(piece, Atom):
            f_run += piece.mass
            i_run += piece.mass * psi(piece.x)
            result = result + Quadrature(piece.mass * (i_run / f_run) ** p, 0.0)
            continue
        rho = piece.density
        cuts = [b for b in psi.breakpoints if piece.lo < b < piece.hi]
        edges = [piece.lo, *cuts, piece.hi]
        for s, t in zip(edges[:-1], edges[1:]):
            c = psi.piece_value(s)
            f0, i0 = f_run, i_run
            if f0 == 0.0:
                result = result + Quadrature(c**p * rho * (t - s), 0.0)
            else:

                def integrand(
                    xs: np.ndarray, f0: float = f0, i0: float = i0, c: float = c, s: float = s
                ) -> np.ndarray:
                    offset = rho * (xs - s)
                    return rho * np.power((i0 + c * offset) / (f0 + offset), p)

                result = result + adaptive_gauss_legendre(integrand, s, t, tol)
            f_run = f0 + rho * (t - s)
            i_run = i0 + c * rho * (t - s)
    return result


def eval_hardy_gt1(
    d: Distribution,
    psi: StepFunction,
    p: PNormParam | float,
    quad_tol: float = QUAD_TOL,
) -> VerificationReport:
    param = as_pnorm(p).require("gt1")
    p_value = param.p
    psi_abs = psi.abs()
    m1, mp = moments(d, psi_abs, p_value)
    if m1 == 0.0:
        return build_report(
            "hardy-gt1",
            p_value,
            lhs_unrooted=0.0,
            rhs_unrooted=0.0,
            lhs=0.0,
            rhs_classic=0.0,
            rhs_sharpened=0.0,
            direction="upper_bound",
            quad_error=0.0,
            quad_tol=quad_tol,
        )
    lhs_q = hardy_lower_functional(d, psi_abs, p_value, quad_tol)
    root = solve_alpha_moments(m1, mp, p_value)
    sharpened = root.sharpened_constant
    classic = p_value / (p_value - 1.0)
    return build_report(
        "hardy-gt1",
        p_value,
        lhs_unrooted=lhs_q.value,
        rhs_unrooted=(sharpened * mp) ** p_value,
        lhs=_root(lhs_q.value, p_value),
        rhs_sharpened=sharpened * mp,
        rhs_classic=classic * mp,
        alpha=root.alpha,
        direction="upper_bound",
        quad_error=lhs_q.error,
        quad_tol=quad_tol,
        details={"m1": m1, "mp": mp, "alpha_residual": root.residual},
    )


def _cumulative_table(chi: StepFunction) -> tuple[np.ndarray, np.ndarray]:
    """Knots and values of w -> int_0^w chi(v) dv on [0, 1]."""
    knots = [0.0] + [b for b in chi.breakpoints if 0.0 < b < 1.0] + [1.0]
    totals = [0.0]
    for s, t in zip(knots[:-1], knots[1:]):
        totals.append(totals[-1] + chi.piece_value(s) * (t - s))
    return np.asarray(knots), np.asarray(totals)


def quantile_domain_lhs(
    d: Distribution,
    psi: StepFunction,
    p: PNormParam | float,
    quad_tol: float = QUAD_TOL,
) -> Quadrature:
    """Integral over u of [int_0^{F(F^-1(u))} psi(F^-1(v)) dv / F(F^-1(u))]^p."""
    p_value = as_pnorm(p).require("gt1").p
    psi_abs = psi.abs()
    knots, totals = _cumulative_table(compose_quantile(d, psi_abs))

    def integrand(us: np.ndarray) -> np.ndarray:
        levels = cdf_array(d, quantile_array(d, us))
        return np.power(np.interp(levels, knots, totals) / levels, p_value)

    result = ZERO
    for cell in quantile_cells(d, psi_abs):
        result = result + adaptive_gauss_legendre(integrand, cell.u0, cell.u1, quad_tol)
    return result


@dataclass(frozen=True)
class DecreasingBoundChain:
    quantile_lhs: float
    unit_average: float
    classic_bound: float

    @property
    def holds(self) -> bool:
        slack = 5.0 * QUAD_TOL
        return (
            self.quantile_lhs <= self.unit_average + slack
            and self.unit_average <= self.classic_bound + slack
        )


def _average_power_integral(
    psi: StepFunction, upper: float, p: float, tol: float
) -> Quadrature:
    """Integral over (0, upper] of ((1/x) int_0^x psi)^p dx."""
    edges = [0.0] + [b for b in psi.breakpoints if 0.0 < b < upper] + [upper]
    result = ZERO
    running = 0.0
    for s, t in zip(edges[:-1], edges[1:]):
        c = psi.piece_value(s)
        result = result + _lower_cell(running, c, s, t, p, tol)
        running += c * (t - s)
    return result


def decreasing_bound_chain(
    d: Distribution,
    psi: StepFunction,
    p: PNormParam | float,
    quad_tol: float = QUAD_TOL,
) -> DecreasingBoundChain:
    """The alpha = 0 route for nonnegative nonincreasing psi."""
    p_value = as_pnorm(p).require("gt1").p
    require_nonnegative(psi)
    require_monotone(d, psi, "nonincreasing")
    chi = compose_quantile(d, psi)
    _, mp = moments(d, psi, p_value)
    return DecreasingBoundChain(
        quantile_lhs=quantile_domain_lhs(d, psi, p_value, quad_tol).value,
        unit_average=_average_power_integral(chi, 1.0, p_value, quad_tol).value,
        classic_bound=(p_value / (p_value - 1.0)) ** p_value * mp**p_value,
    )


# Hardy, 0 < p < 1 ----------------------------------------------------------


def _suffix_sums(cells: Sequence[Cell], weight: Sequence[float]) -> list[float]:
    after = [0.0] * len(cells)
    running = 0.0
    for index in range(len(cells) - 1, -1, -1):
        after[index] = running
        running += weight[index]
    return after


def hardy_tail_functional(cells: Sequence[Cell], p: float) -> float:
    """Integral of (T(x) / F(x-))^p dF(x), T(x) = int_[x,inf) psi dF, 0 < p < 1."""
    after = _suffix_sums(cells, [cell.value * cell.mass for cell in cells])
    total = 0.0
    for cell, t_after in zip(cells, after):
        if cell.atom:
            t_here = t_after + cell.value * cell.mass
            if cell.u0 == 0.0:
                if t_here > 0.0:
                    return math.inf
                continue
            total += cell.mass * (t_here / cell.u0) ** p
            continue
        b = t_after + cell.value * cell.u1
        total += _tail_cell(b, cell.value, cell.u0, cell.u1, p)
    return total


def eval_hardy_lt1(
    d: Distribution,
    psi: StepFunction,
    p: PNormParam | float,
    quad_tol: float = QUAD_TOL,
) -> VerificationReport:
    p_value = as_pnorm(p).require("lt1").p
    require_nonnegative(psi)
    _, mp = moments(d, psi, p_value)
    lhs_unrooted = hardy_tail_functional(quantile_cells(d, psi), p_value)
    constant = p_value / (1.0 - p_value)
    return build_report(
        "hardy-lt1",
        p_value,
        lhs_unrooted=lhs_unrooted,
        rhs_unrooted=constant**p_value * mp**p_value,
        lhs=_root(lhs_unrooted, p_value),
        rhs_classic=constant * mp,
        direction="lower_bound",
        quad_error=0.0,
        quad_tol=quad_tol,
    )


# Copson --------------------------------------------------------------------


def copson_functional(cells: Sequence[Cell], p: float, tol: float = QUAD_TOL) -> Quadrature:
    """Integral of (int_[x,inf) psi/F dF)^p dF(x)."""
    weights = []
    for cell in cells:
        if cell.atom:
            weights.append(cell.value * cell.mass / cell.u1)
        elif cell.value == 0.0:
            weights.append(0.0)
        elif cell.u0 == 0.0:
            weights.append(math.inf)
        else:
            weights.append(cell.value * math.log(cell.u1 / cell.u0))
    after = _suffix_sums(cells, weights)
    result = ZERO
    for cell, j_after, weight in zip(cells, after, weights):
        if cell.atom:
            result = result + Quadrature(cell.mass * (j_after + weight) ** p, 0.0)
        else:
            result = result + _copson_cell(j_after, cell.value, cell.u0, cell.u1, p, tol)
    return result


def eval_copson(
    d: Distribution,
    psi: StepFunction,
    p: PNormParam | float,
    quad_tol: float = QUAD_TOL,
) -> VerificationReport:
    param = as_pnorm(p)
    p_value = param.p
    if param.regime == "lt1":
        require_nonnegative(psi)
        magnitude = psi
        direction: BoundDirection = "lower_bound"
    else:
        magnitude = psi.abs()
        direction = "upper_bound"
    _, mp = moments(d, magnitude, p_value)
    lhs_q = copson_functional(quantile_cells(d, magnitude), p_value, quad_tol)
    return build_report(
        "copson",
        p_value,
        lhs_unrooted=lhs_q.value,
        rhs_unrooted=p_value**p_value * mp**p_value,
        lhs=_root(lhs_q.value, p_value),
        rhs_classic=p_value * mp,
        direction=direction,
        quad_error=lhs_q.error,
        quad_tol=quad_tol,
    )


# Classic integral forms ----------------------------------------------------


def _half_line_cells(psi: StepFunction) -> tuple[list[tuple[float, float, float]], float]:
    """Cells (s, t, value) of psi on (0, E] where psi vanishes beyond E."""
    require_nonnegative(psi)
    edges = [0.0] + [b for b in psi.breakpoints if b > 0.0]
    if psi.values[-1] != 0.0:
        raise PreconditionError(
            "psi must have compact support on (0, inf): its last value must be 0.",
            field="psi",
        )
    cells = [(s, t, psi.piece_value(s)) for s, t in zip(edges[:-1], edges[1:])]
    return cells, edges[-1]


def eval_classic_integral(
    psi: StepFunction,
    p: PNormParam | float,
    regime: ClassicRegime,
    quad_tol: float = QUAD_TOL,
) -> VerificationReport:
    p_value = as_pnorm(p).require(regime).p
    cells, end = _half_line_cells(psi)
    direction: BoundDirection
    norm_p = math.fsum(c**p_value * (t - s) for s, t, c in cells)
    if regime == "gt1":
        lhs_q = _average_power_integral(psi, end, p_value, quad_tol) if end > 0.0 else ZERO
        mass = math.fsum(c * (t - s) for s, t, c in cells)
        if end > 0.0 and mass > 0.0:
            lhs_q = lhs_q + Quadrature(mass**p_value * end ** (1.0 - p_value) / (p_value - 1.0), 0.0)
        constant = p_value / (p_value - 1.0)
        theorem = "classic-integral-gt1"
        direction = "upper_bound"
    else:
        value = 0.0
        tail = 0.0
        for s, t, c in reversed(cells):
            value += _tail_cell(tail + c * t, c, s, t, p_value)
            tail += c * (t - s)
        lhs_q = Quadrature(value, 0.0)
        constant = p_value / (1.0 - p_value)
        theorem = "classic-integral-lt1"
        direction = "lower_bound"
    return build_report(
        theorem,
        p_value,
        lhs_unrooted=lhs_q.value,
        rhs_unrooted=constant**p_value * norm_p,
        lhs=_root(lhs_q.value, p_value),
        rhs_classic=constant * _root(norm_p, p_value),
        direction=direction,
        quad_error=lhs_q.error,
        quad_tol=quad_tol,
    )


def classic_proof_identity(
    psi: StepFunction,
    p: PNormParam | float,
    regime: ClassicRegime,
    quad_tol: float = QUAD_TOL,
) -> tuple[float, float]:
    """Both sides of the Tonelli rewrite of the classic integral.

    gt1: int ((1/x) int_0^x psi)^p dx = p/(p-1) int ((1/y) int_0^y psi)^(p-1) psi(y) dy.
    lt1: the tail analogue with constant p/(1-p).
    """
    p_value = as_pnorm(p).require(regime).p
    lhs = eval_classic_integral(psi, p_value, regime, quad_tol).lhs_unrooted
    cells, _ = _half_line_cells(psi)
    if regime == "gt1":
        terms = []
        running = 0.0
        for s, t, c in cells:
            if c != 0.0:
                if s == 0.0:
                    terms.append(c**p_value * t)
                else:
                    terms.append(c * _power_average(running, c, s, t, p_value - 1.0, quad_tol))
            running += c * (t - s)
        return lhs, p_value / (p_value - 1.0) * math.fsum(terms)
    total = 0.0
    tail = 0.0
    a_shape, b_shape = 2.0 - p_value, p_value
    for s, t, c in reversed(cells):
        b = tail + c * t
        if c != 0.0 and b > 0.0:
            t0 = min(c * s / b, 1.0)
            t1 = min(c * t / b, 1.0)
            span = special.betainc(a_shape, b_shape, t1) - special.betainc(a_shape, b_shape, t0)
            total += b * c ** (p_value - 1.0) * special.beta(a_shape, b_shape) * float(span)
        tail += c * (t - s)
    return lhs, p_value / (1.0 - p_value) * total


def _power_average(i0: float, c: float, lo: float, hi: float, q: float, tol: float) -> float:
    """Integral over [lo, hi] of ((i0 + c (y - lo)) / y)^q dy for lo > 0."""
    shift = i0 - c * lo

    def integrand(ys: np.ndarray) -> np.ndarray:
        return np.power(np.maximum(shift + c * ys, 0.0) / ys, q)

    return adaptive_gauss_legendre(integrand, lo, hi, tol).value


# Sequence forms ------------------------------------------------------------


def eval_discrete(
    seq: SequenceInput,
    p: PNormParam | float,
    regime: ClassicRegime,
    summation_limit: int = DEFAULT_SUMMATION_LIMIT,
    quad_tol: float = QUAD_TOL,
) -> VerificationReport:
    """Sequence forms of the classic inequality.

    For a truncated sequence only a certain verdict is reported: the listed
    terms bound the left side from below, so an unprovable outcome becomes
    inconclusive.
    """
    p_value = as_pnorm(p).require(regime).p
    terms = np.asarray(seq.terms, dtype=float)
    norm_p = math.fsum(np.power(terms, p_value))
    tail_rhs = seq.tail_bound if seq.tail == "truncated" and seq.tail_bound else 0.0

    if regime == "gt1":
        count = len(terms)
        partial = np.cumsum(terms)
        indices = np.arange(1, count + 1, dtype=float)
        explicit = math.fsum(np.power(partial / indices, p_value))
        last = float(partial[-1])
        limit = max(count, summation_limit)
        extension = math.fsum(np.arange(count + 1, limit + 1, dtype=float) ** (-p_value))
        lower_tail = (limit + 1.0) ** (1.0 - p_value) / (p_value - 1.0)
        upper_tail = float(limit) ** (1.0 - p_value) / (p_value - 1.0)
        weight = last**p_value
        lhs_value = explicit + weight * float(special.zeta(p_value, count + 1))
        bracket = [
            explicit + weight * (extension + lower_tail),
            explicit + weight * (extension + upper_tail),
        ]
        constant = (p_value / (p_value - 1.0)) ** p_value
        rhs_unrooted = constant * norm_p
        report = build_report(
            "discrete-gt1",
            p_value,
            lhs_unrooted=lhs_value,
            rhs_unrooted=rhs_unrooted,
            lhs=bracket[1] if bracket[1] > lhs_value else lhs_value,
            rhs_classic=rhs_unrooted,
            direction="upper_bound",
            quad_error=bracket[1] - bracket[0],
            quad_tol=quad_tol,
            details={
                "lhs_bracket": bracket,
                "lhs_zeta": lhs_value,
                "summation_limit": limit,
                "rhs_bracket": [rhs_unrooted, rhs_unrooted + constant * tail_rhs],
            },
        )
        # The displayed value is the zeta point estimate; the verdict used the
        # conservative upper bracket.
        report = _with_lhs(report, lhs_value)
        if tail_rhs > 0.0:
            rhs_high = constant * (norm_p + tail_rhs)
            report = _truncated_verdict(report, bracket[0], rhs_high, quad_tol)
        return report

    total = math.fsum(terms)
    suffix = np.cumsum(terms[::-1])[::-1]
    positions = np.arange(1, len(terms) + 1, dtype=float)
    tail_terms = np.power(suffix[1:] / positions[1:], p_value)
    lhs_value = (1.0 + 1.0 / (1.0 - p_value)) * total**p_value + math.fsum(tail_terms)
    constant = (p_value / (1.0 - p_value)) ** p_value
    rhs_unrooted = constant * norm_p
    report = build_report(
        "discrete-lt1",
        p_value,
        lhs_unrooted=lhs_value,
        rhs_unrooted=rhs_unrooted,
        lhs=lhs_value,
        rhs_classic=rhs_unrooted,
        direction="lower_bound",
        quad_error=0.0,
        quad_tol=quad_tol,
        details={"rhs_bracket": [rhs_unrooted, rhs_unrooted + constant * tail_rhs]},
    )
    if tail_rhs > 0.0:
        rhs_high = constant * (norm_p + tail_rhs)
        report = _truncated_verdict(report, lhs_value, rhs_high, quad_tol)
    return report


def _with_lhs(report: VerificationReport, lhs: float) -> VerificationReport:
    rhs = report.rhs
    margin = _margin(rhs, lhs, rhs)
    return replace(report, lhs=lhs, margin=margin)


def _truncated_verdict(
    report: VerificationReport, known_lhs: float, rhs_high: float, quad_tol: float
) -> VerificationReport:
    """Verdict for a sequence whose omitted terms are only known through a bound.

    The listed terms bound the full left side from below and the right side
    lies in the rhs bracket, so only one outcome per direction is certain.
    """
    tolerance = 5.0 * quad_tol + 1e-12 * abs(rhs_high)
    status: Status
    if report.direction == "upper_bound":
        status = "violated" if known_lhs > rhs_high + tolerance else "inconclusive"
    else:
        status = "satisfied" if known_lhs >= rhs_high - tolerance else "inconclusive"
    return replace(report, status=status, satisfied=status == "satisfied")


# p = 1 ---------------------------------------------------------------------


def eval_p1_bounds(
    d: Distribution,
    psi: StepFunction,
    direction: Literal["nondecreasing", "nonincreasing"],
    quad_tol: float = QUAD_TOL,
) -> VerificationReport:
    """E[I(X)/F(X)] against E[psi(X)], plus the tail-side bound."""
    if direction not in ("nondecreasing", "nonincreasing"):
        raise InputError(f"Unknown monotonicity direction: {direction}", field="direction")
    require_nonnegative(psi)
    require_monotone(d, psi, direction)
    cells = quantile_cells(d, psi)

    mean = math.fsum(cell.value * cell.mass for cell in cells)
    lower_side = 0.0
    running = 0.0
    for cell in cells:
        c = cell.value
        if cell.atom:
            running += c * cell.mass
            lower_side += cell.mass * running / cell.u1
            continue
        if cell.u0 == 0.0:
            lower_side += c * cell.mass
        else:
            shift = running - c * cell.u0
            lower_side += c * cell.mass + shift * math.log(cell.u1 / cell.u0)
        running += c * cell.mass

    after = _suffix_sums(cells, [cell.value * cell.mass for cell in cells])
    tail_side = 0.0
    dual = 0.0
    for cell, t_after in zip(cells, after):
        c = cell.value
        if cell.atom:
            t_here = t_after + c * cell.mass
            left = cell.u1 if direction == "nondecreasing" else cell.u0
            weight = c * cell.mass * max(1.0 - left, 0.0)
            tail_side += _ratio(cell.mass * t_here, cell.u0)
            dual += _ratio(weight, cell.u0)
            continue
        b = t_after + c * cell.u1
        if cell.u0 == 0.0:
            tail_side += math.inf if b > 0.0 else 0.0
            dual += math.inf if c > 0.0 else 0.0
            continue
        log_ratio = math.log(cell.u1 / cell.u0)
        tail_side += b * log_ratio - c * cell.mass
        dual += c * (log_ratio - cell.mass)

    if direction == "nondecreasing":
        bound_direction: BoundDirection = "upper_bound"
        dual_holds = _at_least(tail_side, dual, quad_tol)
    else:
        bound_direction = "lower_bound"
        dual_holds = _at_least(dual, tail_side, quad_tol)

    report = build_report(
        "p1-bounds",
        1.0,
        lhs_unrooted=lower_side,
        rhs_unrooted=mean,
        lhs=lower_side,
        rhs_classic=mean,
        direction=bound_direction,
        quad_error=0.0,
        quad_tol=quad_tol,
        details={
            "psi_direction": direction,
            "tail_lhs": tail_side,
            "dual_bound": dual,
            "dual_satisfied": dual_holds,
        },
    )
    if report.satisfied and not dual_holds:
        return replace(report, satisfied=False, status="violated")
    return report


def _ratio(numerator: float, denominator: float) -> float:
    """numerator / denominator with 0/0 := 0 and x/0 := inf."""
    if denominator == 0.0:
        return math.inf if numerator > 0.0 else 0.0
    return numerator / denominator


def _at_least(larger: float, smaller: float, quad_tol: float) -> bool:
    if math.isinf(larger):
        return True
    return larger >= smaller - 5.0 * quad_tol - 1e-12 * abs(smaller)


__all__ = [
    "DecreasingBoundChain",
    "SequenceInput",
    "VerificationReport",
    "build_report",
    "classic_proof_identity",
    "copson_functional",
    "decreasing_bound_chain",
    "eval_classic_integral",
    "eval_copson",
    "eval_discrete",
    "eval_hardy_gt1",
    "eval_hardy_lt1",
    "eval_p1_bounds",
    "hardy_lower_functional",
    "hardy_tail_functional",
    "quantile_domain_lhs",
]
