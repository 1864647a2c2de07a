"""Root of the sharpened-constant equation

    g(alpha) = m1 * (p - 1 + alpha) - p * mp * alpha**(1/p) = 0,

with m1 = E|psi(Y)| and mp = {E|psi(Y)|^p}^{1/p}. g is convex on [0, 1],
positive at 0 and nonpositive at 1, so the root in [0, 1] is unique.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

from .dist_core import Distribution, PNormParam, StepFunction, as_pnorm, integrate, moments
from .errors import PreconditionError, TrivialRegimeError

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 200
BRACKET_WIDTH = 1e-14
RESIDUAL_TOL = 1e-12
DEGENERATE_GAP = 1e-14


@dataclass(frozen=True)
class AlphaResult:
    alpha: float
    residual: float
    m1: float
    mp: float
    iterations: int
    p: float

    @property
    def sharpened_constant(self) -> float:
        return self.p / (self.p - 1.0 + self.alpha)

    def to_dict(self) -> dict[str, float | int]:
        return {
            "p": self.p,
            "alpha": self.alpha,
            "residual": self.residual,
            "m1": self.m1,
            "mp": self.mp,
            "iterations": self.iterations,
        }


def root_function(m1: float, mp: float, p: float) -> Callable[[float], float]:
    def g(alpha: float) -> float:
        return m1 * (p - 1.0 + alpha) - p * mp * alpha ** (1.0 / p)

    return g


def solve_alpha_moments(m1: float, mp: float, p: float) -> AlphaResult:
    if not p > 1.0:
        raise PreconditionError(f"The root equation needs p > 1, got {p!r}.", field="p")
    if math.isinf(mp):
        raise TrivialRegimeError("E|psi(Y)|^p is infinite; the inequality is trivial.")
    if not m1 > 0.0:
        raise PreconditionError("psi vanishes on the support of the law.", field="psi")

    g = root_function(m1, mp, p)
    if mp - m1 < DEGENERATE_GAP * m1:
        return AlphaResult(1.0, g(1.0), m1, mp, 0, p)

    target = RESIDUAL_TOL * max(1.0, m1)
    lo, hi = 0.0, 1.0
    x = 0.5
    best_x, best_residual = 1.0, g(1.0)
    iterations = 0
    for iterations in range(1, MAX_ITERATIONS + 1):
        gx = g(x)
        if abs(gx) < abs(best_residual):
            best_x, best_residual = x, gx
        if gx == 0.0:
            break
        if gx > 0.0:
            lo = x
        else:
            hi = x
        slope = m1 - mp * x ** (1.0 / p - 1.0)
        candidate = x - gx / slope if slope != 0.0 else math.nan
        if lo < candidate < hi:
            step = abs(candidate - x)
            x = candidate
        else:
            step = math.inf
            x = 0.5 * (lo + hi)
        if hi - lo <= BRACKET_WIDTH or (step <= 4e-16 * x and abs(gx) <= target):
            break

    gx = g(x)
    if abs(gx) < abs(best_residual):
        best_x, best_residual = x, gx
    logger.debug(
        "alpha=%.17g residual=%.3g after %d iterations", best_x, best_residual, iterations
    )
    return AlphaResult(best_x, best_residual, m1, mp, iterations, p)


def solve_alpha(d: Distribution, psi: StepFunction, p: PNormParam | float) -> AlphaResult:
    param = as_pnorm(p).require("gt1")
    m1, mp = moments(d, psi, param.p)
    return solve_alpha_moments(m1, mp, param.p)


def alpha_closed_p2(d: Distribution, psi: StepFunction) -> float:
    """(sqrt(E psi^2) - sqrt(var|psi|))^2 / (E|psi|)^2."""
    m1 = integrate(d, psi, absolute=True).value
    if not m1 > 0.0:
        raise PreconditionError("psi vanishes on the support of the law.", field="psi")
    second = integrate(d, psi, power=2.0, absolute=True).value
    centered = psi.abs().map_values(lambda v: (v - m1) ** 2)
    variance = integrate(d, centered).value
    return (math.sqrt(second) - math.sqrt(variance)) ** 2 / m1**2


__all__ = [
    "AlphaResult",
    "alpha_closed_p2",
    "root_function",
    "solve_alpha",
    "solve_alpha_moments",
]
