"""Composite Gauss-Legendre quadrature with adaptive bisection."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import QUAD_TOL

logger = logging.getLogger(__name__)

GAUSS_ORDER = 16
MAX_DEPTH = 60
RELATIVE_FLOOR = 1e-14

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Quadrature:
    value: float
    error: float

    def __add__(self, other: "Quadrature") -> "Quadrature":
        return Quadrature(self.value + other.value, self.error + other.error)


ZERO = Quadrature(0.0, 0.0)


def gauss_legendre(func: Integrand, lo: float, hi: float) -> float:
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    values = np.asarray(func(mid + half * _NODES), dtype=float)
    return half * float(np.dot(_WEIGHTS, values))


def adaptive_gauss_legendre(
    func: Integrand, lo: float, hi: float, tol: float = QUAD_TOL
) -> Quadrature:
    """Integrate ``func`` over [lo, hi].

    ``func`` must accept and return numpy arrays. Intervals are bisected until
    the difference between the one-panel and two-panel rules falls under the
    interval's share of ``tol``; that difference is accumulated as the error.
    """
    if not hi > lo:
        return ZERO
    whole = gauss_legendre(func, lo, hi)
    if not math.isfinite(whole):
        return Quadrature(math.inf if whole > 0 else whole, 0.0)

    total_length = hi - lo
    parts: list[float] = []
    error = 0.0
    stack = [(lo, hi, whole, 0)]
    while stack:
        a, b, estimate, depth = stack.pop()
        mid = 0.5 * (a + b)
        left = gauss_legendre(func, a, mid)
        right = gauss_legendre(func, mid, b)
        refined = left + right
        if not math.isfinite(refined):
            return Quadrature(math.inf if refined > 0 else refined, 0.0)
        gap = abs(refined - estimate)
        budget = max(tol * (b - a) / total_length, RELATIVE_FLOOR * abs(refined))
        if gap <= budget or depth >= MAX_DEPTH or not a < mid < b:
            if gap > budget:
                logger.warning(
                    "Quadrature depth limit on [%.17g, %.17g]: gap %.3g", a, b, gap
                )
            parts.append(refined)
            error += gap
            continue
        stack.append((mid, b, right, depth + 1))
        stack.append((a, mid, left, depth + 1))
    return Quadrature(math.fsum(parts), error)


__all__ = [
    "GAUSS_ORDER",
    "Quadrature",
    "ZERO",
    "adaptive_gauss_legendre",
    "gauss_legendre",
]
