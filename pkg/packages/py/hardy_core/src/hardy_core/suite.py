"""Randomized property suite.

Every case draws from its own Philox stream keyed by (seed, check, case), so
results do not depend on execution order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Literal

import numpy as np

from .alpha_solver import alpha_closed_p2, root_function, solve_alpha, solve_alpha_moments
from .config import DEFAULT_SUITE_CONFIG, QUAD_TOL
from .dist_core import (
    Atom,
    Distribution,
    Segment,
    StepFunction,
    compose_quantile,
    galois_holds_array,
    moments,
)
from .functionals import (
    VerificationReport,
    decreasing_bound_chain,
    eval_copson,
    eval_hardy_gt1,
    eval_hardy_lt1,
    hardy_lower_functional,
    quantile_domain_lhs,
)
from .oracle import Functional, exact_discrete_eval, mc_estimate, power_integral_identity
from .transforms import (
    decreasing_rearrangement,
    partial_average,
    stretch_down,
    stretch_up,
    unit_norm,
)

logger = logging.getLogger(__name__)

PsiKind = Literal["signed", "nonnegative", "nonincreasing", "nondecreasing"]

MAX_REPORTED_FAILURES = 5
MC_FUNCTIONALS: tuple[Functional, ...] = ("hardy_gt1", "hardy_lt1", "copson")
MC_LT1_MAX_P = 0.25
LOCATION_RANGE = (-2.0, 2.0)


def case_rng(*keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(keys))))


def random_distribution(
    rng: np.random.Generator,
    max_atoms: int = DEFAULT_SUITE_CONFIG["max_atoms"],
    max_segments: int = DEFAULT_SUITE_CONFIG["max_segments"],
    *,
    min_atoms: int = 0,
    continuous: bool = False,
) -> Distribution:
    """A mixed law laid out left to right with random gaps.

    Gaps of zero put atoms on segment endpoints and let segments touch.
    """
    atom_count = 0 if continuous else int(rng.integers(min_atoms, max_atoms + 1))
    segment_count = int(rng.integers(0, max_segments + 1))
    if atom_count + segment_count == 0:
        segment_count = 1 if continuous or rng.random() < 0.5 else 0
        atom_count = 1 - segment_count
    kinds = ["atom"] * atom_count + ["segment"] * segment_count
    rng.shuffle(kinds)
    masses = rng.dirichlet(np.full(len(kinds), 2.0))
    masses[-1] = 1.0 - math.fsum(masses[:-1])

    atoms: list[Atom] = []
    segments: list[Segment] = []
    cursor = float(rng.uniform(*LOCATION_RANGE))
    previous = ""
    for kind, mass in zip(kinds, masses):
        if previous == "atom" or rng.random() < 0.6:
            cursor += float(rng.uniform(0.1, 1.0))
        if kind == "atom":
            atoms.append(Atom(cursor, float(mass)))
        else:
            length = float(rng.uniform(0.1, 2.0))
            segments.append(Segment(cursor, cursor + length, float(mass)))
            cursor += length
        previous = kind
    return Distribution(tuple(atoms), tuple(segments))


def _support(d: Distribution) -> tuple[float, float]:
    lows = [a.x for a in d.atoms] + [s.lo for s in d.segments]
    highs = [a.x for a in d.atoms] + [s.hi for s in d.segments]
    return min(lows), max(highs)


def random_step_function(
    rng: np.random.Generator,
    d: Distribution,
    max_pieces: int = DEFAULT_SUITE_CONFIG["max_pieces"],
    kind: PsiKind = "nonnegative",
) -> StepFunction:
    lo, hi = _support(d)
    count = int(rng.integers(0, max_pieces))
    candidates = list(rng.uniform(lo - 0.5, hi + 0.5, size=count))
    # Some breakpoints sit exactly on atoms.
    candidates.extend(a.x for a in d.atoms if rng.random() < 0.3)
    breakpoints = sorted(set(float(b) for b in candidates))

    if kind == "signed":
        values = rng.uniform(-3.0, 3.0, size=len(breakpoints) + 1)
    else:
        values = rng.uniform(0.1, 3.0, size=len(breakpoints) + 1)
    if rng.random() < 0.3:
        values = np.round(values)
        values = np.where(values == 0.0, 1.0, values)
        if kind != "signed":
            values = np.maximum(values, 1.0)
    if kind == "nonincreasing":
        values = np.sort(values)[::-1]
    elif kind == "nondecreasing":
        values = np.sort(values)

    points: list[tuple[float, float]] = []
    if kind in ("signed", "nonnegative"):
        for atom in d.atoms:
            if rng.random() < 0.2:
                low = -3.0 if kind == "signed" else 0.1
                points.append((atom.x, float(rng.uniform(low, 3.0))))
    return StepFunction(tuple(breakpoints), tuple(float(v) for v in values), tuple(points))


def random_unit_step(
    rng: np.random.Generator, max_pieces: int = DEFAULT_SUITE_CONFIG["max_pieces"]
) -> StepFunction:
    """Nonnegative step function on [0, 1], zero outside."""
    count = int(rng.integers(1, max_pieces + 1))
    inner = sorted(set(float(b) for b in rng.uniform(0.0, 1.0, size=count - 1)))
    breakpoints = [0.0, *[b for b in inner if 0.0 < b < 1.0], 1.0]
    values = [0.0, *(float(v) for v in rng.uniform(0.0, 3.0, size=len(breakpoints) - 1)), 0.0]
    return StepFunction(tuple(breakpoints), tuple(values))


def random_p(rng: np.random.Generator, bounds: List[float]) -> float:
    return float(rng.uniform(bounds[0], bounds[1]))


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: int = 0
    examples: List[str] = field(default_factory=list)
    allowed_failures: int = 0

    @property
    def ok(self) -> bool:
        return self.failures <= self.allowed_failures

    def record(self, passed: bool, message: Callable[[], str]) -> None:
        self.cases += 1
        if passed:
            return
        self.failures += 1
        if len(self.examples) < MAX_REPORTED_FAILURES:
            self.examples.append(message())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "allowed_failures": self.allowed_failures,
            "ok": self.ok,
            "examples": list(self.examples),
        }


@dataclass
class SuiteResult:
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "ok": self.ok,
            "checks": [check.to_dict() for check in self.checks],
        }


def _close(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _describe(d: Distribution, psi: StepFunction, p: float) -> str:
    return f"p={p!r} dist={d.to_dict()} psi={psi.to_dict()}"


def check_galois(config: Dict[str, Any], seed: int) -> CheckResult:
    result = CheckResult("galois")
    for case in range(config["galois_cases"]):
        rng = case_rng(seed, 1, case)
        d = random_distribution(rng, config["max_atoms"], config["max_segments"])
        levels = 1.0 - rng.random(config["galois_levels"])
        holds = galois_holds_array(d, levels)
        for u in levels[~holds]:
            result.record(False, lambda: f"u={u!r} dist={d.to_dict()}")
        result.cases += int(np.count_nonzero(holds))
    return result


def check_inequalities(config: Dict[str, Any], seed: int) -> List[CheckResult]:
    checks = {
        name: CheckResult(name)
        for name in ("hardy-gt1", "hardy-lt1", "copson-ge1", "copson-lt1", "bound-ordering")
    }
    for case in range(config["inequality_cases"]):
        rng = case_rng(seed, 2, case)
        d = random_distribution(rng, config["max_atoms"], config["max_segments"])
        signed = random_step_function(rng, d, config["max_pieces"], "signed")
        psi = random_step_function(rng, d, config["max_pieces"], "nonnegative")
        p_high = random_p(rng, config["p_gt1"])
        p_low = random_p(rng, config["p_lt1"])

        report = eval_hardy_gt1(d, signed, p_high)
        checks["hardy-gt1"].record(
            report.status != "violated", lambda: _describe(d, signed, p_high)
        )
        if report.rhs_sharpened is not None:
            checks["bound-ordering"].record(
                report.rhs_sharpened <= report.rhs_classic * (1.0 + 1e-12),
                lambda: _describe(d, signed, p_high),
            )
        report = eval_hardy_lt1(d, psi, p_low)
        checks["hardy-lt1"].record(
            report.status != "violated", lambda: _describe(d, psi, p_low)
        )
        report = eval_copson(d, signed, p_high)
        checks["copson-ge1"].record(
            report.status != "violated", lambda: _describe(d, signed, p_high)
        )
        report = eval_copson(d, psi, p_low)
        checks["copson-lt1"].record(
            report.status != "violated", lambda: _describe(d, psi, p_low)
        )
    return list(checks.values())


def check_alpha(config: Dict[str, Any], seed: int) -> List[CheckResult]:
    residual = CheckResult("alpha-residual")
    closed = CheckResult("alpha-closed-p2")
    convexity = CheckResult("alpha-convexity")
    for case in range(config["alpha_cases"]):
        rng = case_rng(seed, 3, case)
        d = random_distribution(rng, config["max_atoms"], config["max_segments"])
        psi = random_step_function(rng, d, config["max_pieces"], "signed")
        p = random_p(rng, config["p_gt1"])
        root = solve_alpha(d, psi, p)
        residual.record(
            abs(root.residual) <= 1e-12 * max(1.0, root.m1) and 0.0 <= root.alpha <= 1.0,
            lambda: f"residual={root.residual!r} " + _describe(d, psi, p),
        )

        count = int(rng.integers(2, 6))
        masses = rng.dirichlet(np.full(count, 2.0))
        masses[-1] = 1.0 - math.fsum(masses[:-1])
        law = Distribution(
            atoms=tuple(Atom(float(i), float(m)) for i, m in enumerate(masses))
        )
        values = rng.uniform(0.1, 3.0, size=count)
        staircase = StepFunction(
            tuple(float(i) for i in range(1, count)), tuple(float(v) for v in values)
        )
        by_root = solve_alpha(law, staircase, 2.0).alpha
        by_formula = alpha_closed_p2(law, staircase)
        closed.record(
            abs(by_root - by_formula) <= 1e-10,
            lambda: f"root={by_root!r} closed={by_formula!r} values={list(values)}",
        )

    for case in range(config["convexity_triples"]):
        rng = case_rng(seed, 4, case)
        m1 = float(rng.uniform(0.1, 3.0))
        mp = m1 * float(rng.uniform(1.0, 3.0))
        p = random_p(rng, config["p_gt1"])
        g = root_function(m1, mp, p)
        a1, a2 = sorted(float(a) for a in rng.random(2))
        t = float(rng.random())
        convexity.record(
            g(t * a1 + (1.0 - t) * a2) <= t * g(a1) + (1.0 - t) * g(a2) + 1e-12,
            lambda: f"m1={m1!r} mp={mp!r} p={p!r} a=({a1!r}, {a2!r}) t={t!r}",
        )
    return [residual, closed, convexity]


def check_identities(config: Dict[str, Any], seed: int) -> List[CheckResult]:
    domain = CheckResult("quantile-domain")
    lower = CheckResult("power-identity-lower")
    tail = CheckResult("power-identity-tail")
    tolerance = 2.0 * QUAD_TOL
    for case in range(config["identity_cases"]):
        rng = case_rng(seed, 5, case)
        d = random_distribution(rng, config["max_atoms"], config["max_segments"])
        psi = random_step_function(rng, d, config["max_pieces"], "signed")
        p = random_p(rng, config["p_gt1"])
        x_domain = hardy_lower_functional(d, psi.abs(), p).value
        u_domain = quantile_domain_lhs(d, psi, p).value
        domain.record(
            _close(x_domain, u_domain, tolerance),
            lambda: f"x={x_domain!r} u={u_domain!r} " + _describe(d, psi, p),
        )

        law = random_distribution(
            rng, config["max_atoms"], config["max_segments"], continuous=True
        )
        nonneg = random_step_function(rng, law, config["max_pieces"], "nonnegative")
        for mode, bounds, check in (
            ("lower", config["p_gt1"], lower),
            ("tail", config["p_lt1"], tail),
        ):
            q = random_p(rng, bounds)
            identity = power_integral_identity(law, nonneg, q, mode)  # type: ignore[arg-type]
            check.record(
                identity.gap <= tolerance * max(1.0, identity.lhs),
                lambda: f"gap={identity.gap!r} " + _describe(law, nonneg, q),
            )
    return [domain, lower, tail]


def check_transforms(config: Dict[str, Any], seed: int) -> List[CheckResult]:
    up = CheckResult("stretch-up")
    down = CheckResult("stretch-down")
    rearrangement = CheckResult("rearrangement")
    for case in range(config["transform_cases"]):
        rng = case_rng(seed, 6, case)
        d = random_distribution(rng, config["max_atoms"], config["max_segments"], min_atoms=1)
        atom = d.atoms[int(rng.integers(0, len(d.atoms)))]
        psi = random_step_function(rng, d, config["max_pieces"], "nonincreasing")
        p = random_p(rng, config["p_gt1"])
        out = stretch_up(d, psi, atom.x, p)
        alpha_after = solve_alpha(out.dist, out.psi, p).alpha
        alpha_before = solve_alpha(d, psi, p).alpha
        up.record(
            _close(out.norm_before, out.norm_after, 1e-9)
            and _close(out.mean_before, out.mean_after, 1e-9)
            and out.functional_after >= out.functional_before - 1e-9 * max(1.0, out.functional_before)
            and abs(alpha_after - alpha_before) <= 1e-9,
            lambda: f"atom={atom.x!r} " + _describe(d, psi, p),
        )

        psi_down = random_step_function(rng, d, config["max_pieces"], "nonnegative")
        q = random_p(rng, config["p_lt1"])
        out = stretch_down(d, psi_down, atom.x, q)
        down.record(
            _close(out.norm_before, out.norm_after, 1e-9)
            and (
                math.isinf(out.functional_before)
                or out.functional_after <= out.functional_before + 1e-9 * max(1.0, out.functional_before)
            ),
            lambda: f"atom={atom.x!r} " + _describe(d, psi_down, q),
        )

        chi = random_unit_step(rng, config["max_pieces"])
        sorted_chi = decreasing_rearrangement(chi, p)
        grid = 1.0 - rng.random(50)
        rearrangement.record(
            _close(unit_norm(chi, p), unit_norm(sorted_chi, p), 1e-10)
            and all(
                partial_average(sorted_chi, float(u)) >= partial_average(chi, float(u)) - 1e-10
                for u in grid
            ),
            lambda: f"chi={chi.to_dict()}",
        )
    return [up, down, rearrangement]


def check_rearrangement_dominance(config: Dict[str, Any], seed: int) -> List[CheckResult]:
    dominance = CheckResult("rearrangement-dominance")
    chain = CheckResult("decreasing-bound-chain")
    uniform = Distribution.uniform()
    for case in range(config["rearrangement_cases"]):
        rng = case_rng(seed, 10, case)
        d = random_distribution(
            rng, config["max_atoms"], config["max_segments"], continuous=True
        )
        psi = random_step_function(rng, d, config["max_pieces"], "nonnegative")
        p = random_p(rng, config["p_gt1"])
        before = eval_hardy_gt1(d, psi, p).lhs_unrooted
        after = hardy_lower_functional(
            uniform, decreasing_rearrangement(compose_quantile(d, psi), p), p
        ).value
        dominance.record(
            after >= before - 2.0 * QUAD_TOL * max(1.0, before),
            lambda: f"before={before!r} after={after!r} " + _describe(d, psi, p),
        )

        law = random_distribution(rng, config["max_atoms"], config["max_segments"])
        falling = random_step_function(rng, law, config["max_pieces"], "nonincreasing")
        q = random_p(rng, config["p_gt1"])
        bounds = decreasing_bound_chain(law, falling, q)
        chain.record(bounds.holds, lambda: f"{bounds} " + _describe(law, falling, q))
    return [dominance, chain]


def _mc_target(
    rng: np.random.Generator, config: Dict[str, Any], case: int
) -> tuple[Functional, float, Callable[..., VerificationReport]]:
    """Rotate the Monte Carlo cross-check over the three functionals."""
    functional = MC_FUNCTIONALS[case % len(MC_FUNCTIONALS)]
    if functional == "hardy_gt1":
        return functional, random_p(rng, config["p_gt1"]), eval_hardy_gt1
    if functional == "hardy_lt1":
        # The draws have a finite fourth moment only for p < 1/4.
        low, high = config["p_lt1"]
        bounds = [low, max(low, min(high, MC_LT1_MAX_P))]
        return functional, random_p(rng, bounds), eval_hardy_lt1
    return functional, random_p(rng, config["p_gt1"]), eval_copson


def check_oracles(config: Dict[str, Any], seed: int) -> List[CheckResult]:
    exact = CheckResult("exact-enumeration")
    mc = CheckResult("monte-carlo", allowed_failures=config["mc_cases"] // 100)
    for case in range(config["oracle_cases"]):
        rng = case_rng(seed, 7, case)
        d = random_distribution(rng, config["max_atoms"], 0, min_atoms=1)
        psi = random_step_function(rng, d, config["max_pieces"], "nonnegative")
        p_high = random_p(rng, config["p_gt1"])
        p_low = random_p(rng, config["p_lt1"])
        pairs = (
            ("hardy_gt1", p_high, eval_hardy_gt1),
            ("hardy_lt1", p_low, eval_hardy_lt1),
            ("copson", p_high, eval_copson),
        )
        for functional, p, evaluator in pairs:
            expected = exact_discrete_eval(d, psi, p, functional)  # type: ignore[arg-type]
            actual = evaluator(d, psi, p).lhs_unrooted
            exact.record(
                _close(expected, actual, 1e-12),
                lambda: f"{functional} exact={expected!r} eval={actual!r} "
                + _describe(d, psi, p),
            )

    if config["mc_n"] >= 1000:
        for case in range(config["mc_cases"]):
            rng = case_rng(seed, 8, case)
            d = random_distribution(rng, config["max_atoms"], config["max_segments"])
            psi = random_step_function(rng, d, config["max_pieces"], "nonnegative")
            functional, p, evaluator = _mc_target(rng, config, case)
            report = evaluator(d, psi, p)
            truth = report.lhs_unrooted
            estimate = mc_estimate(d, psi, p, functional, seed + case, config["mc_n"])
            mc.record(
                estimate.agrees(truth, quad_error=report.quad_error),
                lambda: f"{functional} mc={estimate.mean!r}+-{estimate.std_error!r} "
                f"truth={truth!r} " + _describe(d, psi, p),
            )
    return [exact, mc]


def check_scaling(config: Dict[str, Any], seed: int) -> CheckResult:
    result = CheckResult("scaling")
    for case in range(config["alpha_cases"]):
        rng = case_rng(seed, 9, case)
        d = random_distribution(rng, config["max_atoms"], config["max_segments"])
        psi = random_step_function(rng, d, config["max_pieces"], "nonnegative")
        p = random_p(rng, config["p_gt1"])
        factor = float(rng.uniform(0.1, 10.0))
        base = eval_hardy_gt1(d, psi, p)
        scaled = eval_hardy_gt1(d, psi.scaled(factor), p)
        m1, mp = moments(d, psi, p)
        moved = solve_alpha_moments(factor * m1, factor * mp, p).alpha
        result.record(
            _close(scaled.lhs, factor * base.lhs, 1e-9)
            and _close(scaled.rhs_classic, factor * base.rhs_classic, 1e-9)
            and base.alpha is not None
            and abs(moved - base.alpha) <= 1e-12
            and scaled.satisfied == base.satisfied,
            lambda: f"factor={factor!r} " + _describe(d, psi, p),
        )
    return result


def run_suite(config: Dict[str, Any], seed: int) -> SuiteResult:
    result = SuiteResult(seed)
    result.checks.append(check_galois(config, seed))
    result.checks.extend(check_inequalities(config, seed))
    result.checks.extend(check_alpha(config, seed))
    result.checks.append(check_scaling(config, seed))
    result.checks.extend(check_identities(config, seed))
    result.checks.extend(check_transforms(config, seed))
    result.checks.extend(check_rearrangement_dominance(config, seed))
    result.checks.extend(check_oracles(config, seed))
    for check in result.checks:
        logger.debug("%s: %d cases, %d failures", check.name, check.cases, check.failures)
    return result


__all__ = [
    "CheckResult",
    "MC_FUNCTIONALS",
    "SuiteResult",
    "case_rng",
    "check_galois",
    "check_oracles",
    "check_rearrangement_dominance",
    "random_distribution",
    "random_p",
    "random_step_function",
    "random_unit_step",
    "run_suite",
]
