"""Randomized properties over generated laws and step functions."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from hardy_core.alpha_solver import root_function, solve_alpha
from hardy_core.dist_core import (
    Distribution,
    cdf,
    compose_quantile,
    galois_holds,
    integrate,
    quantile,
)
from hardy_core.functionals import (
    decreasing_bound_chain,
    eval_copson,
    eval_hardy_gt1,
    eval_hardy_lt1,
    hardy_lower_functional,
    quantile_domain_lhs,
)
from hardy_core.oracle import exact_discrete_eval, power_integral_identity
from hardy_core.suite import (
    case_rng,
    random_distribution,
    random_p,
    random_step_function,
    random_unit_step,
)
from hardy_core.transforms import (
    decreasing_rearrangement,
    partial_average,
    stretch_down,
    stretch_up,
    unit_norm,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
P_GT1 = [1.05, 6.0]
P_LT1 = [0.05, 0.95]


def close(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@settings(deadline=None, max_examples=60)
@given(seeds)
def test_quantile_inverts_the_cdf(seed):
    rng = case_rng(seed)
    d = random_distribution(rng)
    for u in 1.0 - rng.random(10):
        assert galois_holds(d, float(u))
        x = quantile(d, float(u))
        assert cdf(d, x) >= float(u) - 1e-12


@settings(deadline=None, max_examples=40)
@given(seeds)
def test_inequalities_hold(seed):
    rng = case_rng(seed)
    d = random_distribution(rng)
    signed = random_step_function(rng, d, kind="signed")
    psi = random_step_function(rng, d, kind="nonnegative")
    p_high = random_p(rng, P_GT1)
    p_low = random_p(rng, P_LT1)

    report = eval_hardy_gt1(d, signed, p_high)
    assert report.status != "violated"
    if report.rhs_sharpened is not None:
        assert report.rhs_sharpened <= report.rhs_classic * (1.0 + 1e-12)
    assert eval_hardy_lt1(d, psi, p_low).status != "violated"
    assert eval_copson(d, signed, p_high).status != "violated"
    assert eval_copson(d, psi, p_low).status != "violated"


@settings(deadline=None, max_examples=40)
@given(seeds)
def test_alpha_is_a_bracketed_root(seed):
    rng = case_rng(seed)
    d = random_distribution(rng)
    psi = random_step_function(rng, d, kind="signed")
    p = random_p(rng, P_GT1)
    root = solve_alpha(d, psi, p)
    assert 0.0 <= root.alpha <= 1.0
    assert abs(root.residual) <= 1e-12 * max(1.0, root.m1)
    g = root_function(root.m1, root.mp, p)
    assert g(0.0) > 0.0
    assert g(1.0) <= 1e-12 * max(1.0, root.m1)


@settings(deadline=None, max_examples=30)
@given(seeds)
def test_quantile_domain_agrees_with_x_domain(seed):
    rng = case_rng(seed)
    d = random_distribution(rng)
    psi = random_step_function(rng, d, kind="signed")
    p = random_p(rng, P_GT1)
    x_domain = hardy_lower_functional(d, psi.abs(), p).value
    u_domain = quantile_domain_lhs(d, psi, p).value
    assert close(x_domain, u_domain, 2e-10)


@settings(deadline=None, max_examples=30)
@given(seeds)
def test_power_identity_on_continuous_laws(seed):
    rng = case_rng(seed)
    d = random_distribution(rng, continuous=True)
    psi = random_step_function(rng, d, kind="nonnegative")
    for mode, bounds in (("lower", P_GT1), ("tail", P_LT1)):
        p = random_p(rng, bounds)
        check = power_integral_identity(d, psi, p, mode)
        assert check.gap <= 2e-10 * max(1.0, check.lhs)


@settings(deadline=None, max_examples=30)
@given(seeds)
def test_stretches_preserve_the_norm(seed):
    rng = case_rng(seed)
    d = random_distribution(rng, min_atoms=1)
    atom = d.atoms[int(rng.integers(0, len(d.atoms)))]
    psi = random_step_function(rng, d, kind="nonincreasing")
    p = random_p(rng, P_GT1)
    up = stretch_up(d, psi, atom.x, p)
    assert close(up.norm_before, up.norm_after, 1e-9)
    assert up.functional_after >= up.functional_before - 1e-9 * max(1.0, up.functional_before)
    assert abs(solve_alpha(up.dist, up.psi, p).alpha - solve_alpha(d, psi, p).alpha) <= 1e-9

    q = random_p(rng, P_LT1)
    down = stretch_down(d, psi, atom.x, q)
    assert close(down.norm_before, down.norm_after, 1e-9)
    assert math.isinf(down.functional_before) or (
        down.functional_after <= down.functional_before + 1e-9 * max(1.0, down.functional_before)
    )


@settings(deadline=None, max_examples=60)
@given(seeds)
def test_rearrangement_dominates_partial_averages(seed):
    rng = case_rng(seed)
    chi = random_unit_step(rng)
    p = random_p(rng, P_GT1)
    result = decreasing_rearrangement(chi, p)
    assert close(unit_norm(chi, p), unit_norm(result, p), 1e-10)
    for u in 1.0 - rng.random(20):
        assert partial_average(result, float(u)) >= partial_average(chi, float(u)) - 1e-10


@settings(deadline=None, max_examples=40)
@given(seeds)
def test_exact_enumeration_matches_the_evaluators(seed):
    rng = case_rng(seed)
    d = random_distribution(rng, max_segments=0, min_atoms=1)
    psi = random_step_function(rng, d, kind="nonnegative")
    p = random_p(rng, P_GT1)
    assert close(
        exact_discrete_eval(d, psi, p, "hardy_gt1"), eval_hardy_gt1(d, psi, p).lhs_unrooted, 1e-12
    )
    assert close(
        exact_discrete_eval(d, psi, p, "copson"), eval_copson(d, psi, p).lhs_unrooted, 1e-12
    )


@settings(deadline=None, max_examples=40)
@given(seeds, st.floats(min_value=0.1, max_value=10.0))
def test_homogeneity(seed, factor):
    rng = case_rng(seed)
    d = random_distribution(rng)
    psi = random_step_function(rng, d, kind="nonnegative")
    p = random_p(rng, P_GT1)
    base = eval_hardy_gt1(d, psi, p)
    scaled = eval_hardy_gt1(d, psi.scaled(factor), p)
    assert close(scaled.lhs, factor * base.lhs, 1e-9)
    assert abs(scaled.alpha - base.alpha) <= 1e-10
    assert close(integrate(d, psi.scaled(factor)).value, factor * integrate(d, psi).value, 1e-12)


@settings(deadline=None, max_examples=40)
@given(seeds)
def test_decreasing_rearrangement_raises_the_lower_functional(seed):
    rng = case_rng(seed)
    d = random_distribution(rng, continuous=True)
    psi = random_step_function(rng, d, kind="nonnegative")
    p = random_p(rng, P_GT1)
    before = eval_hardy_gt1(d, psi, p).lhs_unrooted
    chi = compose_quantile(d, psi)
    assert close(hardy_lower_functional(Distribution.uniform(), chi, p).value, before, 2e-10)
    after = hardy_lower_functional(
        Distribution.uniform(), decreasing_rearrangement(chi, p), p
    ).value
    assert after >= before - 2e-10 * max(1.0, before)


@settings(deadline=None, max_examples=40)
@given(seeds)
def test_bound_chain_for_nonincreasing_psi(seed):
    rng = case_rng(seed)
    d = random_distribution(rng)
    psi = random_step_function(rng, d, kind="nonincreasing")
    p = random_p(rng, P_GT1)
    chain = decreasing_bound_chain(d, psi, p)
    assert chain.holds
    assert close(chain.quantile_lhs, eval_hardy_gt1(d, psi, p).lhs_unrooted, 2e-10)
