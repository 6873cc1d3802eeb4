"""Steady profiles: potentials, regime classification, choking length."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import REF_LENGTH
from fannoflow import (
    DuctTooLong,
    GasParams,
    NonPositiveSpeed,
    Regime,
    SonicUpstream,
    UNBOUNDED,
    UpstreamState,
    ZeroBeta,
    classify_regime,
    corner_derivatives,
    critical_speed,
    implicit_potential,
    max_duct_length,
    potential_slope,
    solve_profile,
)
from oracles import blowup_length, rk4_profile

REF_L_MAX = 2.25 - 1.5 * 2.0 ** (1.0 / 3.0)  # H(u_minus) - H(s_c) for the reference case


def _branch_params():
    """One (params, upstream) pair per antiderivative branch, all beta < 0."""
    return [
        (GasParams(2.0, 0.0, -1.0), UpstreamState(1.0, 2.0)),  # generic
        (GasParams(3.0, 1.0, -1.0), UpstreamState(1.0, 2.0)),  # alpha = 1
        (GasParams(2.0, -2.0, -1.0), UpstreamState(1.0, 2.0)),  # alpha = -gamma
    ]


def test_critical_speed_known_values():
    assert critical_speed(GasParams(1.7, 0.0, 0.0), UpstreamState(1.0, 1.0)) == pytest.approx(
        1.0, rel=1e-15
    )
    assert critical_speed(GasParams(2.0, 0.0, 0.0), UpstreamState(8.0, 1.0)) == pytest.approx(
        4.0, rel=1e-14
    )
    assert critical_speed(GasParams(3.0, 0.0, 0.0), UpstreamState(4.0, 1.0)) == pytest.approx(
        2.0, rel=1e-14
    )


def test_implicit_potential_known_values():
    # generic branch: s + K*s**-2/2 with K = 1 at s = 1 gives 1.5
    params = GasParams(2.0, 0.0, -1.0)
    up = UpstreamState(1.0, 1.0)
    assert implicit_potential(params, up, 1.0) == pytest.approx(1.5, rel=1e-15)
    # alpha-one branch: ln s + K*s**-4/4 with K = 1 at s = 1 gives 0.25
    params = GasParams(3.0, 1.0, -1.0)
    assert implicit_potential(params, up, 1.0) == pytest.approx(0.25, rel=1e-15)


def test_potential_slope_vanishes_at_critical_speed():
    rng = np.random.default_rng(3)
    for _ in range(30):
        gamma = rng.uniform(1.2, 2.8)
        alpha = rng.choice([1.0, -gamma, rng.uniform(-1.0, 0.9)])
        params = GasParams(gamma, float(alpha), -1.0)
        up = UpstreamState(rng.uniform(0.5, 2.0), rng.uniform(0.5, 3.0))
        s_c = critical_speed(params, up)
        # curvature from a centred difference of the slope
        d = 1e-6 * s_c
        curv = (potential_slope(params, up, s_c + d) - potential_slope(params, up, s_c - d)) / (
            2.0 * d
        )
        assert abs(potential_slope(params, up, s_c)) <= 1e-8 * abs(curv) * s_c


def test_potential_slope_is_derivative_of_potential():
    # all three branches; centred difference of H against H'
    for params, up in _branch_params():
        for s in (0.7, 1.3, 2.4):
            d = 1e-6 * s
            fd = (implicit_potential(params, up, s + d) - implicit_potential(params, up, s - d)) / (
                2.0 * d
            )
            assert fd == pytest.approx(potential_slope(params, up, s), rel=1e-8)


def test_potential_rejects_nonpositive_speed():
    params = GasParams(2.0, 0.0, -1.0)
    up = UpstreamState(1.0, 2.0)
    with pytest.raises(NonPositiveSpeed):
        implicit_potential(params, up, 0.0)
    with pytest.raises(NonPositiveSpeed):
        potential_slope(params, up, -1.0)


def test_upstream_state_requires_positive_speeds():
    with pytest.raises(NonPositiveSpeed):
        UpstreamState(0.0, 1.0)
    with pytest.raises(NonPositiveSpeed):
        UpstreamState(1.0, -2.0)


def test_classify_regime_four_cases():
    up_sub = UpstreamState(2.0, 1.0)
    up_sup = UpstreamState(1.0, 2.0)
    assert classify_regime(GasParams(2.0, 0.0, 1.0), up_sub) is Regime.SUBSONIC_DECELERATING
    assert classify_regime(GasParams(2.0, 0.0, 1.0), up_sup) is Regime.SUPERSONIC_ACCELERATING
    assert classify_regime(GasParams(2.0, 0.0, -1.0), up_sub) is Regime.SUBSONIC_CHOKING
    assert classify_regime(GasParams(2.0, 0.0, -1.0), up_sup) is Regime.SUPERSONIC_CHOKING


def test_classify_regime_rejects_zero_beta_and_sonic_data():
    with pytest.raises(ZeroBeta):
        classify_regime(GasParams(2.0, 0.0, 0.0), UpstreamState(1.0, 2.0))
    with pytest.raises(SonicUpstream):
        classify_regime(GasParams(2.0, 0.0, -1.0), UpstreamState(1.5, 1.5))


def test_max_duct_length_reference_value(ref_params, ref_upstream):
    l_max = max_duct_length(ref_params, ref_upstream)
    assert l_max == pytest.approx(REF_L_MAX, rel=1e-14)
    assert abs(l_max - 0.3601178) <= 2e-6


def test_max_duct_length_alpha_one_closed_form():
    # ln 2 / 2 - 3/16 for gamma=3, alpha=1, c=1, u=2, beta=-1
    params = GasParams(3.0, 1.0, -1.0)
    up = UpstreamState(1.0, 2.0)
    assert max_duct_length(params, up) == pytest.approx(0.5 * math.log(2.0) - 3.0 / 16.0, rel=1e-14)


def test_max_duct_length_alpha_neg_gamma_closed_form():
    # 2 - (4/3) ln 2 for gamma=2, alpha=-2, c=1, u=2, beta=-1
    params = GasParams(2.0, -2.0, -1.0)
    up = UpstreamState(1.0, 2.0)
    assert max_duct_length(params, up) == pytest.approx(2.0 - 4.0 * math.log(2.0) / 3.0, rel=1e-14)


def test_max_duct_length_matches_ode_blowup():
    for params, up in _branch_params():
        l_max = max_duct_length(params, up)
        l_ode = blowup_length(
            params.gamma, params.alpha, params.beta, up.c_minus, up.u_minus, x_max=1.5 * l_max
        )
        assert abs(l_ode - l_max) <= 1e-6 * l_max


def test_max_duct_length_unbounded_for_nonnegative_beta():
    up = UpstreamState(1.0, 2.0)
    assert max_duct_length(GasParams(2.0, 0.0, 1.0), up) is UNBOUNDED
    assert max_duct_length(GasParams(2.0, 0.0, 0.0), up) is UNBOUNDED
    assert repr(UNBOUNDED) == "UNBOUNDED"


def test_max_duct_length_scales_inversely_with_beta():
    up = UpstreamState(1.0, 2.0)
    products = [
        abs(beta) * max_duct_length(GasParams(2.0, 0.0, beta), up)
        for beta in (-0.5, -1.0, -2.0, -4.0)
    ]
    for p in products[1:]:
        assert p == pytest.approx(products[0], rel=1e-14)


def test_max_duct_length_rejects_sonic_upstream():
    with pytest.raises(SonicUpstream):
        max_duct_length(GasParams(2.0, 0.0, -1.0), UpstreamState(1.0, 1.0))


def test_solve_profile_inflow_values_exact(ref_params, ref_upstream):
    profile = solve_profile(ref_params, ref_upstream, REF_LENGTH, 41)
    assert profile.u_tilde[0] == ref_upstream.u_minus
    assert profile.c_tilde[0] == ref_upstream.c_minus
    assert profile.xs[0] == 0.0
    assert profile.length == REF_LENGTH
    assert profile.regime is Regime.SUPERSONIC_CHOKING


def test_solve_profile_zero_beta_is_constant():
    params = GasParams(2.0, 0.0, 0.0)
    up = UpstreamState(1.0, 2.0)
    profile = solve_profile(params, up, 1.0, 17)
    assert np.all(profile.u_tilde == up.u_minus)
    assert np.all(profile.c_tilde == up.c_minus)
    assert profile.regime is Regime.CONSTANT
    assert profile.l_max is UNBOUNDED


def test_solve_profile_matches_rk4_reference(ref_params, ref_upstream):
    n_seg = 200
    profile = solve_profile(ref_params, ref_upstream, REF_LENGTH, n_seg + 1)
    oracle = rk4_profile(2.0, 0.0, -1.0, 1.0, 2.0, REF_LENGTH, n_seg, steps_per_segment=200)
    err = np.abs(profile.u_tilde - np.asarray(oracle)).max()
    assert err <= 1e-8 * ref_upstream.u_minus


def test_solve_profile_conservation_relation(ref_params, ref_upstream):
    profile = solve_profile(ref_params, ref_upstream, REF_LENGTH, 101)
    k_ref = ref_upstream.c_minus**2 * ref_upstream.u_minus ** (ref_params.gamma - 1.0)
    k = profile.c_tilde**2 * profile.u_tilde ** (ref_params.gamma - 1.0)
    assert np.abs(k - k_ref).max() <= 1e-10 * k_ref


def test_solve_profile_potential_consistency():
    for params, up in _branch_params():
        l_max = max_duct_length(params, up)
        profile = solve_profile(params, up, 0.8 * l_max, 101)
        pot0 = implicit_potential(params, up, up.u_minus)
        residual = implicit_potential(params, up, profile.u_tilde) - (
            pot0 + params.beta * profile.xs
        )
        assert np.abs(residual).max() <= 1e-10 * max(1.0, abs(pot0))


def test_solve_profile_regime_orderings():
    # strict pointwise orderings away from the inflow, one per regime
    nx = 401

    params = GasParams(2.0, 0.0, 1.0)
    up = UpstreamState(2.0, 1.0)
    p = solve_profile(params, up, 0.6, nx)
    u, c = p.u_tilde[1:], p.c_tilde[1:]
    assert np.all((0 < u) & (u < up.u_minus) & (up.c_minus < c))

    up = UpstreamState(1.0, 2.0)
    p = solve_profile(params, up, 0.6, nx)
    u, c = p.u_tilde[1:], p.c_tilde[1:]
    assert np.all((0 < c) & (c < up.c_minus) & (up.u_minus < u))

    params = GasParams(2.0, 0.0, -1.0)
    up = UpstreamState(2.0, 1.0)
    s_c = critical_speed(params, up)
    p = solve_profile(params, up, 0.8 * float(max_duct_length(params, up)), nx)
    u, c = p.u_tilde[1:], p.c_tilde[1:]
    assert np.all((up.u_minus < u) & (u < s_c) & (s_c < c) & (c < up.c_minus))

    up = UpstreamState(1.0, 2.0)
    s_c = critical_speed(params, up)
    p = solve_profile(params, up, 0.8 * float(max_duct_length(params, up)), nx)
    u, c = p.u_tilde[1:], p.c_tilde[1:]
    assert np.all((up.c_minus < c) & (c < s_c) & (s_c < u) & (u < up.u_minus))


def test_solve_profile_choking_monotonicity(ref_params, ref_upstream):
    profile = solve_profile(ref_params, ref_upstream, REF_LENGTH, 101)
    assert np.all(np.diff(profile.u_tilde) < 0)
    assert np.all(np.diff(profile.c_tilde) > 0)
    assert np.all(np.diff(profile.rho_tilde) > 0)


def test_solve_profile_rejects_choked_duct(ref_params, ref_upstream):
    with pytest.raises(DuctTooLong) as excinfo:
        solve_profile(ref_params, ref_upstream, 0.4, 51)
    assert excinfo.value.l_max == pytest.approx(REF_L_MAX, rel=1e-12)
    with pytest.raises(DuctTooLong):
        solve_profile(ref_params, ref_upstream, REF_L_MAX, 51)


def test_solve_profile_barely_fitting_duct(ref_params, ref_upstream):
    profile = solve_profile(ref_params, ref_upstream, REF_L_MAX * (1.0 - 1e-10), 51)
    s_c = critical_speed(ref_params, ref_upstream)
    assert profile.u_tilde[-1] == pytest.approx(s_c, rel=1e-4)
    assert profile.u_tilde[-1] > s_c


def test_solve_profile_supersonic_branch_degenerates():
    # alpha > 1 with beta > 0: the potential plateaus, so a long enough duct
    # has no steady continuation and must be reported as such
    params = GasParams(2.0, 2.0, 1.0)
    up = UpstreamState(1.0, 2.0)
    with pytest.raises(DuctTooLong):
        solve_profile(params, up, 50.0, 11)


def test_solve_profile_argument_validation(ref_params, ref_upstream):
    with pytest.raises(ValueError):
        solve_profile(ref_params, ref_upstream, REF_LENGTH, 1)
    with pytest.raises(ValueError):
        solve_profile(ref_params, ref_upstream, 0.0, 11)
    with pytest.raises(SonicUpstream):
        solve_profile(ref_params, UpstreamState(2.0, 2.0), 0.1, 11)


def test_solve_profile_beta_positive_long_duct():
    # unbounded regime: profiles exist for any length
    params = GasParams(1.4, 0.0, 0.5)
    up = UpstreamState(1.0, 1.8)
    profile = solve_profile(params, up, 10.0, 201)
    assert profile.l_max is UNBOUNDED
    assert np.all(np.diff(profile.u_tilde) > 0)
    assert np.all(profile.u_tilde / profile.c_tilde > 1.0)


def test_corner_derivatives_match_profile(ref_params, ref_upstream):
    rho0, u0, drho_dx, du_dx = corner_derivatives(ref_params, ref_upstream)
    profile = solve_profile(ref_params, ref_upstream, 0.01, 2001)
    dx = profile.xs[1] - profile.xs[0]
    fd_u = (-1.5 * profile.u_tilde[0] + 2.0 * profile.u_tilde[1] - 0.5 * profile.u_tilde[2]) / dx
    fd_rho = (
        -1.5 * profile.rho_tilde[0] + 2.0 * profile.rho_tilde[1] - 0.5 * profile.rho_tilde[2]
    ) / dx
    assert u0 == ref_upstream.u_minus
    assert rho0 == profile.rho_tilde[0]
    assert du_dx == pytest.approx(fd_u, rel=1e-8)
    assert drho_dx == pytest.approx(fd_rho, rel=1e-8)


def test_corner_derivatives_signs(ref_params, ref_upstream):
    # supersonic choking: u falls, rho rises
    _, _, drho_dx, du_dx = corner_derivatives(ref_params, ref_upstream)
    assert du_dx < 0
    assert drho_dx > 0
