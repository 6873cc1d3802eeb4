"""State conversions, sound speed, and eigenstructure of the quasilinear system."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fannoflow import (
    Eigenbasis,
    FlowState,
    FrictionCase,
    GasParams,
    NonPositiveDensity,
    NonPositiveSoundSpeed,
    RiemannState,
    density_from_sound_speed,
    eigenvalues,
    eigenvectors,
    flux_jacobian,
    from_riemann,
    mach_number,
    primitive_state,
    riemann_invariants,
    sound_speed,
    to_riemann,
)
from fannoflow.gas import RHO_MIN


def _random_states(n: int, seed: int):
    """n tuples (params, state) with positive density and mixed-sign velocity."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        gamma = rng.uniform(1.1, 3.0)
        rho = rng.uniform(0.05, 5.0)
        u = rng.uniform(-3.0, 6.0)
        out.append((GasParams(gamma, 0.0, 0.0), FlowState(rho, u)))
    return out


def test_sound_speed_known_values():
    assert sound_speed(GasParams(4.0, 0.0, 0.0), 1.0) == pytest.approx(2.0, rel=1e-15)
    assert sound_speed(GasParams(2.0, 0.0, 0.0), 1.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert sound_speed(GasParams(3.0, 0.0, 0.0), 4.0) == pytest.approx(math.sqrt(48.0), rel=1e-15)


def test_sound_speed_inverts():
    params = GasParams(1.4, 0.0, -1.0)
    for rho in (0.03, 0.5, 1.2, 7.0):
        c = sound_speed(params, rho)
        assert density_from_sound_speed(params, c) == pytest.approx(rho, rel=1e-13)


def test_sound_speed_rejects_vacuum():
    params = GasParams(1.4, 0.0, 0.0)
    with pytest.raises(NonPositiveDensity):
        sound_speed(params, 0.0)
    with pytest.raises(NonPositiveDensity):
        sound_speed(params, -1.0)
    # the floor itself is still accepted
    sound_speed(params, RHO_MIN)


def test_density_from_sound_speed_rejects_nonpositive():
    with pytest.raises(NonPositiveSoundSpeed):
        density_from_sound_speed(GasParams(2.0, 0.0, 0.0), 0.0)


def test_eigenvalues_known_values():
    params = GasParams(4.0, 0.0, 0.0)  # c(rho=1) = 2
    for u, expected in ((3.0, (1.0, 5.0)), (2.0, (0.0, 4.0)), (1.0, (-1.0, 3.0))):
        lam1, lam2 = eigenvalues(params, FlowState(1.0, u))
        assert lam1 == pytest.approx(expected[0], abs=1e-15)
        assert lam2 == pytest.approx(expected[1], abs=1e-15)


def test_mach_number_sign_agrees_with_lambda1():
    for params, state in _random_states(200, seed=91):
        lam1, _ = eigenvalues(params, state)
        supersonic = mach_number(params, state) > 1.0
        assert supersonic == (lam1 > 0.0)


def test_gas_params_rejects_gamma_at_or_below_one():
    with pytest.raises(ValueError):
        GasParams(1.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        GasParams(0.9, 0.0, -1.0)


def test_friction_case_dispatch_is_exact():
    assert GasParams(2.0, 1.0, -1.0).case is FrictionCase.ALPHA_ONE
    assert GasParams(2.0, -2.0, -1.0).case is FrictionCase.ALPHA_NEG_GAMMA
    assert GasParams(2.0, 0.3, -1.0).case is FrictionCase.GENERIC
    # nearby values must not snap onto the logarithmic branches
    assert GasParams(2.0, 1.0 + 1e-12, -1.0).case is FrictionCase.GENERIC
    assert GasParams(2.0, -2.0 + 1e-12, -1.0).case is FrictionCase.GENERIC


def test_flow_state_rejects_vacuum():
    with pytest.raises(NonPositiveDensity):
        FlowState(0.0, 1.0)


def test_riemann_state_requires_positive_spread():
    with pytest.raises(NonPositiveSoundSpeed):
        RiemannState(1.0, 1.0)
    with pytest.raises(NonPositiveSoundSpeed):
        RiemannState(2.0, 1.0)


def test_to_riemann_known_values():
    # gamma=3 with c=2 needs rho = sqrt(4/3); r = u/2 - c/2, s = u/2 + c/2
    params = GasParams(3.0, 0.0, 0.0)
    state = FlowState(math.sqrt(4.0 / 3.0), 3.0)
    rs = to_riemann(params, state)
    assert rs.r == pytest.approx(0.5, rel=1e-12)
    assert rs.s == pytest.approx(2.5, rel=1e-12)


def test_to_riemann_sonic_state_has_zero_r():
    # u equal to the sound speed makes r = u/2 - c/(gamma-1) vanish when
    # gamma = 3; use the same float for both so the cancellation is exact.
    params = GasParams(3.0, 0.0, 0.0)
    c = float(sound_speed(params, 1.0))
    rs = to_riemann(params, FlowState(1.0, c))
    assert rs.r == 0.0


def test_riemann_round_trip_single():
    params = GasParams(1.4, 0.0, 0.0)
    state = FlowState(1.2, 2.7)
    back = from_riemann(params, to_riemann(params, state))
    assert back.rho == pytest.approx(1.2, rel=1e-12)
    assert back.u == pytest.approx(2.7, rel=1e-12)


def test_riemann_round_trip_random_states():
    for params, state in _random_states(100, seed=42):
        back = from_riemann(params, to_riemann(params, state))
        assert math.isclose(back.rho, state.rho, rel_tol=1e-12)
        assert math.isclose(back.u, state.u, rel_tol=1e-12, abs_tol=1e-12)


def test_primitive_state_rejects_collapsed_invariants():
    with pytest.raises(NonPositiveSoundSpeed):
        primitive_state(GasParams(1.4, 0.0, 0.0), 1.0, 1.0)


def test_riemann_invariants_accept_arrays():
    params = GasParams(2.0, 0.0, 0.0)
    rho = np.array([0.5, 1.0, 2.0])
    u = np.array([1.0, 2.0, 3.0])
    r, s = riemann_invariants(params, rho, u)
    assert r.shape == (3,)
    assert np.all(s > r)
    rho_back, u_back = primitive_state(params, r, s)
    np.testing.assert_allclose(rho_back, rho, rtol=1e-12)
    np.testing.assert_allclose(u_back, u, rtol=1e-12)


def test_eigenvectors_biorthogonal_known_state():
    basis = eigenvectors(GasParams(1.4, 0.0, 0.0), FlowState(1.0, 2.0))
    assert isinstance(basis, Eigenbasis)
    for li, want in ((basis.l1, (1.0, 0.0)), (basis.l2, (0.0, 1.0))):
        assert abs(float(li @ basis.r1) - want[0]) <= 1e-14
        assert abs(float(li @ basis.r2) - want[1]) <= 1e-14


def test_eigenvectors_unit_norm_random_states():
    for params, state in _random_states(100, seed=7):
        basis = eigenvectors(params, state)
        assert abs(float(np.linalg.norm(basis.r1)) - 1.0) <= 1e-14
        assert abs(float(np.linalg.norm(basis.r2)) - 1.0) <= 1e-14


def test_eigenvectors_diagonalize_flux_jacobian():
    for params, state in _random_states(100, seed=12):
        a = flux_jacobian(params, state)
        lam1, lam2 = eigenvalues(params, state)
        basis = eigenvectors(params, state)
        scale = float(np.linalg.norm(a))
        assert float(np.linalg.norm(a @ basis.r1 - lam1 * basis.r1)) <= 1e-12 * scale
        assert float(np.linalg.norm(a @ basis.r2 - lam2 * basis.r2)) <= 1e-12 * scale


def test_flux_jacobian_entries():
    a = flux_jacobian(GasParams(2.0, 0.0, 0.0), FlowState(0.5, 3.0))
    np.testing.assert_allclose(a, [[3.0, 0.5], [2.0, 3.0]], rtol=1e-15)
