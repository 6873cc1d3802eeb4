"""Steady duct flows: implicit potentials, choking length, profile sampling.

A steady solution obeys the conservation relation

    c(x) = c_minus * (u_minus / u(x)) ** ((gamma - 1)/2)

so the velocity alone determines the state.  The velocity itself is pinned
down by an implicit potential H with H'(s) = s**(-alpha) - K * s**(-gamma-alpha-1)
and H(u(x)) = H(u_minus) + beta * x, where K = c_minus**2 * u_minus**(gamma-1).
H has its minimum at the critical speed s_c; for beta < 0 the profile marches
toward s_c and chokes at the maximal duct length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import DuctTooLong, NonPositiveSpeed, SonicUpstream, ZeroBeta
from .gas import FrictionCase, GasParams, density_from_sound_speed

# Root-refinement settings for the implicit potential inversion.
_ROOT_RTOL = 1e-12
_ROOT_MAXITER = 200
_MAX_BRACKET_GROWTH = 60  # doublings/halvings before giving up on a bracket


class Regime(Enum):
    """Qualitative behaviour of a steady profile (sign of beta x sonic side)."""

    SUBSONIC_DECELERATING = "subsonic-decelerating"  # beta > 0, c_- > u_-
    SUPERSONIC_ACCELERATING = "supersonic-accelerating"  # beta > 0, u_- > c_-
    SUBSONIC_CHOKING = "subsonic-choking"  # beta < 0, c_- > u_-
    SUPERSONIC_CHOKING = "supersonic-choking"  # beta < 0, u_- > c_-
    CONSTANT = "constant"  # beta = 0


class _Unbounded:
    """Singleton marking an infinite maximal duct length; compare with ``is``."""

    __slots__ = ()

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = _Unbounded()


@dataclass(frozen=True)
class UpstreamState:
    """Inflow sound speed and velocity, both strictly positive."""

    c_minus: float
    u_minus: float

    def __post_init__(self):
        if not self.c_minus > 0.0:
            raise NonPositiveSpeed(f"c_minus must be positive, got {self.c_minus}")
        if not self.u_minus > 0.0:
            raise NonPositiveSpeed(f"u_minus must be positive, got {self.u_minus}")


@dataclass(frozen=True)
class SteadyProfile:
    """Sampled steady solution on a uniform grid over [0, length]."""

    xs: np.ndarray
    u_tilde: np.ndarray
    c_tilde: np.ndarray
    rho_tilde: np.ndarray
    regime: Regime
    l_max: object  # float or UNBOUNDED
    params: GasParams
    upstream: UpstreamState

    @property
    def mach(self) -> np.ndarray:
        return self.u_tilde / self.c_tilde

    @property
    def length(self) -> float:
        return float(self.xs[-1])


def _coeff(up: UpstreamState, params: GasParams) -> float:
    """K = c_minus**2 * u_minus**(gamma - 1)."""
    return up.c_minus ** 2 * up.u_minus ** (params.gamma - 1.0)


def critical_speed(params: GasParams, up: UpstreamState) -> float:
    """Sonic speed s_c = c_minus**(2/(gamma+1)) * u_minus**((gamma-1)/(gamma+1))."""
    gp1 = params.gamma + 1.0
    return up.c_minus ** (2.0 / gp1) * up.u_minus ** ((params.gamma - 1.0) / gp1)


def implicit_potential(params: GasParams, up: UpstreamState, s):
    """Antiderivative H with H(u(x)) = H(u_minus) + beta * x along the profile.

    The antiderivative branch depends on alpha: a logarithm appears when
    alpha equals 1 or -gamma exactly.
    """
    if np.any(np.asarray(s) <= 0.0):
        raise NonPositiveSpeed(f"speed argument must be positive, got {s}")
    gamma, alpha = params.gamma, params.alpha
    K = _coeff(up, params)
    case = params.case
    if case is FrictionCase.ALPHA_ONE:
        return np.log(s) + K * s ** (-gamma - 1.0) / (gamma + 1.0)
    if case is FrictionCase.ALPHA_NEG_GAMMA:
        return s ** (gamma + 1.0) / (gamma + 1.0) - K * np.log(s)
    return s ** (1.0 - alpha) / (1.0 - alpha) + K * s ** (-gamma - alpha) / (gamma + alpha)


def potential_slope(params: GasParams, up: UpstreamState, s):
    """H'(s) = s**(-alpha) - K * s**(-gamma - alpha - 1); zero exactly at s_c."""
    if np.any(np.asarray(s) <= 0.0):
        raise NonPositiveSpeed(f"speed argument must be positive, got {s}")
    gamma, alpha = params.gamma, params.alpha
    K = _coeff(up, params)
    return s ** (-alpha) - K * s ** (-gamma - alpha - 1.0)


def classify_regime(params: GasParams, up: UpstreamState) -> Regime:
    """Which of the four monotone regimes the data selects; beta must be nonzero."""
    if params.beta == 0.0:
        raise ZeroBeta("regime classification needs beta != 0")
    if up.c_minus == up.u_minus:
        raise SonicUpstream(f"upstream state is sonic: c_minus = u_minus = {up.c_minus}")
    if params.beta > 0.0:
        if up.c_minus > up.u_minus:
            return Regime.SUBSONIC_DECELERATING
        return Regime.SUPERSONIC_ACCELERATING
    if up.c_minus > up.u_minus:
        return Regime.SUBSONIC_CHOKING
    return Regime.SUPERSONIC_CHOKING


def max_duct_length(params: GasParams, up: UpstreamState):
    """Maximal duct length before choking, or UNBOUNDED when beta >= 0.

    For beta < 0 this is (H(s_c) - H(u_minus)) / beta, the distance at which
    the profile reaches the sonic speed s_c.
    """
    if up.c_minus == up.u_minus:
        raise SonicUpstream(f"upstream state is sonic: c_minus = u_minus = {up.c_minus}")
    if params.beta >= 0.0:
        return UNBOUNDED
    s_c = critical_speed(params, up)
    pot0 = implicit_potential(params, up, up.u_minus)
    return (implicit_potential(params, up, s_c) - pot0) / params.beta


def _invert_potential(params, up, target, s_c, supersonic, pot0):
    """Solve H(s) = target on the branch containing u_minus."""

    def f(s):
        return implicit_potential(params, up, s) - target

    if params.beta < 0.0:
        # Root trapped between u_minus and the sonic speed.
        a, b = (s_c, up.u_minus) if supersonic else (up.u_minus, s_c)
        fa, fb = f(a), f(b)
        # Rounding can leave the choke endpoint fractionally on the wrong
        # side when the duct nearly exhausts l_max; accept s_c then.
        if fa * fb > 0.0:
            f_choke = fa if supersonic else fb
            if abs(f_choke) <= 1e-10 * max(1.0, abs(pot0)):
                return s_c
            raise DuctTooLong(f"potential target {target} unreachable before choking")
    elif supersonic:
        # u grows without bound; expand the upper bracket endpoint.
        a = up.u_minus
        b = 2.0 * max(up.u_minus, s_c)
        for _ in range(_MAX_BRACKET_GROWTH):
            if f(b) >= 0.0:
                break
            b *= 2.0
        else:
            raise DuctTooLong(
                "steady supersonic branch degenerates: potential plateaus "
                f"below target {target} (alpha = {params.alpha})"
            )
    else:
        # u decays toward zero; expand the lower bracket endpoint.
        b = up.u_minus
        a = 0.5 * min(up.u_minus, s_c)
        for _ in range(_MAX_BRACKET_GROWTH):
            if f(a) >= 0.0:
                break
            a *= 0.5
        else:
            raise DuctTooLong(
                "steady subsonic branch degenerates: potential plateaus "
                f"below target {target} (alpha = {params.alpha})"
            )
    root = brentq(f, a, b, xtol=1e-15 * s_c, rtol=_ROOT_RTOL, maxiter=_ROOT_MAXITER)
    if abs(root - s_c) < 1e3 * np.finfo(float).eps * s_c:
        # Landed essentially on the sonic speed: only legitimate if the
        # potential really attains the target there.
        if abs(f(root)) > 1e-10 * max(1.0, abs(pot0)):
            raise DuctTooLong(f"profile reaches the sonic speed before the target {target}")
    return root


def solve_profile(params: GasParams, up: UpstreamState, length: float, n_points: int) -> SteadyProfile:
    """Sample the steady profile on n_points uniform points over [0, length].

    Parameters
    ----------
    params : GasParams
    up : UpstreamState
        Non-sonic inflow data imposed at x = 0.
    length : float
        Duct length; must be strictly below the maximal length when beta < 0.
    n_points : int
        Grid size, at least 2.

    Returns
    -------
    SteadyProfile
        Velocity, sound speed, and density arrays plus regime and l_max.
    """
    if n_points < 2:
        raise ValueError(f"need at least 2 points, got {n_points}")
    if not length > 0.0:
        raise ValueError(f"length must be positive, got {length}")
    if up.c_minus == up.u_minus:
        raise SonicUpstream(f"upstream state is sonic: c_minus = u_minus = {up.c_minus}")

    gamma = params.gamma
    xs = np.linspace(0.0, length, n_points)
    rho_minus = density_from_sound_speed(params, up.c_minus)

    if params.beta == 0.0:
        u = np.full(n_points, up.u_minus)
        c = np.full(n_points, up.c_minus)
        rho = np.full(n_points, rho_minus)
        return SteadyProfile(xs, u, c, rho, Regime.CONSTANT, UNBOUNDED, params, up)

    regime = classify_regime(params, up)
    l_max = max_duct_length(params, up)
    if l_max is not UNBOUNDED and length >= l_max:
        raise DuctTooLong(
            f"duct length {length} reaches the maximal length {l_max}; the profile chokes",
            l_max=l_max,
        )

    s_c = critical_speed(params, up)
    pot0 = implicit_potential(params, up, up.u_minus)
    supersonic = up.u_minus > up.c_minus
    u = np.empty(n_points)
    u[0] = up.u_minus
    for i in range(1, n_points):
        u[i] = _invert_potential(params, up, pot0 + params.beta * xs[i], s_c, supersonic, pot0)

    c = np.empty(n_points)
    c[0] = up.c_minus
    c[1:] = up.c_minus * (up.u_minus / u[1:]) ** (0.5 * (gamma - 1.0))
    rho = np.empty(n_points)
    rho[0] = rho_minus
    rho[1:] = density_from_sound_speed(params, c[1:])
    return SteadyProfile(xs, u, c, rho, regime, l_max, params, up)


def corner_derivatives(params: GasParams, up: UpstreamState) -> tuple[float, float, float, float]:
    """Exact (rho, u, drho/dx, du/dx) of the steady profile at x = 0.

    Differentiating the conservation relation gives c' = -(gamma-1) c u' / (2u)
    and rho' = 2 rho c' / ((gamma-1) c); u' comes from the steady velocity law
    u' = beta / H'(u).
    """
    if up.c_minus == up.u_minus:
        raise SonicUpstream(f"upstream state is sonic: c_minus = u_minus = {up.c_minus}")
    rho0 = density_from_sound_speed(params, up.c_minus)
    du_dx = params.beta / potential_slope(params, up, up.u_minus)
    dc_dx = -0.5 * (params.gamma - 1.0) * up.c_minus * du_dx / up.u_minus
    drho_dx = 2.0 * rho0 * dc_dx / ((params.gamma - 1.0) * up.c_minus)
    return rho0, up.u_minus, drho_dx, du_dx
