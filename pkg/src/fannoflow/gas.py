"""Gas state types, sound speed, eigenstructure, and Riemann-invariant maps.

The gas is isentropic with pressure law p = rho**gamma (gamma > 1), so the
sound speed is c = sqrt(gamma) * rho**((gamma - 1)/2).  All formulas accept
scalars or numpy arrays interchangeably.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import NonPositiveDensity, NonPositiveSoundSpeed

# Densities below this floor are treated as vacuum; rho**(gamma-2) would
# denormalize or overflow well before reaching it.
RHO_MIN = 1e-300


class FrictionCase(Enum):
    """Branch of the steady implicit potential selected by alpha."""

    GENERIC = "generic"
    ALPHA_ONE = "alpha-one"
    ALPHA_NEG_GAMMA = "alpha-neg-gamma"


@dataclass(frozen=True)
class GasParams:
    """Adiabatic exponent and friction law rho * |u|**alpha * u scaled by beta."""

    gamma: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")

    @property
    def case(self) -> FrictionCase:
        # Exact comparisons on purpose: the special antiderivatives apply
        # only when alpha hits these values exactly.
        if self.alpha == 1.0:
            return FrictionCase.ALPHA_ONE
        if self.alpha == -self.gamma:
            return FrictionCase.ALPHA_NEG_GAMMA
        return FrictionCase.GENERIC


@dataclass(frozen=True)
class FlowState:
    """Primitive state (rho, u); fields may be scalars or aligned arrays."""

    rho: float
    u: float

    def __post_init__(self):
        if np.any(np.asarray(self.rho) < RHO_MIN):
            raise NonPositiveDensity(f"density {self.rho} below floor {RHO_MIN}")


@dataclass(frozen=True)
class RiemannState:
    """Diagonal variables (r, s); s > r is equivalent to c > 0."""

    r: float
    s: float

    def __post_init__(self):
        if np.any(np.asarray(self.s) <= np.asarray(self.r)):
            raise NonPositiveSoundSpeed(f"need s > r, got r={self.r}, s={self.s}")


class Eigenbasis(NamedTuple):
    """Unit right eigenvectors and the left eigenvectors dual to them."""

    r1: np.ndarray
    r2: np.ndarray
    l1: np.ndarray
    l2: np.ndarray


def sound_speed(params: GasParams, rho):
    """c = sqrt(gamma * rho**(gamma - 1)), elementwise."""
    if np.any(np.asarray(rho) < RHO_MIN):
        raise NonPositiveDensity(f"density {rho} below floor {RHO_MIN}")
    return np.sqrt(params.gamma * rho ** (params.gamma - 1.0))


def density_from_sound_speed(params: GasParams, c):
    """Inverse of sound_speed: rho = (c*c/gamma)**(1/(gamma - 1))."""
    if np.any(np.asarray(c) <= 0.0):
        raise NonPositiveSoundSpeed(f"sound speed {c} not positive")
    return (c * c / params.gamma) ** (1.0 / (params.gamma - 1.0))


def mach_number(params: GasParams, state: FlowState):
    """u / c; supersonic means M > 1."""
    return state.u / sound_speed(params, state.rho)


def eigenvalues(params: GasParams, state: FlowState):
    """Characteristic speeds (u - c, u + c)."""
    c = sound_speed(params, state.rho)
    return state.u - c, state.u + c


def flux_jacobian(params: GasParams, state: FlowState) -> np.ndarray:
    """Coefficient matrix of the quasilinear system in (rho, u).

        [ u              rho ]
        [ gamma*rho**(gamma-2)  u ]
    """
    rho, u = state.rho, state.u
    return np.array([[u, rho], [params.gamma * rho ** (params.gamma - 2.0), u]])


def eigenvectors(params: GasParams, state: FlowState) -> Eigenbasis:
    """Unit right eigenvectors r1, r2 and biorthogonal left rows l1, l2.

    Satisfies l_i . r_j = delta_ij and |r_i| = 1.
    """
    rho = state.rho
    c = sound_speed(params, rho)
    norm = math.hypot(rho, c)
    r1 = np.array([rho, -c]) / norm
    r2 = np.array([rho, c]) / norm
    l1 = 0.5 * norm * np.array([1.0 / rho, -1.0 / c])
    l2 = 0.5 * norm * np.array([1.0 / rho, 1.0 / c])
    return Eigenbasis(r1, r2, l1, l2)


def riemann_invariants(params: GasParams, rho, u):
    """Diagonal variables r = (u - 2c/(gamma-1))/2, s = (u + 2c/(gamma-1))/2."""
    spread = sound_speed(params, rho) / (params.gamma - 1.0)  # c/(gamma-1)
    return 0.5 * u - spread, 0.5 * u + spread


def primitive_state(params: GasParams, r, s):
    """Invert riemann_invariants; requires s > r elementwise."""
    if np.any(np.asarray(s) <= np.asarray(r)):
        raise NonPositiveSoundSpeed("need s > r to recover a positive sound speed")
    c = 0.5 * (params.gamma - 1.0) * (s - r)
    return density_from_sound_speed(params, c), r + s


def to_riemann(params: GasParams, state: FlowState) -> RiemannState:
    """FlowState -> RiemannState."""
    r, s = riemann_invariants(params, state.rho, state.u)
    return RiemannState(r, s)


def from_riemann(params: GasParams, rs: RiemannState) -> FlowState:
    """RiemannState -> FlowState."""
    rho, u = primitive_state(params, rs.r, rs.s)
    return FlowState(rho, u)
