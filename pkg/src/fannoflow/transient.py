"""Transient runs of the diagonal system with prescribed supersonic inflow.

The conservative system is evolved in Riemann invariants (r, s), where it
reads

    r_t + (u - c) r_x = beta * u**(alpha + 1) / 2
    s_t + (u + c) s_x = beta * u**(alpha + 1) / 2

with u = r + s and c = (gamma - 1)(s - r)/2.  While the flow is strictly
supersonic both characteristic speeds are positive, so a left-biased
first-order upwind difference is stable under the CFL restriction and both
boundary values at x = 0 are prescribed from the inflow signal.  The source
term uses a two-stage (Heun) update so it does not degrade the first-order
accuracy of the transport.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import (
    EpsilonTooLarge,
    GridMismatch,
    NonPositiveDensity,
    NonPositiveSoundSpeed,
    SupersonicityLost,
)
from .gas import GasParams, RHO_MIN, density_from_sound_speed, riemann_invariants, sound_speed
from .steady import SteadyProfile, UpstreamState, corner_derivatives

_ADMISSIBILITY_SAMPLES = 4097  # inlet check resolution over one period


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [0, length] with a CFL number for time stepping."""

    length: float
    nx: int
    cfl: float = 0.9

    def __post_init__(self):
        if not self.length > 0.0:
            raise ValueError(f"length must be positive, got {self.length}")
        if self.nx < 8:
            raise ValueError(f"need nx >= 8, got {self.nx}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")

    @property
    def dx(self) -> float:
        return self.length / (self.nx - 1)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.nx)


def _bump(theta):
    return np.sin(math.pi * theta) ** 2


def _bump_dtheta(theta):
    return math.pi * np.sin(2.0 * math.pi * theta)


def _sine_ramp(theta):
    return np.sin(2.0 * math.pi * theta) * np.sin(math.pi * theta) ** 2


def _sine_ramp_dtheta(theta):
    two_pi = 2.0 * math.pi
    return two_pi * np.cos(two_pi * theta) * np.sin(math.pi * theta) ** 2 + math.pi * np.sin(
        two_pi * theta
    ) ** 2


# shape id -> (phi, dphi/dtheta); every phi is smooth with phi(0) = phi'(0) = 0,
# so a period starting from steady data raises no corner mismatch.
SHAPES = {
    "bump": (_bump, _bump_dtheta),
    "sine-ramp": (_sine_ramp, _sine_ramp_dtheta),
}


@dataclass(frozen=True)
class BoundarySignal:
    """Time-periodic inflow (rho_l, u_l)(t) = base + epsilon * phi(t/P mod 1).

    Phase reduction uses fmod, which is exact in IEEE arithmetic, so the
    signal is bit-for-bit periodic whenever t and t + period are both
    representable.
    """

    params: GasParams
    base: UpstreamState
    period: float
    epsilon: float
    shape: str

    @property
    def rho_base(self) -> float:
        return density_from_sound_speed(self.params, self.base.c_minus)

    def _phase(self, t: float) -> float:
        return math.fmod(t, self.period) / self.period

    def state(self, t: float) -> tuple[float, float]:
        """(rho_l, u_l) at time t."""
        phi = SHAPES[self.shape][0](self._phase(t))
        return self.rho_base + self.epsilon * phi, self.base.u_minus + self.epsilon * phi

    def derivative(self, t: float) -> tuple[float, float]:
        """(d rho_l/dt, d u_l/dt) at time t."""
        dphi = SHAPES[self.shape][1](self._phase(t)) / self.period
        return self.epsilon * dphi, self.epsilon * dphi

    def riemann(self, t: float) -> tuple[float, float]:
        """(r_l, s_l) at time t."""
        rho, u = self.state(t)
        return riemann_invariants(self.params, rho, u)


def make_boundary_signal(
    params: GasParams,
    base: UpstreamState,
    period: float,
    epsilon: float,
    shape: str = "bump",
) -> BoundarySignal:
    """Build an inflow signal and verify inlet admissibility over one period.

    Raises EpsilonTooLarge if the perturbed inlet loses positivity of the
    density or strict supersonicity anywhere along the sampled period.
    """
    if not period > 0.0:
        raise ValueError(f"period must be positive, got {period}")
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}; expected one of {sorted(SHAPES)}")
    signal = BoundarySignal(params, base, period, epsilon, shape)
    if epsilon > 0.0:
        theta = np.linspace(0.0, 1.0, _ADMISSIBILITY_SAMPLES)
        bump = epsilon * SHAPES[shape][0](theta)
        rho_l = signal.rho_base + bump
        if np.any(rho_l < RHO_MIN):
            raise EpsilonTooLarge(
                f"epsilon {epsilon} drives the inlet density nonpositive within a period"
            )
        u_l = base.u_minus + bump
        if np.any(u_l <= sound_speed(params, rho_l)):
            raise EpsilonTooLarge(
                f"epsilon {epsilon} breaks inlet supersonicity within a period"
            )
    return signal


@dataclass(frozen=True)
class Field:
    """Riemann-invariant arrays at one time instant."""

    time: float
    r: np.ndarray
    s: np.ndarray

    def sound_speed(self, params: GasParams) -> np.ndarray:
        return 0.5 * (params.gamma - 1.0) * (self.s - self.r)

    def primitive(self, params: GasParams) -> tuple[np.ndarray, np.ndarray]:
        """(rho, u) arrays."""
        return density_from_sound_speed(params, self.sound_speed(params)), self.r + self.s


@dataclass(frozen=True)
class CornerState:
    """Initial-data values and one-sided x-derivatives at the inflow corner."""

    rho: float
    u: float
    drho_dx: float
    du_dx: float


@dataclass(frozen=True)
class CompatibilityReport:
    """Corner compatibility residuals between initial data and inflow signal.

    residual_mass and residual_momentum are the zeroth-order compatibility
    residuals of the two conservation laws at (t, x) = (0, 0); mismatch_rho
    and mismatch_u compare the data traces themselves.
    """

    residual_mass: float
    residual_momentum: float
    mismatch_rho: float
    mismatch_u: float
    tol: float

    @property
    def max_residual(self) -> float:
        return max(
            abs(self.residual_mass),
            abs(self.residual_momentum),
            abs(self.mismatch_rho),
            abs(self.mismatch_u),
        )

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def corner_from_field(params: GasParams, grid: Grid1D, field: Field) -> CornerState:
    """Corner data from raw fields via second-order one-sided differences."""
    rho, u = field.primitive(params)
    dx = grid.dx
    drho = (-1.5 * rho[0] + 2.0 * rho[1] - 0.5 * rho[2]) / dx
    du = (-1.5 * u[0] + 2.0 * u[1] - 0.5 * u[2]) / dx
    return CornerState(float(rho[0]), float(u[0]), float(drho), float(du))


def check_compatibility(
    params: GasParams,
    init: SteadyProfile | CornerState,
    signal: BoundarySignal,
    tol: float = 1e-10,
) -> CompatibilityReport:
    """Evaluate the corner compatibility residuals at (t, x) = (0, 0).

    Steady initial data gets exact corner derivatives from the profile ODE;
    a CornerState is consumed as given.  The report never raises on
    mismatch, it only records the residuals against ``tol``.
    """
    if isinstance(init, SteadyProfile):
        rho0, u0, drho_dx, du_dx = corner_derivatives(params, init.upstream)
    else:
        rho0, u0, drho_dx, du_dx = init.rho, init.u, init.drho_dx, init.du_dx
    rho_l, u_l = signal.state(0.0)
    drho_dt, du_dt = signal.derivative(0.0)
    dp_dx = params.gamma * rho0 ** (params.gamma - 1.0) * drho_dx
    residual_mass = drho_dt + drho_dx * u0 + rho0 * du_dx
    residual_momentum = (
        drho_dt * u_l
        + rho_l * du_dt
        + drho_dx * u0 ** 2
        + 2.0 * rho0 * u0 * du_dx
        + dp_dx
        - params.beta * rho0 * u0 ** (params.alpha + 1.0)
    )
    return CompatibilityReport(
        residual_mass=residual_mass,
        residual_momentum=residual_momentum,
        mismatch_rho=rho0 - rho_l,
        mismatch_u=u0 - u_l,
        tol=tol,
    )


def _check_supersonic(params: GasParams, grid: Grid1D, t: float, r, s):
    """Raise unless c > 0 and u - c > 0 everywhere; report first failure."""
    spread = s - r
    i = int(np.argmin(spread))
    if spread[i] <= 0.0:
        raise NonPositiveSoundSpeed(
            f"sound speed vanished at t={t}, x={grid.xs[i]}"
        )
    lam1 = (r + s) - 0.5 * (params.gamma - 1.0) * spread
    i = int(np.argmin(lam1))
    if lam1[i] <= 0.0:
        exc = SupersonicityLost(
            f"flow no longer supersonic at t={t}, x={grid.xs[i]} (u - c = {lam1[i]})",
            t=t,
            x=float(grid.xs[i]),
        )
        raise exc


def step(
    params: GasParams,
    grid: Grid1D,
    field: Field,
    signal: BoundarySignal,
    t_stop: float | None = None,
) -> Field:
    """Advance one upwind/Heun step; slice the step to land exactly on t_stop.

    The time step is cfl * dx / max(u + c) unless t_stop truncates it, in
    which case the returned field carries exactly time t_stop.  Raises
    SupersonicityLost or NonPositiveSoundSpeed at the first offending point,
    checked both before and after the update.
    """
    r, s, t = field.r, field.s, field.time
    _check_supersonic(params, grid, t, r, s)
    gm1 = params.gamma - 1.0
    c = 0.5 * gm1 * (s - r)
    u = r + s
    lam1 = u - c
    lam2 = u + c

    dt = grid.cfl * grid.dx / float(lam2.max())
    if t_stop is not None and t + dt >= t_stop:
        dt = t_stop - t
        new_time = t_stop
    else:
        new_time = t + dt

    nu = dt / grid.dx
    ap1 = params.alpha + 1.0
    src = 0.5 * params.beta * u ** ap1
    r_bc, s_bc = signal.riemann(new_time)

    # Predictor: pure upwind transport with the frozen source.
    r_star = np.empty_like(r)
    s_star = np.empty_like(s)
    r_star[1:] = r[1:] - nu * lam1[1:] * (r[1:] - r[:-1]) + dt * src[1:]
    s_star[1:] = s[1:] - nu * lam2[1:] * (s[1:] - s[:-1]) + dt * src[1:]
    r_star[0] = r_bc
    s_star[0] = s_bc

    u_star = r_star + s_star
    if np.any(u_star <= 0.0):
        i = int(np.argmin(u_star))
        raise SupersonicityLost(
            f"velocity turned nonpositive at t={new_time}, x={grid.xs[i]}",
            t=new_time,
            x=float(grid.xs[i]),
        )
    src_star = 0.5 * params.beta * u_star ** ap1

    # Corrector: same transport, trapezoidal source.
    r_new = np.empty_like(r)
    s_new = np.empty_like(s)
    half_dt = 0.5 * dt
    r_new[1:] = r[1:] - nu * lam1[1:] * (r[1:] - r[:-1]) + half_dt * (src[1:] + src_star[1:])
    s_new[1:] = s[1:] - nu * lam2[1:] * (s[1:] - s[:-1]) + half_dt * (src[1:] + src_star[1:])
    r_new[0] = r_bc
    s_new[0] = s_bc

    _check_supersonic(params, grid, new_time, r_new, s_new)
    return Field(new_time, r_new, s_new)


@dataclass
class RunRecord:
    """Everything a run produced: snapshots, per-step monitors, failure info.

    Snapshots are stored with their raster index (multiples of
    snapshot_every), or None for an off-raster final time.
    """

    params: GasParams
    grid: Grid1D
    snapshot_every: float | None
    background: SteadyProfile | None
    snapshots: list = dataclass_field(default_factory=list)  # (index, Field) pairs
    step_times: list = dataclass_field(default_factory=list)
    perturbation: list = dataclass_field(default_factory=list)
    lambda1_min: float = math.inf
    steps: int = 0
    error: SupersonicityLost | None = None

    @property
    def t_final(self) -> float:
        return self.snapshots[-1][1].time if self.snapshots else math.nan

    def snapshot_fields(self) -> list:
        return [f for _, f in self.snapshots]


def _profile_field(profile: SteadyProfile, params: GasParams) -> Field:
    r, s = riemann_invariants(params, profile.rho_tilde, profile.u_tilde)
    return Field(0.0, np.array(r), np.array(s))


def run(
    params: GasParams,
    grid: Grid1D,
    init: SteadyProfile | Field,
    signal: BoundarySignal,
    t_end: float,
    snapshot_every: float | None = None,
    background: SteadyProfile | None = None,
    observers: tuple = (),
) -> RunRecord:
    """March the field to t_end, recording snapshots and per-step monitors.

    Parameters
    ----------
    init : SteadyProfile or Field
        Initial data; a profile is converted to Riemann invariants and also
        becomes the default background for perturbation norms.
    snapshot_every : float, optional
        Snapshot cadence; snapshot instants k * snapshot_every are hit
        exactly by slicing the time step.  Initial and final fields are
        always recorded.
    background : SteadyProfile, optional
        Reference profile for the per-step max-norm of (rho - rho~, u - u~).
    observers : tuple of callables
        Invoked with each recorded snapshot field.

    Returns
    -------
    RunRecord

    Raises
    ------
    SupersonicityLost, NonPositiveSoundSpeed
        Propagated from the first failing step with the partial record
        attached to the exception as ``exc.record``.
    GridMismatch
        If a profile (init or background) does not live on ``grid``.
    """
    if snapshot_every is not None and not snapshot_every > 0.0:
        raise ValueError(f"snapshot_every must be positive, got {snapshot_every}")

    def check_grid(profile: SteadyProfile):
        if len(profile.xs) != grid.nx or profile.length != grid.length:
            raise GridMismatch(
                f"profile grid ({len(profile.xs)} pts, length {profile.length}) "
                f"does not match run grid ({grid.nx} pts, length {grid.length})"
            )

    if isinstance(init, SteadyProfile):
        check_grid(init)
        if background is None:
            background = init
        field = _profile_field(init, params)
    else:
        field = init
    if background is not None:
        check_grid(background)

    record = RunRecord(params, grid, snapshot_every, background)
    t0 = field.time
    if t_end < t0:
        raise ValueError(f"t_end {t_end} precedes initial time {t0}")

    def track_lambda1(f: Field):
        lam1_min = float((f.r + f.s - f.sound_speed(params)).min())
        record.lambda1_min = min(record.lambda1_min, lam1_min)

    if background is not None:
        # Background in the run's own representation, so a run started from
        # the profile reports exactly zero perturbation at t = 0.
        rho_ref, u_ref = _profile_field(background, params).primitive(params)

    def monitor(f: Field):
        track_lambda1(f)
        if background is not None:
            rho, u = f.primitive(params)
            drho = float(np.abs(rho - rho_ref).max())
            du = float(np.abs(u - u_ref).max())
            record.perturbation.append(max(drho, du))
        record.step_times.append(f.time)

    def raster_index(t: float):
        if snapshot_every is None:
            return 0 if t == t0 else None
        k = round(t / snapshot_every)
        return k if k * snapshot_every == t else None

    def take_snapshot(f: Field):
        record.snapshots.append((raster_index(f.time), f))
        for obs in observers:
            obs(f)

    track_lambda1(field)
    take_snapshot(field)

    k_next = 0 if snapshot_every is not None else None
    try:
        while field.time < t_end:
            target = t_end
            if snapshot_every is not None:
                # Strictly future raster instant; guards against a raster
                # point rounding onto the current time.
                while k_next * snapshot_every <= field.time:
                    k_next += 1
                target = min(k_next * snapshot_every, t_end)
            field = step(params, grid, field, signal, t_stop=target)
            record.steps += 1
            monitor(field)
            if field.time >= target:
                take_snapshot(field)
    except (SupersonicityLost, NonPositiveSoundSpeed) as exc:
        if isinstance(exc, SupersonicityLost):
            record.error = exc
        exc.record = record
        raise
    return record
