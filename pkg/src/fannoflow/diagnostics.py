"""Run diagnostics: flushing time, periodicity residuals, perturbation norms.

The flushing time L / min(u - c) bounds how long inflow data needs to cross
the duct; periodicity of the solution is only meaningful after it.  All
residuals compare snapshots one period apart by raster index, so no float
time arithmetic enters the pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, InsufficientSnapshots, SupersonicityLost
from .gas import GasParams, riemann_invariants
from .steady import SteadyProfile
from .transient import Field, RunRecord

# Safety factor applied to the flushing time before periodicity is trusted;
# the transient's own wave speeds differ slightly from the background's.
FLUSH_PAD = 1.05


def flushing_time(params: GasParams, source: RunRecord | SteadyProfile) -> float:
    """L / min(u - c) over the run or profile; infinite crossing is an error."""
    if isinstance(source, RunRecord):
        length = source.grid.length
        lam1_min = source.lambda1_min
    else:
        length = source.length
        lam1_min = float((source.u_tilde - source.c_tilde).min())
    if lam1_min <= 0.0:
        raise SupersonicityLost(
            f"slowest characteristic speed {lam1_min} is not positive; no finite flushing time"
        )
    return length / lam1_min


def padded_flushing_time(params: GasParams, source: RunRecord | SteadyProfile) -> float:
    """Flushing time inflated by FLUSH_PAD."""
    return FLUSH_PAD * flushing_time(params, source)


def background_primitives(params: GasParams, profile: SteadyProfile) -> tuple[np.ndarray, np.ndarray]:
    """(rho~, u~) as a run initialized from the profile actually stores them.

    Runs hold the state in Riemann invariants, so the background must pass
    through the same conversion; comparing against the raw profile arrays
    would leave round-trip noise in an otherwise exact identity.
    """
    r, s = riemann_invariants(params, profile.rho_tilde, profile.u_tilde)
    return Field(0.0, np.asarray(r), np.asarray(s)).primitive(params)


def discrete_derivative(values: np.ndarray, dx: float) -> np.ndarray:
    """Second-order x-derivative: central inside, one-sided at the ends."""
    d = np.empty_like(values)
    d[1:-1] = (values[2:] - values[:-2]) / (2.0 * dx)
    d[0] = (-1.5 * values[0] + 2.0 * values[1] - 0.5 * values[2]) / dx
    d[-1] = (1.5 * values[-1] - 2.0 * values[-2] + 0.5 * values[-3]) / dx
    return d


def _trapezoid(values: np.ndarray, dx: float) -> float:
    return dx * (float(values.sum()) - 0.5 * (float(values[0]) + float(values[-1])))


@dataclass(frozen=True)
class PeriodicityReport:
    """Max-norm and L2 residuals between snapshots one period apart."""

    period: float
    t_check: float
    residual_max: float
    residual_l2: float
    grid_resolution: int
    n_pairs: int
    times: np.ndarray
    series_max: np.ndarray
    series_l2: np.ndarray


def periodicity_residual(
    record: RunRecord, period: float, t_check: float | None = None
) -> PeriodicityReport:
    """Compare W(t + period, .) against W(t, .) for t in [t_check, t_check + period].

    Pairs are matched by snapshot raster index, which requires the snapshot
    cadence to divide the period.  Defaults t_check to t_final - 2 * period.

    Raises InsufficientSnapshots when the record cannot produce a single
    pair inside the window.
    """
    if record.snapshot_every is None:
        raise InsufficientSnapshots("run recorded no snapshot raster")
    ds = record.snapshot_every
    stride = round(period / ds)
    if stride < 1 or abs(stride * ds - period) > 1e-9 * max(period, 1.0):
        raise InsufficientSnapshots(
            f"snapshot cadence {ds} does not divide the period {period}"
        )
    if t_check is None:
        t_check = record.t_final - 2.0 * period

    by_index = {k: f for k, f in record.snapshots if k is not None}
    slack = 1e-9 * max(period, 1.0)
    times, series_max, series_l2 = [], [], []
    dx = record.grid.dx
    for k in sorted(by_index):
        t_k = k * ds
        if t_k < t_check - slack or t_k > t_check + period + slack:
            continue
        partner = by_index.get(k + stride)
        if partner is None:
            continue
        f0 = by_index[k]
        dr = partner.r - f0.r
        dsv = partner.s - f0.s
        times.append(t_k)
        series_max.append(max(float(np.abs(dr).max()), float(np.abs(dsv).max())))
        series_l2.append(math.sqrt(_trapezoid(dr * dr + dsv * dsv, dx)))
    if not times:
        raise InsufficientSnapshots(
            f"no snapshot pairs one period apart inside [{t_check}, {t_check + period}]"
        )
    return PeriodicityReport(
        period=period,
        t_check=t_check,
        residual_max=max(series_max),
        residual_l2=max(series_l2),
        grid_resolution=record.grid.nx,
        n_pairs=len(times),
        times=np.array(times),
        series_max=np.array(series_max),
        series_l2=np.array(series_l2),
    )


@dataclass(frozen=True)
class PerturbationNorms:
    """Sup over snapshots of the perturbation and its spatial derivative."""

    value_max: float
    deriv_max: float
    n_snapshots: int

    @property
    def c1_total(self) -> float:
        return self.value_max + self.deriv_max


def perturbation_norms(record: RunRecord, profile: SteadyProfile | None = None) -> PerturbationNorms:
    """Max-norms of (rho - rho~, u - u~) and their x-derivatives over snapshots."""
    if profile is None:
        profile = record.background
    if profile is None:
        raise GridMismatch("no background profile available for perturbation norms")
    if len(profile.xs) != record.grid.nx or profile.length != record.grid.length:
        raise GridMismatch(
            f"profile grid ({len(profile.xs)} pts, length {profile.length}) does not "
            f"match run grid ({record.grid.nx} pts, length {record.grid.length})"
        )
    dx = record.grid.dx
    rho_ref, u_ref = background_primitives(record.params, profile)
    value_max = 0.0
    deriv_max = 0.0
    for _, field in record.snapshots:
        rho, u = field.primitive(record.params)
        drho = rho - rho_ref
        du = u - u_ref
        value_max = max(value_max, float(np.abs(drho).max()), float(np.abs(du).max()))
        deriv_max = max(
            deriv_max,
            float(np.abs(discrete_derivative(drho, dx)).max()),
            float(np.abs(discrete_derivative(du, dx)).max()),
        )
    return PerturbationNorms(value_max, deriv_max, len(record.snapshots))


@dataclass(frozen=True)
class WaveComponents:
    """Perturbation decomposed along the left eigenvectors at the current state.

    m1/m2 are the components of (rho - rho~, u - u~); n1/n2 those of its
    discrete x-derivative.
    """

    m1: np.ndarray
    m2: np.ndarray
    n1: np.ndarray
    n2: np.ndarray


def wave_components(
    params: GasParams, field: Field, profile: SteadyProfile, dx: float | None = None
) -> WaveComponents:
    """Project the perturbation onto the characteristic fields of the state."""
    if len(field.r) != len(profile.xs):
        raise GridMismatch(
            f"field has {len(field.r)} points, profile has {len(profile.xs)}"
        )
    if dx is None:
        dx = float(profile.xs[1] - profile.xs[0])
    rho, u = field.primitive(params)
    c = field.sound_speed(params)
    rho_ref, u_ref = background_primitives(params, profile)
    v_rho = rho - rho_ref
    v_u = u - u_ref
    vx_rho = discrete_derivative(v_rho, dx)
    vx_u = discrete_derivative(v_u, dx)
    norm = np.hypot(rho, c)
    m1 = 0.5 * norm * (v_rho / rho - v_u / c)
    m2 = 0.5 * norm * (v_rho / rho + v_u / c)
    n1 = 0.5 * norm * (vx_rho / rho - vx_u / c)
    n2 = 0.5 * norm * (vx_rho / rho + vx_u / c)
    return WaveComponents(m1, m2, n1, n2)


def reconstruct_perturbation(
    params: GasParams, field: Field, components: WaveComponents
) -> tuple[np.ndarray, np.ndarray]:
    """Sum m_k * r_k back into (rho, u) perturbation arrays."""
    rho, _ = field.primitive(params)
    c = field.sound_speed(params)
    norm = np.hypot(rho, c)
    v_rho = (components.m1 + components.m2) * rho / norm
    v_u = (components.m2 - components.m1) * c / norm
    return v_rho, v_u
