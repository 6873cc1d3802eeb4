"""Steady Fanno duct flows and time-periodic supersonic transients.

The library covers the 1D isentropic Euler equations with the friction
source beta * rho * |u|**alpha * u: steady profiles with their choking
length, a diagonal upwind solver for the transient problem with prescribed
supersonic inflow, and diagnostics that measure how close a run is to a
time-periodic state.
"""

from .config import (
    DEFAULT_OUTPUTS,
    OUTPUT_KINDS,
    SWEEP_AXES,
    ScenarioConfig,
    parse_config,
    upstream_density,
)
from .diagnostics import (
    FLUSH_PAD,
    PerturbationNorms,
    PeriodicityReport,
    WaveComponents,
    background_primitives,
    discrete_derivative,
    flushing_time,
    padded_flushing_time,
    periodicity_residual,
    perturbation_norms,
    reconstruct_perturbation,
    wave_components,
)
from .errors import (
    ConfigError,
    DuctTooLong,
    EpsilonTooLarge,
    FannoError,
    GridMismatch,
    InsufficientSnapshots,
    NonPositiveDensity,
    NonPositiveSoundSpeed,
    NonPositiveSpeed,
    ParseError,
    SonicUpstream,
    SupersonicityLost,
    ValidationError,
    ZeroBeta,
)
from .gas import (
    Eigenbasis,
    FlowState,
    FrictionCase,
    GasParams,
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
from .steady import (
    UNBOUNDED,
    Regime,
    SteadyProfile,
    UpstreamState,
    classify_regime,
    corner_derivatives,
    critical_speed,
    implicit_potential,
    max_duct_length,
    potential_slope,
    solve_profile,
)
from .transient import (
    BoundarySignal,
    CompatibilityReport,
    CornerState,
    Field,
    Grid1D,
    RunRecord,
    SHAPES,
    check_compatibility,
    corner_from_field,
    make_boundary_signal,
    run,
    step,
)

__version__ = "0.1.0"
