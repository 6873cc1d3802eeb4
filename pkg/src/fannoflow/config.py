"""Scenario configuration: flat dotted key = value text files.

Example::

    gas.gamma = 2.0
    gas.alpha = 0.0
    gas.beta = -1.0
    upstream.rho_minus = 0.5     # or upstream.c_minus, but not both
    upstream.u_minus = 2.0
    duct.length = 0.35
    boundary.period = 1.0
    boundary.epsilon = 1e-3
    sim.t_end = 6.0

Unknown keys, duplicates, and malformed values are reported with their line
number.  Semantic problems (gamma <= 1, both density and sound speed given,
...) raise ValidationError after parsing.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .gas import GasParams, density_from_sound_speed, sound_speed
from .steady import UpstreamState
from .transient import SHAPES, BoundarySignal, Grid1D, make_boundary_signal
from .writers import fmt

OUTPUT_KINDS = ("profile", "snapshots", "periodicity", "norms", "figures")
DEFAULT_OUTPUTS = ("profile", "snapshots", "periodicity", "norms")
SWEEP_AXES = ("gamma", "alpha", "beta", "c_minus", "u_minus", "epsilon", "nx")

_KEYS = (
    "gas.gamma",
    "gas.alpha",
    "gas.beta",
    "upstream.c_minus",
    "upstream.rho_minus",
    "upstream.u_minus",
    "duct.length",
    "grid.nx",
    "grid.cfl",
    "boundary.period",
    "boundary.epsilon",
    "boundary.shape",
    "sim.t_end",
    "sim.snapshot_every",
    "outputs.directory",
    "outputs.which",
)
_REQUIRED = (
    "gas.gamma",
    "gas.alpha",
    "gas.beta",
    "upstream.u_minus",
    "duct.length",
    "boundary.period",
    "boundary.epsilon",
    "sim.t_end",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario; upstream data normalized to c_minus."""

    gamma: float
    alpha: float
    beta: float
    c_minus: float
    u_minus: float
    length: float
    period: float
    epsilon: float
    t_end: float
    snapshot_every: float
    nx: int = 401
    cfl: float = 0.9
    shape: str = "bump"
    out_dir: str = "."
    which: tuple[str, ...] = DEFAULT_OUTPUTS

    def gas_params(self) -> GasParams:
        return GasParams(self.gamma, self.alpha, self.beta)

    def upstream(self) -> UpstreamState:
        return UpstreamState(self.c_minus, self.u_minus)

    def grid(self) -> Grid1D:
        return Grid1D(self.length, self.nx, self.cfl)

    def signal(self) -> BoundarySignal:
        return make_boundary_signal(
            self.gas_params(), self.upstream(), self.period, self.epsilon, self.shape
        )

    def with_value(self, axis: str, value) -> "ScenarioConfig":
        """Copy with one sweep axis replaced; revalidates the result."""
        if axis not in SWEEP_AXES:
            raise ValidationError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
        value = int(value) if axis == "nx" else float(value)
        out = dataclasses.replace(self, **{axis: value})
        _validate(out)
        return out

    def dump(self) -> str:
        """Canonical key = value rendering of the resolved scenario."""
        lines = [
            f"gas.gamma = {fmt(self.gamma)}",
            f"gas.alpha = {fmt(self.alpha)}",
            f"gas.beta = {fmt(self.beta)}",
            f"upstream.c_minus = {fmt(self.c_minus)}",
            f"upstream.u_minus = {fmt(self.u_minus)}",
            f"duct.length = {fmt(self.length)}",
            f"grid.nx = {self.nx}",
            f"grid.cfl = {fmt(self.cfl)}",
            f"boundary.period = {fmt(self.period)}",
            f"boundary.epsilon = {fmt(self.epsilon)}",
            f"boundary.shape = {self.shape}",
            f"sim.t_end = {fmt(self.t_end)}",
            f"sim.snapshot_every = {fmt(self.snapshot_every)}",
            f"outputs.directory = {self.out_dir}",
            f"outputs.which = {','.join(self.which)}",
        ]
        return "\n".join(lines) + "\n"


def _validate(cfg: ScenarioConfig):
    if not cfg.gamma > 1.0:
        raise ValidationError(f"gas.gamma must exceed 1, got {cfg.gamma}")
    if not cfg.c_minus > 0.0:
        raise ValidationError(f"upstream sound speed must be positive, got {cfg.c_minus}")
    if not cfg.u_minus > 0.0:
        raise ValidationError(f"upstream.u_minus must be positive, got {cfg.u_minus}")
    if not cfg.length > 0.0:
        raise ValidationError(f"duct.length must be positive, got {cfg.length}")
    if cfg.nx < 8:
        raise ValidationError(f"grid.nx must be at least 8, got {cfg.nx}")
    if not 0.0 < cfg.cfl <= 1.0:
        raise ValidationError(f"grid.cfl must lie in (0, 1], got {cfg.cfl}")
    if not cfg.period > 0.0:
        raise ValidationError(f"boundary.period must be positive, got {cfg.period}")
    if cfg.epsilon < 0.0:
        raise ValidationError(f"boundary.epsilon must be nonnegative, got {cfg.epsilon}")
    if cfg.shape not in SHAPES:
        raise ValidationError(
            f"boundary.shape must be one of {sorted(SHAPES)}, got {cfg.shape!r}"
        )
    if cfg.t_end < 0.0:
        raise ValidationError(f"sim.t_end must be nonnegative, got {cfg.t_end}")
    if not cfg.snapshot_every > 0.0:
        raise ValidationError(
            f"sim.snapshot_every must be positive, got {cfg.snapshot_every}"
        )
    if not cfg.which:
        raise ValidationError("outputs.which must request at least one output")
    for kind in cfg.which:
        if kind not in OUTPUT_KINDS:
            raise ValidationError(
                f"outputs.which entry {kind!r} not among {OUTPUT_KINDS}"
            )


def _parse_float(raw: str, line: int, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"invalid float {raw!r}", line, key) from None


def _parse_int(raw: str, line: int, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"invalid integer {raw!r}", line, key) from None


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate scenario text; see the module docstring for keys."""
    seen: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ParseError(f"expected 'key = value', got {content!r}", lineno)
        key, _, value = content.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, key)
        if key in seen:
            raise ParseError(f"duplicate key (first set on line {lines[key]})", lineno, key)
        if not value:
            raise ParseError("empty value", lineno, key)
        seen[key] = value
        lines[key] = lineno

    missing = [k for k in _REQUIRED if k not in seen]
    if missing:
        raise ValidationError(f"missing required keys: {', '.join(missing)}")

    def f(key: str) -> float:
        return _parse_float(seen[key], lines[key], key)

    gamma = f("gas.gamma")
    if not gamma > 1.0:
        raise ValidationError(f"gas.gamma must exceed 1, got {gamma}")

    has_c = "upstream.c_minus" in seen
    has_rho = "upstream.rho_minus" in seen
    if has_c == has_rho:
        raise ValidationError(
            "give exactly one of upstream.c_minus and upstream.rho_minus"
        )
    if has_c:
        c_minus = f("upstream.c_minus")
    else:
        rho_minus = f("upstream.rho_minus")
        if not rho_minus > 0.0:
            raise ValidationError(f"upstream.rho_minus must be positive, got {rho_minus}")
        c_minus = float(sound_speed(GasParams(gamma, 0.0, 0.0), rho_minus))

    period = f("boundary.period")
    if not period > 0.0:
        raise ValidationError(f"boundary.period must be positive, got {period}")

    which = DEFAULT_OUTPUTS
    if "outputs.which" in seen:
        which = tuple(tok.strip() for tok in seen["outputs.which"].split(",") if tok.strip())

    cfg = ScenarioConfig(
        gamma=gamma,
        alpha=f("gas.alpha"),
        beta=f("gas.beta"),
        c_minus=c_minus,
        u_minus=f("upstream.u_minus"),
        length=f("duct.length"),
        period=period,
        epsilon=f("boundary.epsilon"),
        t_end=f("sim.t_end"),
        snapshot_every=f("sim.snapshot_every") if "sim.snapshot_every" in seen else period / 64.0,
        nx=_parse_int(seen["grid.nx"], lines["grid.nx"], "grid.nx") if "grid.nx" in seen else 401,
        cfl=f("grid.cfl") if "grid.cfl" in seen else 0.9,
        shape=seen.get("boundary.shape", "bump"),
        out_dir=seen.get("outputs.directory", "."),
        which=which,
    )
    _validate(cfg)
    return cfg


def upstream_density(cfg: ScenarioConfig) -> float:
    """Inlet density implied by the resolved sound speed."""
    return float(density_from_sound_speed(cfg.gas_params(), cfg.c_minus))
