"""Exception types shared across the package."""

from __future__ import annotations


class FannoError(Exception):
    """Base class for all domain errors raised by this package."""


class NonPositiveDensity(FannoError):
    """Density at or below the representable floor."""


class NonPositiveSoundSpeed(FannoError):
    """State with c <= 0, i.e. Riemann invariants with s <= r."""


class NonPositiveSpeed(FannoError):
    """Velocity argument outside (0, inf) where a positive speed is required."""


class SonicUpstream(FannoError):
    """Upstream state sits exactly on the sonic line u = c."""


class ZeroBeta(FannoError):
    """Operation undefined for a vanishing friction coefficient."""


class DuctTooLong(FannoError):
    """Requested duct length reaches or exceeds the maximal length.

    Carries ``l_max`` when the maximal length is finite.
    """

    def __init__(self, message: str, l_max: float | None = None):
        super().__init__(message)
        self.l_max = l_max


class EpsilonTooLarge(FannoError):
    """Boundary perturbation breaks inlet admissibility somewhere in a period."""


class SupersonicityLost(FannoError):
    """The flow stopped being strictly supersonic.

    Carries the first failing location ``(t, x)`` and, when raised out of a
    running simulation, the partial run record under ``record``.
    """

    def __init__(self, message: str, t: float | None = None, x: float | None = None):
        super().__init__(message)
        self.t = t
        self.x = x
        self.record = None


class InsufficientSnapshots(FannoError):
    """Run record lacks the snapshot pairs a diagnostic needs."""


class GridMismatch(FannoError):
    """Two gridded objects do not share the same spatial grid."""


class ConfigError(FannoError):
    """Base class for scenario-configuration failures."""


class ParseError(ConfigError):
    """Malformed config text; carries the 1-based line number and key."""

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        loc = f"line {line}" if line is not None else "config"
        if key:
            loc += f", key {key!r}"
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.key = key


class ValidationError(ConfigError):
    """Config parsed but the values are not a valid scenario."""
