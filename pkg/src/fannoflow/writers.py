"""Deterministic CSV and key = value writers for run artifacts.

Floats are rendered with repr, the shortest digit string that round-trips
to the same double, so identical runs produce byte-identical files.
Non-finite values are refused rather than silently written.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .steady import UNBOUNDED, SteadyProfile


def fmt(value) -> str:
    """Shortest round-trip decimal form of a finite float (or str/int as-is)."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    x = float(value)
    if not math.isfinite(x):
        raise ValueError(f"refusing to write non-finite value {x}")
    return repr(x)


def _write_rows(path, header, rows):
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_profile_csv(path, profile: SteadyProfile):
    """Columns: x, u_tilde, c_tilde, rho_tilde, mach."""
    mach = profile.mach
    rows = (
        (fmt(profile.xs[i]), fmt(profile.u_tilde[i]), fmt(profile.c_tilde[i]),
         fmt(profile.rho_tilde[i]), fmt(mach[i]))
        for i in range(len(profile.xs))
    )
    _write_rows(path, ("x", "u_tilde", "c_tilde", "rho_tilde", "mach"), rows)


def write_snapshots_csv(path, record):
    """Columns: t, x, rho, u, c, mach, r, s; one block of rows per snapshot."""
    params = record.params
    xs = record.grid.xs

    def rows():
        for _, field in record.snapshots:
            rho, u = field.primitive(params)
            c = field.sound_speed(params)
            t_str = fmt(field.time)
            for i in range(len(xs)):
                yield (
                    t_str,
                    fmt(xs[i]),
                    fmt(rho[i]),
                    fmt(u[i]),
                    fmt(c[i]),
                    fmt(u[i] / c[i]),
                    fmt(field.r[i]),
                    fmt(field.s[i]),
                )

    _write_rows(path, ("t", "x", "rho", "u", "c", "mach", "r", "s"), rows())


def write_periodicity_csv(path, report):
    """Columns: t, residual_max, residual_l2."""
    rows = (
        (fmt(report.times[i]), fmt(report.series_max[i]), fmt(report.series_l2[i]))
        for i in range(len(report.times))
    )
    _write_rows(path, ("t", "residual_max", "residual_l2"), rows)


def write_sweep_csv(path, rows):
    """Columns: value, regime, s_c, l_max, residual_max, exit; blank when unavailable."""
    header = ("value", "regime", "s_c", "l_max", "residual_max", "exit")
    _write_rows(path, header, (tuple(row[k] for k in header) for row in rows))


def format_l_max(l_max) -> str:
    return "unbounded" if l_max is UNBOUNDED else fmt(l_max)


def write_keyvalues(path, pairs):
    """Write ``key=value`` lines from an iterable of (key, value) pairs."""
    path = Path(path)
    with path.open("w") as fh:
        for key, value in pairs:
            fh.write(f"{key}={fmt(value)}\n")
