"""Command-line interface: steady profiles, transient runs, parameter sweeps.

Subcommands
-----------
steady       sample the steady profile, write profile.csv and steady.txt
simulate     run the transient, write snapshots, periodicity report, norms
sweep        rerun the scenario across one axis, one CSV row per value
check-config parse the scenario file and echo the resolved values

Exit codes: 0 success, 1 internal error, 2 choked duct or invalid length,
3 supersonicity lost (or inadmissible inflow amplitude), 4 config error.
The FANNO_LOG environment variable (quiet, info, debug) sets verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import SWEEP_AXES, ScenarioConfig, parse_config
from .diagnostics import (
    FLUSH_PAD,
    flushing_time,
    periodicity_residual,
    perturbation_norms,
)
from .errors import (
    ConfigError,
    DuctTooLong,
    EpsilonTooLarge,
    FannoError,
    InsufficientSnapshots,
    NonPositiveSoundSpeed,
    SonicUpstream,
    SupersonicityLost,
    ValidationError,
)
from .steady import UNBOUNDED, Regime, classify_regime, critical_speed, max_duct_length, solve_profile
from .transient import check_compatibility, run
from .writers import (
    fmt,
    format_l_max,
    write_keyvalues,
    write_periodicity_csv,
    write_profile_csv,
    write_snapshots_csv,
    write_sweep_csv,
)

log = logging.getLogger("fannoflow")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CHOKED = 2
EXIT_SUPERSONICITY = 3
EXIT_CONFIG = 4


def _setup_logging():
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("FANNO_LOG", "info").lower(), logging.INFO
    )
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    log.setLevel(level)


def _load_config(path: str) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _out_dir(cfg: ScenarioConfig, override: str | None) -> Path:
    out = Path(override) if override else Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _regime_of(cfg: ScenarioConfig) -> Regime:
    if cfg.beta == 0.0:
        return Regime.CONSTANT
    return classify_regime(cfg.gas_params(), cfg.upstream())


def _wrote(path: Path):
    log.info("wrote %s", path)


def cmd_steady(cfg: ScenarioConfig, out_dir: Path, figures: bool) -> int:
    params, up = cfg.gas_params(), cfg.upstream()
    profile = solve_profile(params, up, cfg.length, cfg.nx)
    path = out_dir / "profile.csv"
    write_profile_csv(path, profile)
    _wrote(path)
    summary = [
        ("regime", profile.regime.value),
        ("s_c", critical_speed(params, up)),
        ("l_max", format_l_max(profile.l_max)),
        ("length", cfg.length),
    ]
    path = out_dir / "steady.txt"
    write_keyvalues(path, summary)
    _wrote(path)
    if figures:
        from . import plotting

        path = out_dir / "profile.png"
        plotting.save_figure(plotting.profile_figure(profile), path)
        _wrote(path)
    return EXIT_OK


def _write_simulate_outputs(cfg, out_dir, figures, profile, record, report, norms, compat, error):
    params = cfg.gas_params()
    which = set(cfg.which)
    if "profile" in which:
        path = out_dir / "profile.csv"
        write_profile_csv(path, profile)
        _wrote(path)
    if "snapshots" in which and record is not None:
        path = out_dir / "snapshots.csv"
        write_snapshots_csv(path, record)
        _wrote(path)
    if "periodicity" in which and report is not None:
        path = out_dir / "periodicity.csv"
        write_periodicity_csv(path, report)
        _wrote(path)
    if "norms" in which:
        t_flush = flushing_time(params, profile)
        summary = [
            ("regime", profile.regime.value),
            ("s_c", critical_speed(params, profile.upstream)),
            ("l_max", format_l_max(profile.l_max)),
            ("t_flush", t_flush),
            ("t_flush_padded", FLUSH_PAD * t_flush),
            ("compat_residual_mass", compat.residual_mass),
            ("compat_residual_momentum", compat.residual_momentum),
            ("compat_mismatch_rho", compat.mismatch_rho),
            ("compat_mismatch_u", compat.mismatch_u),
        ]
        if record is not None:
            summary += [
                ("steps", record.steps),
                ("t_final", record.t_final),
                ("lambda1_min", record.lambda1_min),
            ]
        if norms is not None:
            summary += [
                ("perturbation_value_max", norms.value_max),
                ("perturbation_deriv_max", norms.deriv_max),
                ("perturbation_c1_total", norms.c1_total),
            ]
        if report is not None:
            summary += [
                ("periodicity_t_check", report.t_check),
                ("periodicity_residual_max", report.residual_max),
                ("periodicity_residual_l2", report.residual_l2),
            ]
        if error is not None:
            summary += [
                ("error", "supersonicity-lost"),
                ("error_t", error.t),
                ("error_x", error.x),
            ]
        path = out_dir / "norms.txt"
        write_keyvalues(path, summary)
        _wrote(path)
    if figures:
        from . import plotting

        path = out_dir / "profile.png"
        plotting.save_figure(plotting.profile_figure(profile), path)
        _wrote(path)
        if record is not None and record.snapshots:
            path = out_dir / "snapshots.png"
            plotting.save_figure(plotting.snapshots_figure(record, profile), path)
            _wrote(path)
            if record.perturbation:
                path = out_dir / "perturbation.png"
                plotting.save_figure(plotting.perturbation_figure(record), path)
                _wrote(path)
        if report is not None:
            path = out_dir / "periodicity.png"
            plotting.save_figure(plotting.periodicity_figure(report), path)
            _wrote(path)


def cmd_simulate(cfg: ScenarioConfig, out_dir: Path, figures: bool) -> int:
    params, up, grid = cfg.gas_params(), cfg.upstream(), cfg.grid()
    profile = solve_profile(params, up, cfg.length, cfg.nx)
    signal = cfg.signal()

    compat = check_compatibility(params, profile, signal)
    if not compat.passed:
        log.warning(
            "corner compatibility residual %.3e exceeds %.1e", compat.max_residual, compat.tol
        )

    t_flush_padded = FLUSH_PAD * flushing_time(params, profile)
    log.info(
        "running to t_end = %s (padded flushing time %.6g, %d cells)",
        fmt(cfg.t_end),
        t_flush_padded,
        cfg.nx,
    )
    try:
        record = run(
            params, grid, profile, signal, cfg.t_end, snapshot_every=cfg.snapshot_every
        )
    except (SupersonicityLost, NonPositiveSoundSpeed) as exc:
        record = getattr(exc, "record", None)
        norms = perturbation_norms(record) if record is not None else None
        error = exc if isinstance(exc, SupersonicityLost) else None
        _write_simulate_outputs(cfg, out_dir, figures, profile, record, None, norms, compat, error)
        raise

    report = None
    if cfg.t_end >= 2.0 * cfg.period:
        t_check = cfg.t_end - 2.0 * cfg.period
        if t_check < t_flush_padded:
            log.warning(
                "periodicity window starts at %.6g, before the padded flushing time %.6g",
                t_check,
                t_flush_padded,
            )
        try:
            report = periodicity_residual(record, cfg.period, t_check)
        except InsufficientSnapshots as exc:
            log.warning("periodicity report skipped: %s", exc)
    else:
        log.warning("t_end %.6g too short for a periodicity window", cfg.t_end)

    norms = perturbation_norms(record)
    _write_simulate_outputs(cfg, out_dir, figures, profile, record, report, norms, compat, None)
    return EXIT_OK


def _sweep_row(task) -> dict:
    cfg, axis, value = task
    row = {
        "value": str(int(value)) if axis == "nx" else fmt(float(value)),
        "regime": "",
        "s_c": "",
        "l_max": "",
        "residual_max": "",
        "exit": EXIT_OK,
    }
    try:
        cfg = cfg.with_value(axis, value)
        params, up = cfg.gas_params(), cfg.upstream()
        row["s_c"] = fmt(critical_speed(params, up))
        row["regime"] = _regime_of(cfg).value
        row["l_max"] = format_l_max(max_duct_length(params, up))
        profile = solve_profile(params, up, cfg.length, cfg.nx)
        signal = cfg.signal()
        record = run(
            params, cfg.grid(), profile, signal, cfg.t_end, snapshot_every=cfg.snapshot_every
        )
        try:
            report = periodicity_residual(record, cfg.period)
            row["residual_max"] = fmt(report.residual_max)
        except InsufficientSnapshots:
            pass
    except (ValidationError, ValueError, SonicUpstream):
        row["exit"] = EXIT_CONFIG
    except DuctTooLong:
        row["exit"] = EXIT_CHOKED
    except (SupersonicityLost, EpsilonTooLarge, NonPositiveSoundSpeed):
        row["exit"] = EXIT_SUPERSONICITY
    except FannoError:
        row["exit"] = EXIT_INTERNAL
    return row


def cmd_sweep(cfg: ScenarioConfig, out_dir: Path, figures: bool, axis: str, values, jobs: int) -> int:
    tasks = [(cfg, axis, v) for v in values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    path = out_dir / "sweep.csv"
    write_sweep_csv(path, rows)
    _wrote(path)
    if figures:
        from . import plotting

        path = out_dir / "sweep.png"
        plotting.save_figure(plotting.sweep_figure(rows, axis), path)
        _wrote(path)
    return EXIT_OK


def cmd_check_config(cfg: ScenarioConfig) -> int:
    sys.stdout.write(cfg.dump())
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fannoflow",
        description="Steady duct flows with velocity-power friction and their time-periodic transients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("steady", "sample the steady profile"),
        ("simulate", "run the transient and report periodicity"),
        ("sweep", "rerun the scenario across one parameter axis"),
        ("check-config", "parse a scenario file and echo the resolved values"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="scenario file (key = value lines)")
        if name != "check-config":
            p.add_argument("--out", default=None, help="output directory (overrides outputs.directory)")
            p.add_argument("--figures", action="store_true", help="also render PNG figures")
        if name == "sweep":
            p.add_argument("--axis", required=True, choices=SWEEP_AXES, help="parameter to sweep")
            p.add_argument("--values", required=True, help="comma-separated values for the axis")
            p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    return parser


def _parse_values(axis: str, raw: str):
    values = []
    for token in raw.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            values.append(int(token) if axis == "nx" else float(token))
        except ValueError:
            raise ConfigError(f"invalid value {token!r} for axis {axis}") from None
    if not values:
        raise ConfigError("no sweep values given")
    return values


def main(argv=None) -> int:
    _setup_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; report those as config errors.
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG

    try:
        cfg = _load_config(args.config)
        if args.command == "check-config":
            return cmd_check_config(cfg)
        figures = args.figures or "figures" in cfg.which
        out_dir = _out_dir(cfg, args.out)
        if args.command == "steady":
            return cmd_steady(cfg, out_dir, figures)
        if args.command == "simulate":
            return cmd_simulate(cfg, out_dir, figures)
        values = _parse_values(args.axis, args.values)
        jobs = max(1, args.jobs)
        return cmd_sweep(cfg, out_dir, figures, args.axis, values, jobs)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SonicUpstream as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DuctTooLong as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHOKED
    except (SupersonicityLost, EpsilonTooLarge, NonPositiveSoundSpeed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SUPERSONICITY
    except FannoError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
