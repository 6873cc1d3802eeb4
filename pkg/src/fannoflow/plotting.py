"""Figure rendering for the CLI report path.

Matplotlib is imported lazily with the Agg backend so headless use and
figure-free runs stay cheap.
"""

from __future__ import annotations

import numpy as np

from .steady import UNBOUNDED, SteadyProfile


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def profile_figure(profile: SteadyProfile):
    """Two panels: speeds u~, c~ against x, and the Mach number."""
    plt = _plt()
    from .steady import critical_speed

    fig, (ax_u, ax_m) = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True)
    ax_u.plot(profile.xs, profile.u_tilde, label="u", color="tab:blue")
    ax_u.plot(profile.xs, profile.c_tilde, label="c", color="tab:orange")
    s_c = critical_speed(profile.params, profile.upstream)
    ax_u.axhline(s_c, color="gray", linestyle="--", linewidth=0.8, label="critical speed")
    ax_u.set_ylabel("speed")
    ax_u.legend(loc="best")
    ax_u.set_title(f"steady profile ({profile.regime.value})")

    ax_m.plot(profile.xs, profile.mach, color="tab:green")
    ax_m.axhline(1.0, color="gray", linestyle="--", linewidth=0.8)
    ax_m.set_xlabel("x")
    ax_m.set_ylabel("Mach")
    if profile.l_max is not UNBOUNDED:
        ax_m.annotate(
            f"l_max = {profile.l_max:.6g}",
            xy=(0.02, 0.05),
            xycoords="axes fraction",
            fontsize=9,
        )
    fig.tight_layout()
    return fig


def snapshots_figure(record, profile: SteadyProfile | None = None):
    """Velocity snapshots over time, plus the deviation from the background."""
    plt = _plt()
    fields = record.snapshot_fields()
    n_show = min(len(fields), 7)
    picks = [fields[i] for i in np.linspace(0, len(fields) - 1, n_show).astype(int)]
    xs = record.grid.xs
    n_axes = 2 if profile is not None else 1
    fig, axes = plt.subplots(n_axes, 1, figsize=(7.0, 3.2 * n_axes), sharex=True, squeeze=False)
    ax_u = axes[0][0]
    cmap = plt.get_cmap("viridis")
    for j, field in enumerate(picks):
        _, u = field.primitive(record.params)
        color = cmap(j / max(n_show - 1, 1))
        ax_u.plot(xs, u, color=color, label=f"t = {field.time:.4g}")
    ax_u.set_ylabel("u")
    ax_u.legend(loc="best", fontsize=8)
    ax_u.set_title("velocity snapshots")
    if profile is not None:
        ax_d = axes[1][0]
        for j, field in enumerate(picks):
            _, u = field.primitive(record.params)
            ax_d.plot(xs, u - profile.u_tilde, color=cmap(j / max(n_show - 1, 1)))
        ax_d.set_ylabel("u - u_steady")
        ax_d.set_xlabel("x")
    else:
        ax_u.set_xlabel("x")
    fig.tight_layout()
    return fig


def periodicity_figure(report):
    """Residuals between period-separated snapshots, log scale when possible."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    if np.all(report.series_max > 0.0) and np.all(report.series_l2 > 0.0):
        ax.semilogy(report.times, report.series_max, "o-", label="max norm")
        ax.semilogy(report.times, report.series_l2, "s-", label="L2 norm")
    else:
        ax.plot(report.times, report.series_max, "o-", label="max norm")
        ax.plot(report.times, report.series_l2, "s-", label="L2 norm")
    ax.set_xlabel("t")
    ax.set_ylabel("|W(t + P) - W(t)|")
    ax.set_title(f"periodicity residuals (P = {report.period:.4g})")
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def perturbation_figure(record):
    """Per-step max-norm distance from the background profile."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    t = np.asarray(record.step_times)
    p = np.asarray(record.perturbation)
    positive = p > 0.0
    if positive.any():
        ax.semilogy(t[positive], p[positive], linewidth=0.9)
    else:
        ax.plot(t, p, linewidth=0.9)
    ax.set_xlabel("t")
    ax.set_ylabel("max |V - V_steady|")
    ax.set_title("perturbation history")
    fig.tight_layout()
    return fig


def sweep_figure(rows, axis: str):
    """Numeric sweep columns against the swept value; blanks are skipped."""
    plt = _plt()
    fig, (ax_l, ax_r) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    for column, ax, style in (("l_max", ax_l, "o-"), ("residual_max", ax_r, "s-")):
        vals, ys = [], []
        for row in rows:
            cell = row[column]
            if cell in ("", "unbounded"):
                continue
            vals.append(float(row["value"]))
            ys.append(float(cell))
        if ys:
            ax.plot(vals, ys, style)
        ax.set_xlabel(axis)
        ax.set_ylabel(column)
    ax_l.set_title("maximal duct length")
    ax_r.set_title("periodicity residual")
    fig.tight_layout()
    return fig


def save_figure(fig, path, dpi: int = 140):
    fig.savefig(path, dpi=dpi)
    import matplotlib.pyplot as plt

    plt.close(fig)
