"""Figure rendering for experiment and entropy reports.

Always uses the Agg backend (files only, no display).  Imported lazily
by the CLI so that matching commands stay fast.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_experiment_figure(result, path):
    """Growth of mean M_n against log n with the fitted/theoretical slopes."""
    logs = np.log(np.asarray(result.ladder, dtype=float))
    fig, (ax, ax2) = plt.subplots(1, 2, figsize=(10.5, 4.2))

    for run in result.per_environment:
        ax.plot(logs, run.mean_curve, color="0.75", lw=0.9, zorder=1)
    ax.plot(
        logs,
        result.pooled_curve,
        "o-",
        color="C0",
        lw=1.6,
        ms=4,
        label="pooled mean $M_n$",
        zorder=3,
    )
    anchor = len(logs) // 2
    fit_line = result.pooled_curve[anchor] + result.pooled_slope * (logs - logs[anchor])
    ax.plot(
        logs,
        fit_line,
        "--",
        color="C1",
        lw=1.2,
        label=f"fit, slope {result.pooled_slope:.3f}",
    )
    if result.theoretical_slope is not None:
        theory_line = result.pooled_curve[anchor] + result.theoretical_slope * (
            logs - logs[anchor]
        )
        ax.plot(
            logs,
            theory_line,
            ":",
            color="C2",
            lw=1.2,
            label=f"theory, slope {result.theoretical_slope:.3f}",
        )
    ax.set_xlabel(r"$\log n$")
    ax.set_ylabel(r"mean $M_n$")
    ax.set_title(f"{result.mode} growth")
    ax.legend(frameon=False, fontsize=9)

    ratios = [m / math.log(n) for n, m in zip(result.ladder, result.pooled_curve)]
    ax2.plot(logs, ratios, "o-", color="C0", ms=4)
    if result.theoretical_slope is not None:
        ax2.axhline(result.theoretical_slope, color="C2", ls=":", lw=1.2)
    ax2.set_xlabel(r"$\log n$")
    ax2.set_ylabel(r"$M_n / \log n$")
    ax2.set_title("convergence")

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_entropy_figure(report, path):
    """Plug-in ladders for H2 and h0 with closed-form levels."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    if report.h2_plugin:
        ks, vals = zip(*report.h2_plugin)
        ax.plot(ks, vals, "o-", color="C0", ms=4, label=r"$H_2$ plug-in")
    if report.h0_plugin:
        ks, vals = zip(*report.h0_plugin)
        ax.plot(ks, vals, "s-", color="C3", ms=4, label=r"$h_0$ plug-in")
    if report.h2_closed is not None:
        ax.axhline(report.h2_closed, color="C0", ls=":", lw=1.2)
    if report.h0_closed is not None:
        ax.axhline(report.h0_closed, color="C3", ls=":", lw=1.2)
    if report.h2_coincidence is not None:
        c = report.h2_coincidence
        ax.errorbar(
            [c.depth],
            [c.estimate],
            yerr=[4 * c.stderr],
            fmt="D",
            color="C1",
            ms=5,
            capsize=3,
            label=r"$H_2$ coincidence $\pm 4$ s.e.",
        )
    ax.set_xlabel("cylinder depth $k$")
    ax.set_ylabel("nats")
    ax.set_title("entropy ladders")
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
