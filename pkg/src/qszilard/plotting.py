"""Figure rendering for the CLI report paths.

Takes the same row dicts the delimited writers consume, so a rendered
figure always shows exactly what landed in the table.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _column(rows, key):
    return np.array([row[key] for row in rows], dtype=float)


def save_work_gaps(rows, path):
    """Work advantage of the entangled state over the classical twin."""
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    eta = _column(rows, "eta")
    for key, label, marker in (("dw_m1", "population setting", "o"),
                               ("dw_m2", "coherence setting", "s")):
        err_key = key + "_se"
        if rows and err_key in rows[0]:
            ax.errorbar(eta, _column(rows, key), yerr=3.0 * _column(rows, err_key),
                        marker=marker, ms=3, lw=1.0, capsize=2, label=label)
        else:
            ax.plot(eta, _column(rows, key), marker=marker, ms=3, lw=1.0, label=label)
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.set_xlabel(r"thermal bias $\eta$")
    ax.set_ylabel("work difference")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)


def save_violation_map(rows, boundary_rows, path):
    """Heat map of work violation over (eta, q), zero crossing in white."""
    eta = _column(rows, "eta")
    q = _column(rows, "q")
    viol = _column(rows, "violation")
    etas = np.unique(eta)
    qs = np.unique(q)
    grid = np.full((len(qs), len(etas)), np.nan)
    e_index = {v: i for i, v in enumerate(etas)}
    q_index = {v: i for i, v in enumerate(qs)}
    for e, qq, v in zip(eta, q, viol):
        grid[q_index[qq], e_index[e]] = v

    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    span = max(abs(np.nanmin(grid)), abs(np.nanmax(grid)), 1e-12)
    mesh = ax.pcolormesh(etas, qs, grid, cmap="RdBu_r", vmin=-span, vmax=span,
                         shading="nearest")
    fig.colorbar(mesh, ax=ax, label="work $-$ classical ceiling")
    if boundary_rows:
        ax.plot(_column(boundary_rows, "eta"), _column(boundary_rows, "q_star"),
                "k--", lw=1.2, label="violation boundary")
        ax.legend(frameon=False, loc="lower right")
    ax.set_xlabel(r"thermal bias $\eta$")
    ax.set_ylabel("mixing weight $q$")
    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)


def save_correlation_scatter(rows, spearman, path):
    """Steering violation against work violation, one marker per grid point."""
    fig, ax = plt.subplots(figsize=(4.6, 3.8))
    sc = ax.scatter(_column(rows, "steering_violation"), _column(rows, "work_violation"),
                    c=_column(rows, "q"), cmap="viridis", s=14)
    fig.colorbar(sc, ax=ax, label="mixing weight $q$")
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.axvline(0.0, color="0.6", lw=0.8)
    ax.set_xlabel("steering violation")
    ax.set_ylabel("work violation")
    ax.set_title(f"Spearman rank correlation {spearman:.4f}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)


def save_sweep(rows, path):
    """Work and ceiling curves along a sweep; heat map when both axes vary."""
    eta = _column(rows, "eta")
    q = _column(rows, "q")
    if len(np.unique(eta)) > 1 and len(np.unique(q)) > 1:
        save_violation_map(rows, [], path)
        return
    if len(np.unique(eta)) > 1:
        x, xlabel = eta, r"thermal bias $\eta$"
    else:
        x, xlabel = q, "mixing weight $q$"
    order = np.argsort(x)
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    work = _column(rows, "work")
    if rows and "work_se" in rows[0]:
        ax.errorbar(x[order], work[order], yerr=3.0 * _column(rows, "work_se")[order],
                    marker="o", ms=3, lw=1.0, capsize=2, label="extracted work")
    else:
        ax.plot(x[order], work[order], marker="o", ms=3, lw=1.0, label="extracted work")
    ax.plot(x[order], _column(rows, "bound")[order], "k--", lw=1.0, label="classical ceiling")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("average work")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)
