"""Figure rendering for CLI reports.

One PNG per report, written next to the delimited/JSON output.  Uses the
non-interactive Agg backend; nothing here opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402


def _level_panel(ax, rows) -> None:
    ns = [r["n"] for r in rows]
    analytic = [r["eps_analytic"] for r in rows]
    ax.plot(ns, analytic, "o", ms=7, mfc="none", label="closed form")
    oracle = [(r["n"], r["eps_oracle"]) for r in rows
              if r.get("eps_oracle") is not None]
    if oracle:
        ax.plot(*zip(*oracle), "k+", ms=9, label="oracle")
    ax.set_xlabel("level index n")
    ax.set_ylabel("spectral parameter")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title("levels", fontsize=10)


def _mismatch_panel(ax, curve) -> None:
    eps = np.asarray(curve["eps"], dtype=float)
    abs_m = np.asarray(curve["abs_m"], dtype=float)
    ax.semilogy(eps, np.maximum(abs_m, 1e-18), lw=0.8)
    ax.set_xlabel(r"$\epsilon$")
    ax.set_ylabel("|M|")
    ax.set_title("shooting mismatch", fontsize=10)


def _spectrum_figure(envelope: dict):
    ver = envelope.get("verification") or {}
    curve = (ver.get("extras") or {}).get("mismatch_curve")
    ncols = 2 if curve else 1
    fig, axes = plt.subplots(1, ncols, figsize=(4.2 * ncols, 3.2))
    axes = np.atleast_1d(axes)
    _level_panel(axes[0], envelope["levels"])
    if curve:
        _mismatch_panel(axes[1], curve)
    return fig


def _zero_modes_figure(envelope: dict):
    rows = envelope["levels"]
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    labels = []
    for row in rows:
        labels.append(f"n={row['n']}, ky={row['ky']:+.3g}")
    # residual bars per mode; the sampled fields live only in memory
    idx = np.arange(len(rows))
    res = [max(filter(None, (r.get("schrodinger_residual"), r.get("residual1"),
                             r.get("residual2"), 1e-18))) for r in rows]
    ax.bar(idx, res, width=0.6)
    ax.set_yscale("log")
    ax.set_xticks(idx, labels, rotation=20, fontsize=7)
    ax.set_ylabel("worst residual")
    ax.set_title(f"zero modes: {envelope['case']}", fontsize=10)
    return fig


def _bands_figure(envelope: dict):
    ver = envelope.get("verification") or {}
    extras = ver.get("extras") or {}
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    for j, branch in enumerate(("minus", "plus")):
        data = extras.get(f"hill_{branch}")
        if not data:
            continue
        lows = np.asarray(data["lowest_real_parts"], dtype=float)
        ax.plot(np.full_like(lows, j, dtype=float), lows, "_", ms=22,
                label=f"{branch} branch")
    ax.axhline(0.0, color="k", lw=0.5, ls=":")
    ax.set_xticks([0, 1], ["minus", "plus"])
    ax.set_ylabel("Hill eigenvalues (real part)")
    ax.set_title("band edges at the scanned crystal momentum", fontsize=10)
    ax.legend(frameon=False, fontsize=8)
    return fig


def render_report_figure(envelope: dict, path: Path) -> None:
    """Render the figure matching the report's command and save it."""
    command = envelope["command"]
    if command == "spectrum":
        fig = _spectrum_figure(envelope)
    elif command == "zero-modes":
        fig = _zero_modes_figure(envelope)
    elif command == "bands":
        fig = _bands_figure(envelope)
    else:
        raise ValueError(f"no figure defined for command {command!r}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
