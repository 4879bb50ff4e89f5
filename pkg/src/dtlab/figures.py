"""File-based figure rendering for the CLI report paths.

Everything here draws with the Agg backend and writes PNG files next to the
delimited output; no interactive windows are ever opened.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bpoly import BElem  # noqa: E402
from .brown_hs import Region  # noqa: E402
from .experiments import (  # noqa: E402
    AngleReport,
    ConcentrationReport,
    SemicircleMCReport,
    TraceMCReport,
)

DPI = 150


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def render_moment_figure(
    curves: Sequence[tuple[str, BElem]], path: Path, grid_size: int = 201
) -> Path:
    """Plot expectation polynomials over [0, 1]."""
    xs = [j / (grid_size - 1) for j in range(grid_size)]
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, f in curves:
        ys = [float(f(Fraction(j, grid_size - 1))) for j in range(grid_size)]
        ax.plot(xs, ys, label=label)
    ax.set_xlabel("x")
    ax.set_ylabel("value")
    ax.set_title("word expectations")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def render_angle_figure(report: AngleReport, path: Path) -> Path:
    """Per-trial subspace and vector cosines against the analytic bounds."""
    trials = [t.trial for t in report.trial_records]
    cos_sub = [t.cos_subspace for t in report.trial_records]
    cos_vec = [t.cos_vector for t in report.trial_records]
    fig, ax = plt.subplots(figsize=(6.5, 4))
    ax.plot(trials, cos_sub, "o-", ms=4, label="subspace cosine")
    ax.plot(trials, cos_vec, "s-", ms=4, label="vector cosine")
    ax.axhline(report.bound_main, color="k", ls="--", lw=1, label="analytic bound")
    ax.axhline(
        report.bound_uniform, color="gray", ls=":", lw=1, label="uniform bound"
    )
    ax.set_xlabel("trial")
    ax.set_ylabel("cosine")
    ax.set_ylim(0, 1)
    ax.set_title(f"two-cluster angle, N={report.config.N}, K={report.config.K}")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def render_concentration_figure(report: ConcentrationReport, path: Path) -> Path:
    """Ladder of cosine bounds against the composed floor."""
    n = [r.n_param for r in report.rungs]
    fig, ax = plt.subplots(figsize=(6.5, 4))
    ax.plot(n, [r.bound_main for r in report.rungs], "o-", label="cluster bound")
    ax.plot(n, [r.rhs_floor for r in report.rungs], "s--", label="required floor")
    mat = [(r.n_param, r.cos_matrix_mean) for r in report.rungs if r.cos_matrix_mean]
    if mat:
        ax.plot(*zip(*mat), "d:", label="matrix estimate")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("rung parameter")
    ax.set_ylabel("cosine lower bound")
    ax.set_ylim(0, 1)
    ax.set_title(f"concentration ladder, a={report.config.a}, b={report.config.b}")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def render_spectrum_figure(
    eigenvalues: np.ndarray,
    regions: Sequence[tuple[str, Region]],
    path: Path,
) -> Path:
    """Scatter of empirical eigenvalues, colored by region membership."""
    ev = np.asarray(eigenvalues)
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    taken = np.zeros(len(ev), dtype=bool)
    for label, region in regions:
        mask = np.array([region.contains(complex(z)) for z in ev]) & ~taken
        taken |= mask
        ax.plot(ev[mask].real, ev[mask].imag, ".", ms=4, label=label)
    if not taken.all():
        rest = ev[~taken]
        ax.plot(rest.real, rest.imag, ".", ms=4, color="lightgray", label="other")
    theta = np.linspace(0, 2 * np.pi, 256)
    radii = sorted({rr for _, region in regions for rr in region.boundary_radii()})
    for rr in radii:
        ax.plot(rr * np.cos(theta), rr * np.sin(theta), "k-", lw=0.5, alpha=0.5)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("empirical eigenvalues")
    ax.legend(fontsize=8, loc="upper right")
    return _save(fig, path)


def render_mc_figure(
    report: TraceMCReport | SemicircleMCReport, path: Path
) -> Path:
    """Estimates against references for the Monte-Carlo trace checks."""
    if isinstance(report, TraceMCReport):
        labels = list(report.words)
        title = "word traces vs engine"
    else:
        labels = [f"2k={2 * (k + 1)}" for k in range(report.k_max)]
        title = "even moments vs Catalan"
    x = np.arange(len(labels))
    fig, ax = plt.subplots(figsize=(max(6.0, 0.5 * len(labels)), 4))
    ax.bar(x - 0.2, report.estimates, width=0.4, label="estimate")
    ax.bar(x + 0.2, report.references, width=0.4, label="reference")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=60, fontsize=7)
    ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(True, axis="y", alpha=0.3)
    return _save(fig, path)
