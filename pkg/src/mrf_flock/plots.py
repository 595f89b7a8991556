"""Matplotlib figures rendered next to the CSV output."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .potentials import desired_distance
from .sim import LEADER_INDEX, SimulationLog


def _save(fig: Figure, path: Path) -> Path:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    return path


def _trajectory_figure(log: SimulationLog) -> Figure:
    fig = Figure(figsize=(6, 6))
    ax = fig.subplots()
    for i in range(log.n_agents):
        xy = log.positions[:, i]
        if i == LEADER_INDEX:
            ax.plot(xy[:, 0], xy[:, 1], "k--", lw=1.8, label="leader", zorder=3)
        else:
            ax.plot(xy[:, 0], xy[:, 1], lw=1.0, alpha=0.8)
        ax.plot(xy[0, 0], xy[0, 1], "o", ms=4, mfc="white", mec="gray")
        ax.plot(xy[-1, 0], xy[-1, 1], "s", ms=4, color="C3" if i else "k")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title("Agent trajectories")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    return fig


def _order_figure(log: SimulationLog) -> Figure:
    fig = Figure(figsize=(7, 3.2))
    ax = fig.subplots()
    order = [rec.order for rec in log.metrics]
    ax.plot(log.times, order, lw=1.2)
    ax.axhline(1.0, color="gray", lw=0.8, ls=":")
    ax.set_ylim(-1.05, 1.1)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("order")
    ax.set_title("Velocity correlation")
    return fig


def _distance_figure(log: SimulationLog) -> Figure:
    fig = Figure(figsize=(7, 3.2))
    ax = fig.subplots()
    ax.plot(log.times, [r.d_min for r in log.metrics], lw=1.0, label="$d_{min}$")
    ax.plot(log.times, [r.d_max for r in log.metrics], lw=1.0, label="$d_{max}$")
    ax.plot(log.times, [r.d_avg for r in log.metrics], lw=1.4, label="$d_{avg}$")
    d_t = desired_distance(log.config.controller.potentials)
    ax.axhline(d_t, color="gray", lw=0.8, ls="--", label="desired")
    ax.axhline(
        2.0 * log.config.controller.bounds.r_coll,
        color="red",
        lw=0.8,
        ls=":",
        label="collision floor",
    )
    ax.set_xlabel("t [s]")
    ax.set_ylabel("distance [m]")
    ax.set_title("Nearest-neighbor distances")
    ax.legend(loc="best", fontsize=8, ncols=2)
    return fig


def _input_figure(log: SimulationLog) -> Figure:
    fig = Figure(figsize=(7, 3.2))
    ax = fig.subplots()
    mags = np.linalg.norm(log.inputs, axis=-1)
    for i in range(1, log.n_agents):
        ax.plot(log.times, mags[:, i], lw=0.8, alpha=0.8, label=f"agent {i}")
    ax.axhline(
        log.config.controller.bounds.u_max, color="red", lw=0.8, ls=":", label="$u_{max}$"
    )
    ax.set_xlabel("t [s]")
    ax.set_ylabel("|u| [m/s$^2$]")
    ax.set_title("Applied input magnitude")
    ax.legend(loc="upper right", fontsize=7, ncols=3)
    return fig


def render_figures(log: SimulationLog, out_dir) -> list[Path]:
    """Render the report figures into out_dir; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        _save(_trajectory_figure(log), out_dir / "trajectory.png"),
        _save(_order_figure(log), out_dir / "order.png"),
        _save(_distance_figure(log), out_dir / "distances.png"),
        _save(_input_figure(log), out_dir / "inputs.png"),
    ]
