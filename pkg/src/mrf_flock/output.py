"""CSV writers for simulation logs.

Three comma-separated files with \\n line endings and full-precision floats:
trajectory.csv (one row per agent per tick), metrics.csv (one row per tick),
summary.csv (one row per agent).
"""

from __future__ import annotations

from pathlib import Path

from .sim import SimulationLog


def _fmt(x) -> str:
    return repr(float(x))


def write_trajectory_csv(log: SimulationLog, path) -> Path:
    path = Path(path)
    lines = ["t,agent_id,px,py,vx,vy,ux,uy"]
    for k in range(len(log.times)):
        t = _fmt(log.times[k])
        for i in range(log.n_agents):
            p = log.positions[k, i]
            v = log.velocities[k, i]
            u = log.inputs[k, i]
            lines.append(
                f"{t},{i},{_fmt(p[0])},{_fmt(p[1])},{_fmt(v[0])},{_fmt(v[1])},"
                f"{_fmt(u[0])},{_fmt(u[1])}"
            )
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def write_metrics_csv(log: SimulationLog, path) -> Path:
    path = Path(path)
    lines = ["t,order,d_min,d_max,d_avg"]
    for rec in log.metrics:
        lines.append(
            f"{_fmt(rec.t)},{_fmt(rec.order)},{_fmt(rec.d_min)},"
            f"{_fmt(rec.d_max)},{_fmt(rec.d_avg)}"
        )
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def write_summary_csv(log: SimulationLog, path) -> Path:
    path = Path(path)
    lines = ["agent_id,u_avg,traj_length"]
    for i in range(log.n_agents):
        lines.append(
            f"{i},{_fmt(log.summary.u_avg[i])},{_fmt(log.summary.trajectory_length[i])}"
        )
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def write_outputs(log: SimulationLog, out_dir) -> list[Path]:
    """Write all three CSVs into out_dir; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        write_trajectory_csv(log, out_dir / "trajectory.csv"),
        write_metrics_csv(log, out_dir / "metrics.csv"),
        write_summary_csv(log, out_dir / "summary.csv"),
    ]
