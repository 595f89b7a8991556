"""Command-line entry point: run a scenario, write CSVs and figures."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config_io import ConfigError, load_scenario
from .control_space import InfeasibleStateError
from .output import write_outputs
from .sim import InfeasibleScenarioError, run_simulation

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_INFEASIBLE = 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mrf-flock",
        description=(
            "Run the leader-follower flocking scenario and write "
            "trajectory/metrics/summary CSVs plus report figures."
        ),
    )
    parser.add_argument("--config", type=Path, default=None, help="key = value config file")
    parser.add_argument("--out-dir", type=Path, required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override rng_seed")
    parser.add_argument("--steps", type=int, default=None, help="override step count")
    parser.add_argument("--quiet", action="store_true", help="suppress the run summary")
    parser.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    args = parser.parse_args(argv)

    try:
        config = load_scenario(args.config, seed=args.seed, steps=args.steps)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    try:
        log = run_simulation(config)
    except (InfeasibleScenarioError, InfeasibleStateError) as exc:
        print(f"infeasible scenario: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    paths = write_outputs(log, args.out_dir)
    if not args.no_plots:
        from .plots import render_figures

        paths += render_figures(log, args.out_dir)

    if not args.quiet:
        final = log.metrics[-1]
        followers = slice(1, log.n_agents)
        print(f"ran {config.steps} ticks ({config.steps * config.dt:.1f} s), "
              f"{config.n_agents} agents, seed {config.rng_seed}")
        print(f"final order {final.order:.3f}, d_avg {final.d_avg:.3f} m, "
              f"collision-free: {log.summary.collision_free}")
        print(f"mean follower u_avg {log.summary.u_avg[followers].mean():.4f} m/s^2")
        for p in paths:
            print(f"wrote {p}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
