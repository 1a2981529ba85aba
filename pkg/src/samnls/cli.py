"""Command-line entry point for the experiment drivers.

One subcommand per experiment family; each accepts an optional JSON config
file, an output directory, and a thread count.  Exit status: 0 on success,
1 if any individual run failed (remaining rows are still written), 2 for a
configuration error.
"""

import argparse
import dataclasses
import sys

from .harness import (
    EXPERIMENTS,
    ConfigError,
    ExperimentConfig,
    load_config,
    run_experiment,
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="samnls",
        description="Error sweeps and long-time experiments for oscillatory "
        "cubic Schrodinger models.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON config file overriding the defaults")
        p.add_argument("--out", default="results", help="output directory")
        p.add_argument("--threads", type=int, default=1, help="parallel runs")
        p.add_argument(
            "--paper-scale",
            action="store_true",
            help="use the full-size parameter grids instead of the desk grids",
        )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if args.config:
            cfg = load_config(args.config, experiment=args.experiment)
        else:
            cfg = ExperimentConfig(experiment=args.experiment)
        if args.paper_scale:
            cfg = dataclasses.replace(cfg, scale="paper")
        report = run_experiment(cfg, out_dir=args.out, threads=args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for failure in report.failures:
        print(f"run failed: {failure['key']}: {failure['error']}", file=sys.stderr)
    return 1 if report.failures else 0


if __name__ == "__main__":
    sys.exit(main())
