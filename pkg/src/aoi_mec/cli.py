"""Command-line entry point.

    aoi-mec <experiment> --config <file> [--out <dir>] [--seed N]
            [--stp-source closed_form|monte_carlo]

Exit codes: 0 success, 2 malformed config, 3 infeasible optimisation
problem, 4 numeric singularity that survived the perturbation fallback.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigError, DomainError, InfeasibleError, SingularityError
from .experiments import EXPERIMENTS, load_config, run_experiment

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_SINGULAR = 4


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="aoi-mec",
        description="Mean-age-of-information experiments for partial-offloading edge networks",
    )
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", default=None, help="TOML experiment file (defaults used when absent)")
    p.add_argument("--out", default=None, help="output directory (overrides config)")
    p.add_argument("--seed", type=int, default=None, help="seed override")
    p.add_argument(
        "--stp-source",
        choices=("closed_form", "monte_carlo"),
        default=None,
        help="override the transmission-success-probability source",
    )
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
        if args.stp_source is not None:
            cfg = dataclasses.replace(cfg, stp_source=args.stp_source)
        rows = run_experiment(args.experiment, cfg, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SingularityError as exc:
        print(f"singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{args.experiment}: {len(rows)} rows written")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
