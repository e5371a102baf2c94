"""Command-line entry point.

Subcommands mirror the pipeline stages plus a full run::

    transmigrate run      --config cfg.json
    transmigrate analyze  --config cfg.json
    transmigrate index    --config cfg.json
    transmigrate plan     --config cfg.json
    transmigrate translate --config cfg.json
    transmigrate validate --config cfg.json
    transmigrate report   --config cfg.json

Flags override config fields: --backend, --seed, --max-rounds, --dry-run,
--dump-prompts. Exit status 0 on success, 1 on a stage failure (state is
preserved for resume), 2 on configuration problems.
"""

from __future__ import annotations

import argparse
import logging
import sys

from transmigrate.config import RunConfig
from transmigrate.errors import ConfigurationError, OrderingError, TransmigrateError
from transmigrate.pipeline import STAGES, Pipeline


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transmigrate",
        description="Dependency-ordered Android-to-iOS translation pipeline",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="log at debug level")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in ("run",) + STAGES:
        p = sub.add_parser(command, help=f"run the {command} stage" if command != "run" else "run all stages")
        p.add_argument("--config", required=True, help="path to the JSON run configuration")
        p.add_argument("--backend", choices=("mock", "live"), help="override the configured backend")
        p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--max-rounds", type=int, help="override the refinement round bound")
        p.add_argument("--dry-run", action="store_true", help="stop before any backend call")
        p.add_argument("--dump-prompts", action="store_true", help="write every rendered prompt to the output root")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config)
    if args.backend:
        config.backend = args.backend
    if args.seed is not None:
        config.seed = args.seed
    if args.max_rounds is not None:
        config.max_rounds = args.max_rounds
    if args.dry_run:
        config.dry_run = True
    if args.dump_prompts:
        config.dump_prompts = True
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args)
        pipeline = Pipeline(config)
        if args.command == "run":
            pipeline.run()
        else:
            pipeline.run_stage(args.command)
    except (ConfigurationError, OrderingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TransmigrateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
