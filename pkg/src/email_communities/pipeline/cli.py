"""Unified CLI for the community-detection pipeline."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from email_communities.errors import PipelineError
from email_communities.pipeline.config import PipelineConfig, load_config, parse_range
from email_communities.pipeline.stages import STAGES, run_pipeline, run_stage
from email_communities.schema import HopScope

SUBCOMMANDS: dict[str, str] = {
    "ingest": "Parse the mailbox into records.jsonl and diagnostics.json",
    "build-graph": "Build the UW-Graph (GraphML, DOT, node list) and CPI feature files",
    "cluster": "Run CSM k-medoids and write partition.json/.csv and communities.dot",
    "evaluate": "Write quality.json (density, entropy, optional f-measure, stats)",
    "stats": "Write the per-community topology table (stats.csv, stats.md)",
    "sweep": "Cluster for every k in --sweep LO:HI and write sweep.csv",
    "pipeline": "Run ingest, build-graph, cluster, evaluate, stats (and sweep) in order",
}


def _setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )


def _sweep_range(value: str) -> tuple[int, int]:
    try:
        return parse_range(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_common_args(parser: argparse.ArgumentParser) -> None:
    defaults = PipelineConfig()
    parser.add_argument("--config", type=Path, help="JSON config file; flags override its values")
    parser.add_argument("--corpus", type=Path, dest="corpus_path",
                        help="Mail directory or .csv interaction log")
    parser.add_argument("--owner", action="append", dest="owner_addresses", metavar="ADDR",
                        help="Mailbox owner address (repeatable for aliases)")
    parser.add_argument("--scope", choices=[s.value for s in HopScope], dest="hop_scope",
                        help=f"Edge scope (default: {defaults.hop_scope.value})")
    parser.add_argument("--min-weight", type=int, dest="min_weight",
                        help=f"Drop edges lighter than this (default: {defaults.min_weight})")
    parser.add_argument("--keep-isolated", action="store_false", dest="drop_isolated", default=None,
                        help="Keep nodes left without edges after pruning")
    parser.add_argument("--k", type=int, help=f"Number of communities (default: {defaults.k})")
    parser.add_argument("--alpha", type=float,
                        help=f"Structural weight in CSM, in [0, 1] (default: {defaults.alpha})")
    parser.add_argument("--seed", type=int, help=f"Random seed (default: {defaults.seed})")
    parser.add_argument("--max-iters", type=int, dest="max_iters",
                        help=f"k-medoids iteration cap (default: {defaults.max_iters})")
    parser.add_argument("--sweep", type=_sweep_range, dest="k_sweep", metavar="LO:HI",
                        help="Inclusive k range for the sweep (default: none)")
    parser.add_argument("--bins", type=int, help=f"Entropy bins per feature (default: {defaults.bins})")
    parser.add_argument("--reference", type=Path, dest="reference_path",
                        help="address,label CSV for f-measure (default: none)")
    parser.add_argument("--out", type=Path, dest="output_dir",
                        help=f"Artifact directory (default: {defaults.output_dir}/)")
    parser.add_argument("--workers", type=int,
                        help=f"Parallel workers for ingest and sweep (default: {defaults.workers})")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="email-communities",
        description="Personalized email community detection",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in SUBCOMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        _add_common_args(sub)
    return parser


_CONFIG_FIELDS = tuple(PipelineConfig.model_fields)


def run_subcommand(name: str, config: PipelineConfig) -> list[Path]:
    if name == "pipeline":
        return run_pipeline(config)
    if name not in STAGES:
        raise ValueError(f"unknown subcommand {name!r}")
    return run_stage(name, config)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)

    overrides = {f: getattr(args, f, None) for f in _CONFIG_FIELDS}
    try:
        config = load_config(args.config, overrides)
        written = run_subcommand(args.command, config)
    except PipelineError as e:
        print(e.one_line(), file=sys.stderr)
        return e.exit_code

    print(f"{args.command}: {len(written)} artifact(s) in {config.output_dir}")
    for path in written:
        print(f"  {path.name}")
    return 0
