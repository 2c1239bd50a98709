"""
split: deterministic split stratified by attribute combo.
"""
import argparse
import logging

from tablesmith.core.errors import ConfigError
from tablesmith.schemas.pipeline import PipelineConfig
from tablesmith.services.dataset_service import parse_ratios, split_manifest
from tablesmith.services.manifest_service import load_manifest, write_manifest

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("split", help="Split a manifest into parts, e.g. train/test")
    parser.add_argument("manifest")
    parser.add_argument("--ratios", default="0.8,0.2", help="Comma-separated weights, one per output")
    parser.add_argument("--outs", nargs="+", required=True, help="One output manifest per ratio")
    parser.add_argument("--seed", type=int)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    ratios = parse_ratios(args.ratios)
    if len(ratios) != len(args.outs):
        raise ConfigError(f"{len(ratios)} ratios given for {len(args.outs)} outputs")
    seed = args.seed if args.seed is not None else (config.seed or 0)
    parts = split_manifest(load_manifest(args.manifest), ratios, seed)
    for part, out in zip(parts, args.outs):
        write_manifest(part, out)
    print(" ".join(f"{out}={len(part)}" for part, out in zip(parts, args.outs)))
    return 0
