"""
stats: label composition of a manifest.
"""
import argparse

from tablesmith.commands.common import write_json
from tablesmith.schemas.pipeline import PipelineConfig
from tablesmith.services.dataset_service import composition
from tablesmith.services.manifest_service import load_manifest


def register(subparsers) -> None:
    parser = subparsers.add_parser("stats", help="Count records per label value")
    parser.add_argument("manifest")
    parser.add_argument("--out", help="Report JSON (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    write_json(composition(load_manifest(args.manifest)), args.out)
    return 0
