"""
fidelity: structure-only TEDS of each record against the skeleton of its cell list.
"""
import argparse
import logging

from tablesmith.commands.common import write_json
from tablesmith.schemas.pipeline import PipelineConfig
from tablesmith.services.generator_service import record_fidelity
from tablesmith.services.manifest_service import load_manifest

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("fidelity", help="Check that every table's HTML matches its annotated structure")
    parser.add_argument("manifest")
    parser.add_argument("--merge-th-td", action="store_true")
    parser.add_argument("--out", help="Report JSON (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    records = load_manifest(args.manifest)
    scores = {r.id: record_fidelity(r, args.merge_th_td) for r in records}
    below = sorted(record_id for record_id, score in scores.items() if score < 1.0)
    mean = sum(scores.values()) / len(scores) if scores else 0.0
    logger.info(f"Structure fidelity: records={len(scores)}, mean={mean:.4f}, below_one={len(below)}")
    write_json({"n": len(scores), "mean": mean, "below_one": below, "scores": scores}, args.out)
    return 1 if below else 0
