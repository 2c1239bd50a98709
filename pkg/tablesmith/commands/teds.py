"""
teds: score predictions against gold tables.
"""
import argparse
import logging

from tablesmith.commands.common import write_json
from tablesmith.schemas.pipeline import PipelineConfig
from tablesmith.schemas.table import AnnotationRecord, PredictionRecord
from tablesmith.schemas.teds import TedsMode
from tablesmith.services.manifest_service import read_jsonl
from tablesmith.services.teds_service import batch_teds

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("teds", help="Tree-edit-distance similarity of predictions vs gold")
    parser.add_argument("--pred", required=True, help="Predictions JSONL (id, html)")
    parser.add_argument("--gold", required=True, help="Gold manifest JSONL")
    parser.add_argument("--mode", choices=[m.value for m in TedsMode], default=TedsMode.full.value)
    parser.add_argument("--merge-th-td", action="store_true", help="Treat th and td as the same node label")
    parser.add_argument("--out", help="Report JSON (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    predictions = read_jsonl(args.pred, PredictionRecord)
    gold = read_jsonl(args.gold, AnnotationRecord)
    report = batch_teds(predictions, gold, TedsMode(args.mode), args.merge_th_td, workers)
    logger.info(f"TEDS computed: n={report.n}, mean={report.mean:.4f}, invalid={report.invalid}")
    write_json(report, args.out)
    return 0
