"""
validate: structural check of every table in a manifest.
"""
import argparse
import logging

from tablesmith.commands.common import write_json
from tablesmith.schemas.pipeline import PipelineConfig
from tablesmith.schemas.table import PredictionRecord
from tablesmith.services.manifest_service import read_jsonl
from tablesmith.services.validator_service import validate_table

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("validate", help="Report structural defects of every table")
    parser.add_argument("manifest", help="JSONL with at least id and html per line")
    parser.add_argument("--report", help="Report JSON (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    records = read_jsonl(args.manifest, PredictionRecord)
    results = []
    for record in records:
        report = validate_table(record.html)
        results.append({
            "id": record.id,
            "valid": report.valid,
            "defects": [d.model_dump(mode="json") for d in report.defects],
        })
    invalid = sum(1 for r in results if not r["valid"])
    logger.info(f"Validated manifest: records={len(results)}, invalid={invalid}")
    write_json({"total": len(results), "valid": len(results) - invalid, "invalid": invalid, "records": results},
               args.report)
    return 1 if invalid else 0
