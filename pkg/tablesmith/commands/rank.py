"""
rank: filling-checker ranks for every table of a manifest.
"""
import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from tablesmith.core.errors import RankerError
from tablesmith.llm.factory import build_ranker
from tablesmith.schemas.checker import RankedRecord
from tablesmith.schemas.pipeline import PipelineConfig, RankerKind
from tablesmith.schemas.table import AnnotationRecord
from tablesmith.services.checker_service import rank_table
from tablesmith.services.manifest_service import load_manifest, write_jsonl
from tablesmith.services.validator_service import validate_table

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("rank", help="Rank structure, topic and semantics of every table")
    parser.add_argument("manifest")
    parser.add_argument("--ranker", choices=[k.value for k in RankerKind])
    parser.add_argument("--out", required=True, help="Ranks JSONL to write")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    records = load_manifest(args.manifest)
    kind = RankerKind(args.ranker) if args.ranker else config.checker.ranker
    ranker = build_ranker(kind, config.provider, config.paths.transcript_dir)

    def rank_one(record: AnnotationRecord) -> Optional[RankedRecord]:
        try:
            ranks = rank_table(record.html, record.topic, ranker)
        except RankerError as e:
            logger.warning(f"Ranking failed: id={record.id}, error={e.message}")
            return None
        return RankedRecord(id=record.id, topic=record.topic, ranks=ranks,
                            defects=validate_table(record.html).defects)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        ranked = list(pool.map(rank_one, records))

    written = write_jsonl([r for r in ranked if r is not None], args.out)
    failed = len(records) - written
    logger.info(f"Ranked manifest: records={len(records)}, ranked={written}, failed={failed}, ranker={kind.value}")
    return 1 if failed else 0
