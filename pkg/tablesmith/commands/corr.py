"""
corr: Spearman, Pearson and Kendall correlation between two rank files.
"""
import argparse
import logging

from tablesmith.commands.common import write_json
from tablesmith.core.errors import AlignmentError
from tablesmith.schemas.checker import RankedRecord
from tablesmith.schemas.pipeline import PipelineConfig
from tablesmith.services.correlation_service import correlate
from tablesmith.services.manifest_service import read_jsonl

logger = logging.getLogger(__name__)

DIMENSIONS = {
    "overall": "overall",
    "structure": "structure_rank",
    "topic": "topic_rank",
    "semantic": "semantic_rank",
}


def register(subparsers) -> None:
    parser = subparsers.add_parser("corr", help="Correlate two rank files record by record")
    parser.add_argument("ranks_a")
    parser.add_argument("ranks_b")
    parser.add_argument("--dimension", choices=sorted(DIMENSIONS), default="overall")
    parser.add_argument("--out", help="Report JSON (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    a = {r.id: r for r in read_jsonl(args.ranks_a, RankedRecord)}
    b = {r.id: r for r in read_jsonl(args.ranks_b, RankedRecord)}
    if set(a) != set(b):
        raise AlignmentError(
            "rank files cover different ids",
            only_in_a=sorted(set(a) - set(b)),
            only_in_b=sorted(set(b) - set(a)),
        )
    field = DIMENSIONS[args.dimension]
    ids = sorted(a)
    summary = correlate(
        [getattr(a[i].ranks, field) for i in ids],
        [getattr(b[i].ranks, field) for i in ids],
    )
    logger.info(f"Correlated ranks: n={summary.n}, dimension={args.dimension}")
    write_json(summary, args.out)
    return 0
