"""
disturb: how closely checker ranks follow injected corruption.
"""
import argparse
import logging

from tablesmith.commands.common import write_json
from tablesmith.llm.factory import build_ranker
from tablesmith.schemas.pipeline import PipelineConfig, RankerKind
from tablesmith.services.disturbance_service import DEFAULT_LEVELS, RANK_FIELDS, disturbance_study
from tablesmith.services.manifest_service import load_manifest

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("disturb", help="Correlate corruption severity with checker ranks")
    parser.add_argument("manifest")
    parser.add_argument("--perturb", action="append", choices=sorted(RANK_FIELDS),
                        help="Perturbation to study; repeatable (default: all)")
    parser.add_argument("--repetitions", type=int, default=3)
    parser.add_argument("--ranker", choices=[k.value for k in RankerKind])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="Report JSON (default: stdout)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    records = load_manifest(args.manifest)
    kind = RankerKind(args.ranker) if args.ranker else config.checker.ranker
    ranker = build_ranker(kind, config.provider, config.paths.transcript_dir)
    seed = args.seed if args.seed is not None else (config.seed or 0)
    report = disturbance_study(
        records,
        args.perturb or sorted(RANK_FIELDS),
        ranker,
        repetitions=args.repetitions,
        levels=DEFAULT_LEVELS,
        seed=seed,
        workers=workers,
    )
    write_json(report, args.out)
    return 0
