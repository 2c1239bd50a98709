"""
sample: pick a labeling budget from a pool with CoreSet or a baseline.
"""
import argparse
import logging

from tablesmith.commands.common import feature_matrix, load_scores
from tablesmith.core.errors import ConfigError
from tablesmith.schemas.pipeline import PipelineConfig
from tablesmith.schemas.sampler import DistanceMetric, Strategy
from tablesmith.services.manifest_service import load_manifest, write_manifest
from tablesmith.services.sampler_service import SelectionProblem, baseline_select, k_center_greedy

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("sample", help="Select records to annotate from a pool")
    parser.add_argument("--pool", required=True)
    parser.add_argument("--features", help="'structural' or 'file:<path.npy>'")
    parser.add_argument("--strategy", choices=[s.value for s in Strategy])
    parser.add_argument("--metric", choices=[m.value for m in DistanceMetric])
    parser.add_argument("--budget", type=int)
    parser.add_argument("--scores", help="JSON id -> score, for ppl and hard")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", required=True)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    sampler = config.sampler
    strategy = Strategy(args.strategy or sampler.strategy)
    metric = DistanceMetric(args.metric or sampler.metric)
    budget = args.budget if args.budget is not None else sampler.budget
    seed = args.seed if args.seed is not None else (config.seed or 0)

    records = load_manifest(args.pool)
    if budget > len(records):
        raise ConfigError(f"budget {budget} exceeds the pool of {len(records)} records")

    if strategy == Strategy.coreset:
        features = feature_matrix(records, args.features or sampler.features)
        picked = k_center_greedy(SelectionProblem(points=features, b=budget, metric=metric))
    else:
        scores = load_scores(args.scores)
        vector = None
        if scores is not None:
            missing = [r.id for r in records if r.id not in scores]
            if missing:
                raise ConfigError(f"score file lacks {len(missing)} pool ids, e.g. {missing[0]}")
            vector = [scores[r.id] for r in records]
        picked = baseline_select(strategy, len(records), vector, budget, seed)

    write_manifest([records[i] for i in picked], args.out)
    logger.info(f"Selected samples: strategy={strategy.value}, budget={budget}, pool={len(records)}")
    return 0
