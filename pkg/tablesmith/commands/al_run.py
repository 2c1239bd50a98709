"""
al-run: simulated active learning loop writing a learning curve CSV.
"""
import argparse
import csv
import json
import logging
from pathlib import Path

import numpy as np

from tablesmith.commands.common import feature_matrix, load_scores, validated
from tablesmith.core.errors import ConfigError
from tablesmith.schemas.pipeline import PipelineConfig
from tablesmith.schemas.sampler import ALRunConfig
from tablesmith.services.al_loop_service import (
    ActiveLearningState,
    NearestNeighborTrainer,
    OracleAnnotator,
    run_al_loop,
    structure_label,
)
from tablesmith.services.manifest_service import load_manifest
from tablesmith.services.sampler_service import pool_features

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ("round", "labeled_count", "score")


def register(subparsers) -> None:
    parser = subparsers.add_parser("al-run", help="Run a simulated active learning loop")
    parser.add_argument("--config", dest="al_config", required=True, help="Loop config JSON")
    parser.add_argument("--out", help="Curve CSV (overrides the config's 'out')")
    parser.set_defaults(handler=run)


def load_al_config(path: str) -> ALRunConfig:
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"al-run config not found: {path}", path=str(path))
    try:
        raw = json.loads(config_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"al-run config {path} is not valid JSON: {e}", path=str(path))
    return validated(ALRunConfig, raw, f"al-run config {path}")


def run(args: argparse.Namespace, config: PipelineConfig, workers: int) -> int:
    al = load_al_config(args.al_config)
    pool = load_manifest(al.pool)
    test = load_manifest(al.test) if al.test else pool

    if al.features == "structural":
        # Pool and test share one standardization
        matrix = pool_features(list(pool) + (list(test) if al.test else []))
        pool_x = matrix[:len(pool)]
        test_x = matrix[len(pool):] if al.test else pool_x
    else:
        if al.test:
            raise ConfigError("file features cover the pool only; drop 'test' or use structural features")
        pool_x = feature_matrix(pool, al.features)
        test_x = pool_x

    labels = {r.id: structure_label(r) for r in pool}
    ids = [r.id for r in pool]
    initial = list(al.initial_ids)
    unknown = [i for i in initial if i not in labels]
    if unknown:
        raise ConfigError(f"initial ids not in the pool: {unknown[:5]}")
    if not initial and al.initial_count:
        if al.initial_count > len(ids):
            raise ConfigError(f"initial_count {al.initial_count} exceeds the pool of {len(ids)}")
        rng = np.random.default_rng(al.seed)
        initial = [ids[i] for i in sorted(rng.choice(len(ids), size=al.initial_count, replace=False))]

    chosen = set(initial)
    state = ActiveLearningState(
        ids=ids,
        features=pool_x,
        unlabeled=[i for i in ids if i not in chosen],
        labeled={i: labels[i] for i in initial},
        budget=al.budget,
    )
    scores = load_scores(al.scores)
    result = run_al_loop(
        state,
        al.strategy,
        al.step_size,
        NearestNeighborTrainer(al.metric),
        OracleAnnotator(labels),
        test_x,
        [structure_label(r) for r in test],
        metric=al.metric,
        scores=scores,
        seed=al.seed,
    )

    out = Path(args.out or al.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(CURVE_COLUMNS)
        for point in result.curve.points:
            writer.writerow((point.round, point.labeled_count, f"{point.score:.6f}"))
    logger.info(f"Learning curve written: path={out}, rounds={len(result.curve.points) - 1}")
    if result.curve.error:
        logger.error(f"Loop stopped early: {result.curve.error}")
        return 1
    return 0
