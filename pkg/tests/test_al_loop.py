"""
Tests for the active learning loop.
"""
import numpy as np
import pytest

from tablesmith.schemas.sampler import Strategy
from tablesmith.services.al_loop_service import (
    ActiveLearningState,
    Annotator,
    NearestNeighborTrainer,
    OracleAnnotator,
    run_al_loop,
)

CENTERS = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])


def _clusters(seed, n=200):
    rng = np.random.default_rng(seed)
    assignment = np.arange(n) % 3
    points = CENTERS[assignment] + rng.normal(scale=0.5, size=(n, 2))
    ids = [f"p{i}" for i in range(n)]
    return ids, points, assignment


def _state(ids, points, assignment, initial, budget):
    labels = {sample_id: int(c) for sample_id, c in zip(ids, assignment)}
    labeled = {ids[i]: labels[ids[i]] for i in initial}
    unlabeled = [sample_id for sample_id in ids if sample_id not in labeled]
    return ActiveLearningState(ids=ids, features=points, unlabeled=unlabeled, labeled=labeled, budget=budget), labels


def _covers_all_clusters(strategy, seed):
    ids, points, assignment = _clusters(seed)
    rng = np.random.default_rng(seed + 1000)
    initial = rng.choice(np.flatnonzero(assignment == 0), size=3, replace=False)
    state, labels = _state(ids, points, assignment, initial, budget=3)
    result = run_al_loop(state, strategy, 3, NearestNeighborTrainer(), OracleAnnotator(labels),
                         points, list(assignment), seed=seed)
    return len(set(result.labeled.values())) == 3


def test_coreset_covers_clusters_more_often_than_random():
    """One round of three picks from a pool seeded in a single cluster."""
    coreset = sum(_covers_all_clusters(Strategy.coreset, seed) for seed in range(100))
    random = sum(_covers_all_clusters(Strategy.random, seed) for seed in range(100))
    assert coreset >= 95
    assert coreset > random


def test_curve_records_every_round():
    ids, points, assignment = _clusters(0, n=30)
    state, labels = _state(ids, points, assignment, [0], budget=5)
    result = run_al_loop(state, Strategy.coreset, 2, NearestNeighborTrainer(), OracleAnnotator(labels),
                         points, list(assignment))
    counts = [p.labeled_count for p in result.curve.points]
    assert counts == [1, 3, 5, 6]
    assert [p.round for p in result.curve.points] == [0, 1, 2, 3]
    assert result.curve.error is None
    assert result.curve.points[-1].score == 1.0


def test_zero_budget_only_scores_initial_set():
    ids, points, assignment = _clusters(0, n=12)
    state, labels = _state(ids, points, assignment, [0, 1], budget=0)
    result = run_al_loop(state, Strategy.coreset, 1, NearestNeighborTrainer(), OracleAnnotator(labels),
                         points, list(assignment))
    assert len(result.curve.points) == 1
    assert len(result.labeled) == 2


def test_budget_beyond_pool_labels_everything():
    ids, points, assignment = _clusters(0, n=12)
    state, labels = _state(ids, points, assignment, [0], budget=50)
    result = run_al_loop(state, Strategy.random, 4, NearestNeighborTrainer(), OracleAnnotator(labels),
                         points, list(assignment))
    assert len(result.labeled) == 12
    assert state.unlabeled == []
    assert result.curve.points[-1].labeled_count == 12


def test_empty_initial_set_scores_zero_first():
    ids, points, assignment = _clusters(0, n=9)
    state, labels = _state(ids, points, assignment, [], budget=3)
    result = run_al_loop(state, Strategy.coreset, 3, NearestNeighborTrainer(), OracleAnnotator(labels),
                         points, list(assignment))
    assert result.curve.points[0].score == 0.0
    assert len(result.labeled) == 3


class FlakyAnnotator(Annotator):
    def __init__(self, labels, fail_after):
        self.labels = labels
        self.remaining = fail_after

    def annotate(self, sample_id):
        if self.remaining == 0:
            raise RuntimeError("annotator offline")
        self.remaining -= 1
        return self.labels[sample_id]


def test_annotator_failure_returns_partial_curve():
    ids, points, assignment = _clusters(0, n=20)
    state, labels = _state(ids, points, assignment, [0], budget=6)
    result = run_al_loop(state, Strategy.coreset, 2, NearestNeighborTrainer(), FlakyAnnotator(labels, 3),
                         points, list(assignment))
    assert result.curve.error is not None and "annotator failed" in result.curve.error
    assert len(result.curve.points) == 2
    assert len(result.labeled) == 4


def test_state_rejects_overlap():
    with pytest.raises(ValueError):
        ActiveLearningState(ids=["a"], features=np.zeros((1, 1)), unlabeled=["a"], labeled={"a": 0})
