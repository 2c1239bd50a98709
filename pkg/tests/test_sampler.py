"""
Tests for k-center greedy selection, baselines and feature helpers.
"""
from itertools import combinations

import numpy as np
import pytest

from tablesmith.core.errors import ConfigError, DegenerateInput
from tablesmith.schemas.sampler import DistanceMetric, Strategy
from tablesmith.services.sampler_service import (
    SelectionProblem,
    baseline_select,
    covering_radius,
    k_center_greedy,
    load_features,
    pool_embedding,
    pool_features,
    standardize,
    structural_features,
)
from tablesmith.services.table_model import build_record, grid_from_schema
from tests.conftest import complex_schema

LINE = np.array([[0.0], [1.0], [2.0], [10.0]])


def test_line_instance():
    """Farthest point first, then the one farthest from both centers."""
    assert k_center_greedy(SelectionProblem(points=LINE, s0=[0], b=1)) == [3]
    assert k_center_greedy(SelectionProblem(points=LINE, s0=[0], b=2)) == [3, 2]
    assert k_center_greedy(SelectionProblem(points=LINE, s0=[0], b=0)) == []


def test_empty_initial_set_starts_near_centroid():
    # centroid 3.25 is closest to 2.0
    assert k_center_greedy(SelectionProblem(points=LINE, b=2)) == [2, 3]


def test_ties_go_to_lowest_index():
    points = np.array([[0.0], [-1.0], [1.0]])
    assert k_center_greedy(SelectionProblem(points=points, s0=[0], b=1)) == [1]


def test_duplicates_are_never_reselected():
    points = np.zeros((4, 2))
    picked = k_center_greedy(SelectionProblem(points=points, s0=[0], b=3))
    assert sorted(picked) == [1, 2, 3]


def test_greedy_radius_within_twice_optimum():
    """Exhaustive optimum over every center set of the same size."""
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(2, 13))
        b = int(rng.integers(1, min(4, n) + 1))
        points = rng.normal(size=(n, 2))
        picked = k_center_greedy(SelectionProblem(points=points, b=b))
        assert len(set(picked)) == b
        optimum = min(covering_radius(points, centers) for centers in combinations(range(n), b))
        assert covering_radius(points, picked) <= 2 * optimum + 1e-9


def test_selection_is_deterministic():
    points = np.random.default_rng(1).normal(size=(50, 3))
    runs = {tuple(k_center_greedy(SelectionProblem(points=points, s0=[4, 9], b=6))) for _ in range(10)}
    assert len(runs) == 1


def test_cosine_metric():
    points = np.array([[1.0, 0.0], [2.0, 0.1], [0.0, 1.0]])
    picked = k_center_greedy(SelectionProblem(points=points, s0=[0], b=1, metric=DistanceMetric.cosine))
    assert picked == [2]


def test_problem_validation():
    with pytest.raises(ConfigError):
        SelectionProblem(points=LINE, s0=[7], b=1)
    with pytest.raises(ConfigError):
        SelectionProblem(points=LINE, s0=[0], b=4)


def test_baselines():
    scores = [0.1, 0.9, 0.5, 0.9]
    assert baseline_select(Strategy.ppl, 4, scores, 2) == [1, 3]
    assert baseline_select(Strategy.hard, 4, scores, 10) == [1, 3, 2, 0]
    assert baseline_select(Strategy.random, 10, None, 4, seed=3) == baseline_select(Strategy.random, 10, None, 4, seed=3)
    assert len(set(baseline_select(Strategy.random, 10, None, 4, seed=3))) == 4
    with pytest.raises(ConfigError):
        baseline_select(Strategy.ppl, 4, None, 2)


def test_pool_embedding():
    embedding = pool_embedding([[1.0, 4.0], [3.0, 0.0]])
    assert embedding.tolist() == [3.0, 4.0, 2.0, 2.0]
    with pytest.raises(DegenerateInput):
        pool_embedding(np.zeros((0, 3)))
    with pytest.raises(DegenerateInput):
        pool_embedding([[1.0, float("nan")]])


def test_structural_features_and_standardization():
    record = build_record("t", grid_from_schema(complex_schema()))
    features = structural_features(record)
    assert features[:3].tolist() == [4.0, 4.0, 1.0]
    assert features[3] == pytest.approx(4 / 16)
    matrix = pool_features([record, record])
    assert np.allclose(matrix, 0.0)
    assert np.allclose(standardize(np.array([[1.0], [3.0]])).ravel(), [-1.0, 1.0])


def test_load_features(tmp_path):
    path = tmp_path / "emb.npy"
    np.save(path, np.ones((3, 2)))
    assert load_features(str(path), expected_rows=3).shape == (3, 2)
    with pytest.raises(ConfigError):
        load_features(str(path), expected_rows=4)
    with pytest.raises(ConfigError):
        load_features(str(tmp_path / "missing.npy"))
