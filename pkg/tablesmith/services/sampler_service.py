"""
Sample selection: embedding pooling, structural features, greedy k-center
selection and baseline strategies.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from sklearn.metrics import pairwise_distances

from tablesmith.core.errors import ConfigError, DegenerateInput
from tablesmith.schemas.sampler import DistanceMetric, Strategy
from tablesmith.schemas.table import AnnotationRecord, HeaderLayout, LineStyle

logger = logging.getLogger(__name__)

HEADER_LAYOUTS = list(HeaderLayout)
LINE_STYLES = list(LineStyle)


def pool_embedding(patches) -> np.ndarray:
    """Concatenate per-dimension max and mean over patches."""
    matrix = np.asarray(patches, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise DegenerateInput(f"patch matrix must be non-empty 2-D, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise DegenerateInput("patch matrix holds non-finite values")
    return np.concatenate([matrix.max(axis=0), matrix.mean(axis=0)])


def structural_features(record: AnnotationRecord) -> np.ndarray:
    """Raw (unstandardized) structure and style descriptor of one record."""
    cells = record.cells
    n_rows = max((c.row_start + c.rowspan for c in cells), default=0)
    n_cols = max((c.col_start + c.colspan for c in cells), default=0)
    spanning = [c for c in cells if c.rowspan > 1 or c.colspan > 1]
    area = max(n_rows * n_cols, 1)
    span_area = sum(c.rowspan * c.colspan for c in spanning) / area
    lengths = np.array([len(c.content) for c in cells] or [0], dtype=float)

    layout = np.zeros(len(HEADER_LAYOUTS))
    layout[HEADER_LAYOUTS.index(record.labels.header_layout)] = 1.0
    line = np.zeros(len(LINE_STYLES))
    line[LINE_STYLES.index(record.labels.line_style)] = 1.0

    return np.concatenate([
        [n_rows, n_cols, len(spanning), span_area],
        layout,
        line,
        [float(record.labels.is_colored)],
        [lengths.mean(), lengths.std(), lengths.max()],
    ])


def standardize(matrix: np.ndarray) -> np.ndarray:
    """Zero mean, unit variance per column; constant columns become 0."""
    matrix = np.asarray(matrix, dtype=float)
    std = matrix.std(axis=0)
    std[std == 0] = 1.0
    return (matrix - matrix.mean(axis=0)) / std


def pool_features(records: Sequence[AnnotationRecord]) -> np.ndarray:
    if not records:
        return np.zeros((0, 0))
    return standardize(np.stack([structural_features(r) for r in records]))


def load_features(path: str, expected_rows: Optional[int] = None) -> np.ndarray:
    """Read an embedding matrix saved with ``numpy.save``."""
    feature_path = Path(path)
    if not feature_path.is_file():
        raise ConfigError(f"feature file not found: {path}", path=str(path))
    matrix = np.load(feature_path, allow_pickle=False)
    if matrix.ndim != 2:
        raise ConfigError(f"feature file {path} must hold a 2-D matrix, got shape {matrix.shape}")
    if expected_rows is not None and matrix.shape[0] != expected_rows:
        raise ConfigError(f"feature file {path} has {matrix.shape[0]} rows, pool has {expected_rows}")
    return matrix.astype(float)


@dataclass
class SelectionProblem:
    points: np.ndarray
    s0: List[int] = field(default_factory=list)
    b: int = 0
    metric: DistanceMetric = DistanceMetric.euclidean

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        n = len(self.points)
        if any(not 0 <= i < n for i in self.s0):
            raise ConfigError(f"initial indices must lie in 0..{n - 1}")
        if self.b < 0 or self.b > n - len(set(self.s0)):
            raise ConfigError(f"budget {self.b} exceeds the {n - len(set(self.s0))} unlabeled points")


class KCenterGreedy:
    """Farthest-first traversal keeping each point's distance to its nearest center."""

    def __init__(self, features: np.ndarray, metric: DistanceMetric = DistanceMetric.euclidean):
        self.features = features
        self.metric = DistanceMetric(metric).value
        self.min_distances: Optional[np.ndarray] = None

    def update_distances(self, centers: List[int]) -> None:
        dist = pairwise_distances(self.features, self.features[centers], metric=self.metric).min(axis=1)
        if self.min_distances is None:
            self.min_distances = dist
        else:
            self.min_distances = np.minimum(self.min_distances, dist)
        # Centers never win the argmax, even against duplicates at distance 0
        self.min_distances[centers] = -1.0

    def first_center(self) -> int:
        """Index closest to the pool centroid."""
        centroid = self.features.mean(axis=0, keepdims=True)
        return int(np.argmin(pairwise_distances(self.features, centroid, metric=self.metric).ravel()))

    def select_batch(self, already_selected: Sequence[int], budget: int) -> List[int]:
        self.min_distances = None
        if already_selected:
            self.update_distances(list(already_selected))
        batch: List[int] = []
        for _ in range(budget):
            index = self.first_center() if self.min_distances is None else int(np.argmax(self.min_distances))
            self.update_distances([index])
            batch.append(index)
        return batch


def k_center_greedy(problem: SelectionProblem) -> List[int]:
    """Greedy picks in selection order, initial set excluded; ties go to the lowest index."""
    if problem.b == 0:
        return []
    return KCenterGreedy(problem.points, problem.metric).select_batch(sorted(set(problem.s0)), problem.b)


def covering_radius(points: np.ndarray, centers: Sequence[int], metric: DistanceMetric = DistanceMetric.euclidean) -> float:
    """Largest distance from any point to its nearest center."""
    points = np.asarray(points, dtype=float)
    if not len(centers):
        return float("inf")
    return float(pairwise_distances(points, points[list(centers)], metric=DistanceMetric(metric).value).min(axis=1).max())


def baseline_select(
    strategy: Strategy,
    pool: Union[int, Sequence[int]],
    scores: Optional[Sequence[float]],
    b: int,
    seed: int = 0,
) -> List[int]:
    """
    Random, perplexity or hard-example selection over candidate indices.

    ``scores`` is indexed by pool position and must be given for ppl/hard.
    Higher scores are picked first; ties go to the lower index.
    """
    candidates = list(range(pool)) if isinstance(pool, int) else list(pool)
    b = min(b, len(candidates))
    strategy = Strategy(strategy)
    if strategy == Strategy.random:
        rng = np.random.default_rng(seed)
        return [int(i) for i in rng.choice(candidates, size=b, replace=False)] if b else []
    if strategy in (Strategy.ppl, Strategy.hard):
        if scores is None:
            raise ConfigError(f"strategy {strategy.value} needs a per-sample score vector")
        ordered = sorted(candidates, key=lambda i: (-float(scores[i]), i))
        return ordered[:b]
    raise ConfigError(f"baseline_select does not handle strategy {strategy.value}")
