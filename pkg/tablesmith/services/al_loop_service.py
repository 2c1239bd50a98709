"""
Active learning loop: query, annotate, train, evaluate until the budget is spent.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sklearn.neighbors import KNeighborsClassifier

from tablesmith.schemas.sampler import CurvePoint, DistanceMetric, LearningCurve, Strategy
from tablesmith.schemas.table import AnnotationRecord
from tablesmith.services.sampler_service import SelectionProblem, baseline_select, k_center_greedy

logger = logging.getLogger(__name__)


def structure_label(record: AnnotationRecord) -> str:
    """Label predicted by the surrogate trainer: simplicity, line style, header layout."""
    labels = record.labels
    return f"{'simple' if labels.is_simple else 'complex'}|{labels.line_style.value}|{labels.header_layout.value}"


class TrainerProvider(ABC):
    @abstractmethod
    def train(self, features: np.ndarray, labels: Sequence[Hashable]) -> Any:
        """Fit on the labeled set; deterministic given inputs."""

    @abstractmethod
    def evaluate(self, model: Any, features: np.ndarray, labels: Sequence[Hashable]) -> float:
        pass


class NearestNeighborTrainer(TrainerProvider):
    """1-nearest-neighbour classifier; accuracy is the curve score."""

    def __init__(self, metric: DistanceMetric = DistanceMetric.euclidean):
        self.metric = DistanceMetric(metric).value

    def train(self, features: np.ndarray, labels: Sequence[Hashable]) -> Optional[KNeighborsClassifier]:
        if len(labels) == 0:
            return None
        model = KNeighborsClassifier(n_neighbors=1, metric=self.metric)
        model.fit(features, list(labels))
        return model

    def evaluate(self, model, features: np.ndarray, labels: Sequence[Hashable]) -> float:
        if model is None or len(labels) == 0:
            return 0.0
        predictions = model.predict(features)
        return float(np.mean([p == y for p, y in zip(predictions, labels)]))


class Annotator(ABC):
    @abstractmethod
    def annotate(self, sample_id: str) -> Hashable:
        pass


class OracleAnnotator(Annotator):
    """Reads gold labels; unknown ids fail like an unavailable annotator."""

    def __init__(self, labels: Mapping[str, Hashable]):
        self.labels = dict(labels)

    def annotate(self, sample_id: str) -> Hashable:
        if sample_id not in self.labels:
            raise KeyError(f"no gold label for sample {sample_id}")
        return self.labels[sample_id]


@dataclass
class ActiveLearningState:
    """
    Pool bookkeeping. ``ids`` and ``features`` are aligned; ``unlabeled`` and
    ``labeled`` partition the ids that take part in the loop.
    """
    ids: List[str]
    features: np.ndarray
    unlabeled: List[str]
    labeled: Dict[str, Hashable] = field(default_factory=dict)
    budget: int = 0

    def __post_init__(self):
        overlap = set(self.unlabeled) & set(self.labeled)
        if overlap:
            raise ValueError(f"ids both labeled and unlabeled: {sorted(overlap)[:5]}")
        self._index = {sample_id: i for i, sample_id in enumerate(self.ids)}

    def index_of(self, sample_id: str) -> int:
        return self._index[sample_id]

    def labeled_arrays(self) -> Tuple[np.ndarray, List[Hashable]]:
        ids = list(self.labeled)
        rows = [self.index_of(i) for i in ids]
        return self.features[rows], [self.labeled[i] for i in ids]


@dataclass
class ALResult:
    model: Any
    labeled: Dict[str, Hashable]
    curve: LearningCurve


def query(
    state: ActiveLearningState,
    strategy: Strategy,
    count: int,
    metric: DistanceMetric = DistanceMetric.euclidean,
    scores: Optional[Mapping[str, float]] = None,
    seed: int = 0,
) -> List[str]:
    """Pick ``count`` unlabeled ids with ``strategy``."""
    strategy = Strategy(strategy)
    if strategy == Strategy.coreset:
        # Only pool members in the loop count as points
        members = [state.index_of(i) for i in state.labeled] + [state.index_of(i) for i in state.unlabeled]
        points = state.features[members]
        s0 = list(range(len(state.labeled)))
        picked = k_center_greedy(SelectionProblem(points=points, s0=s0, b=count, metric=metric))
        return [state.ids[members[p]] for p in picked]

    candidate_scores = [scores[i] for i in state.unlabeled] if scores is not None else None
    picked = baseline_select(strategy, len(state.unlabeled), candidate_scores, count, seed)
    return [state.unlabeled[p] for p in picked]


def run_al_loop(
    state: ActiveLearningState,
    strategy: Strategy,
    step_size: int,
    trainer: TrainerProvider,
    annotator: Annotator,
    test_features: np.ndarray,
    test_labels: Sequence[Hashable],
    metric: DistanceMetric = DistanceMetric.euclidean,
    scores: Optional[Mapping[str, float]] = None,
    seed: int = 0,
) -> ALResult:
    """
    Query, annotate, train and evaluate until ``state.budget`` new labels
    were added or the pool is empty.

    An annotator failure ends the loop; the curve so far is returned with
    ``error`` set.
    """
    initial = len(state.labeled)
    curve = LearningCurve()

    features, labels = state.labeled_arrays()
    model = trainer.train(features, labels)
    curve.points.append(CurvePoint(round=0, labeled_count=initial,
                                   score=trainer.evaluate(model, test_features, test_labels)))

    round_no = 0
    while len(state.labeled) - initial < state.budget and state.unlabeled:
        round_no += 1
        count = min(step_size, state.budget - (len(state.labeled) - initial), len(state.unlabeled))
        picked = query(state, strategy, count, metric, scores, seed + round_no)

        for sample_id in picked:
            try:
                label = annotator.annotate(sample_id)
            except Exception as e:
                logger.error(f"Annotator failed, stopping loop: sample_id={sample_id}, error={e}")
                curve.error = f"annotator failed on {sample_id}: {e}"
                return ALResult(model=model, labeled=state.labeled, curve=curve)
            state.unlabeled.remove(sample_id)
            state.labeled[sample_id] = label

        features, labels = state.labeled_arrays()
        model = trainer.train(features, labels)
        score = trainer.evaluate(model, test_features, test_labels)
        curve.points.append(CurvePoint(round=round_no, labeled_count=len(state.labeled), score=score))
        logger.info(f"AL round done: round={round_no}, labeled={len(state.labeled)}, score={score:.4f}")

    return ALResult(model=model, labeled=state.labeled, curve=curve)
