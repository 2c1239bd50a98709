"""
Pydantic schemas for sample selection and the active learning loop.
"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class Strategy(str, Enum):
    coreset = "coreset"
    random = "random"
    ppl = "ppl"
    hard = "hard"


class DistanceMetric(str, Enum):
    euclidean = "euclidean"
    cosine = "cosine"


class CurvePoint(BaseModel):
    round: int
    labeled_count: int
    score: float


class ALRunConfig(BaseModel):
    """Contents of the ``al-run --config`` file."""
    pool: str = Field(..., description="Manifest of unlabeled candidates, gold labels included")
    test: Optional[str] = Field(None, description="Held-out manifest; defaults to the pool")
    initial_ids: List[str] = Field(default_factory=list)
    initial_count: int = Field(0, ge=0, description="Random initial labels when initial_ids is empty")
    strategy: Strategy = Strategy.coreset
    budget: int = Field(..., ge=0)
    step_size: int = Field(1, ge=1)
    metric: DistanceMetric = DistanceMetric.euclidean
    features: str = Field("structural", description="'structural' or 'file:<path.npy>'")
    scores: Optional[str] = Field(None, description="JSON file id -> score for ppl/hard")
    seed: int = 0
    out: str = "curve.csv"


class LearningCurve(BaseModel):
    points: List[CurvePoint] = Field(default_factory=list)
    error: Optional[str] = None
