"""
Pydantic schemas for validation and ranking.
"""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, computed_field, model_validator


class DefectKind(str, Enum):
    RaggedRows = "RaggedRows"
    OverlappingSpans = "OverlappingSpans"
    SpanOutOfBounds = "SpanOutOfBounds"
    DisallowedTag = "DisallowedTag"
    EmptyStructure = "EmptyStructure"
    MalformedMarkup = "MalformedMarkup"
    MissingTable = "MissingTable"


class Defect(BaseModel):
    kind: DefectKind
    location: Dict[str, Any] = Field(default_factory=dict, description="Row/column indices or source position")
    detail: str = ""


class ValidationReport(BaseModel):
    """Result of a structural check; valid exactly when no defect was found."""
    valid: bool
    defects: List[Defect] = Field(default_factory=list)

    @model_validator(mode="after")
    def _valid_iff_no_defects(self) -> "ValidationReport":
        if self.valid != (not self.defects):
            raise ValueError("valid must be true exactly when defects is empty")
        return self

    def kinds(self) -> List[DefectKind]:
        return [d.kind for d in self.defects]


class RankReport(BaseModel):
    """Filling-checker ranks on a 1-5 scale; overall is the lowest dimension."""
    structure_rank: int = Field(..., ge=1, le=5)
    topic_rank: int = Field(..., ge=1, le=5)
    semantic_rank: int = Field(..., ge=1, le=5)

    @computed_field
    @property
    def overall(self) -> int:
        return min(self.structure_rank, self.topic_rank, self.semantic_rank)


class RankedRecord(BaseModel):
    """One line of a ranks manifest."""
    id: str
    topic: str = ""
    ranks: RankReport
    defects: List[Defect] = Field(default_factory=list)


class CorrelationSummary(BaseModel):
    spearman: float
    pearson: float
    kendall_tau: float
    n: int


class DisturbanceDimension(BaseModel):
    """Correlation between injected corruption severity and checker ranks.

    Each coefficient is reported as mean and half the standard deviation over
    repetitions.
    """
    perturbation: str
    spearman_mean: float
    spearman_half_std: float
    pearson_mean: float
    pearson_half_std: float
    kendall_mean: float
    kendall_half_std: float
    repetitions: int
    strictly_lowered_ratio: Optional[float] = Field(
        None, description="Share of corrupted items whose rank fell below the clean rank"
    )


class DisturbanceReport(BaseModel):
    records: int
    dimensions: List[DisturbanceDimension]
