"""
Pydantic schemas for batch generation requests and reports.
"""
from enum import Enum
from itertools import product
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from tablesmith.schemas.table import HeaderLayout, Language


class Complexity(str, Enum):
    simple = "simple"
    complex = "complex"
    mixed = "mixed"


class TriState(str, Enum):
    yes = "yes"
    no = "no"
    any = "any"

    def resolve(self) -> Optional[bool]:
        if self == TriState.any:
            return None
        return self == TriState.yes


# Row/column defaults are a local choice; the source data distribution is unknown
DEFAULT_ROW_RANGE = (2, 12)
DEFAULT_COL_RANGE = (2, 8)
DEFAULT_LAYOUT_WEIGHTS = {
    HeaderLayout.horizontal: 1.0,
    HeaderLayout.vertical: 1.0,
    HeaderLayout.matrix: 1.0,
}


class GenerationRequest(BaseModel):
    count: int = Field(1, ge=1)
    complexity: Complexity = Complexity.mixed
    colored: TriState = TriState.any
    lined: TriState = TriState.any
    row_range: Tuple[int, int] = DEFAULT_ROW_RANGE
    col_range: Tuple[int, int] = DEFAULT_COL_RANGE
    header_layout_weights: Dict[HeaderLayout, float] = Field(default_factory=lambda: dict(DEFAULT_LAYOUT_WEIGHTS))
    max_header_depth: int = Field(2, ge=1)
    domain: str = "telecommunication"
    language: Language = Language.en
    seed: int = Field(0, ge=0, lt=2**64)

    @field_validator("row_range", "col_range")
    @classmethod
    def _non_empty_range(cls, value: Tuple[int, int]) -> Tuple[int, int]:
        low, high = value
        if low < 1 or high < low:
            raise ValueError(f"range {list(value)} must satisfy 1 <= low <= high")
        return value

    @field_validator("header_layout_weights")
    @classmethod
    def _check_weights(cls, value: Dict[HeaderLayout, float]) -> Dict[HeaderLayout, float]:
        if any(w < 0 for w in value.values()) or sum(value.values()) <= 0:
            raise ValueError("header layout weights must be nonnegative with a positive sum")
        return value

    @property
    def unconstrained(self) -> bool:
        """True when complexity, colour and lines are all left open."""
        return (
            self.complexity == Complexity.mixed
            and self.colored == TriState.any
            and self.lined == TriState.any
        )


class AttributeCombo(BaseModel):
    """One of the eight (simple, colored, lined) label combinations."""
    model_config = ConfigDict(frozen=True)

    simple: bool
    colored: bool
    lined: bool

    @classmethod
    def all(cls) -> List["AttributeCombo"]:
        return [cls(simple=s, colored=c, lined=l) for s, c, l in product((True, False), repeat=3)]

    @property
    def key(self) -> str:
        return f"simple={int(self.simple)},colored={int(self.colored)},lined={int(self.lined)}"


class ItemStatus(BaseModel):
    index: int
    id: Optional[str] = None
    status: str = Field(..., description="ok | failed")
    iterations: int = Field(1, ge=0, description="Fill attempts, 1 when the first attempt passed")
    combo: Optional[AttributeCombo] = None
    error: Optional[str] = None


class BatchReport(BaseModel):
    """Summary of one generate run; requested = produced + failed."""
    requested: int
    produced: int
    failed: int
    items: List[ItemStatus] = Field(default_factory=list)
    iteration_histogram: Dict[int, int] = Field(default_factory=dict)
    mean_iterations: float = 0.0
    duration_seconds: float = 0.0

    @model_validator(mode="after")
    def _counts_add_up(self) -> "BatchReport":
        if self.requested != self.produced + self.failed:
            raise ValueError("requested must equal produced + failed")
        return self
