"""
Pydantic schemas for TEDS scoring reports.
"""
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class TedsMode(str, Enum):
    full = "full"
    structure = "structure"


class SubsetMeans(BaseModel):
    """Mean score of the records whose label is true / false."""
    true: Optional[float] = None
    false: Optional[float] = None
    n_true: int = 0
    n_false: int = 0


class TedsReport(BaseModel):
    mode: TedsMode
    merge_th_td: bool = False
    n: int
    mean: float
    subsets: Dict[str, SubsetMeans] = Field(default_factory=dict, description="is_simple / is_colored / is_lined")
    invalid: int = 0
    invalid_ids: List[str] = Field(default_factory=list)
    scores: Dict[str, float] = Field(default_factory=dict)
