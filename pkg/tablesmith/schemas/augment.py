"""
Pydantic schemas for structural and visual table transforms.
"""
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TransformOp(str, Enum):
    copy = "copy"
    delete = "delete"
    swap = "swap"
    alter = "alter"


class Axis(str, Enum):
    row = "row"
    column = "column"
    block = "block"


class Transform(BaseModel):
    """
    One operation on a table.

    ``indices`` holds one position for copy/delete/alter, two for swap. For
    block transforms it holds half-open ranges flattened as
    ``[start, end]`` (copy/delete/alter) or ``[start_a, end_a, start_b, end_b]``
    (swap), along ``block_axis``.
    """
    model_config = ConfigDict(frozen=True)

    op: TransformOp
    axis: Axis = Axis.row
    indices: Tuple[int, ...]
    payload: Optional[str] = Field(None, pattern=r"^#[0-9a-fA-F]{6}$", description="Row color, alter only")
    block_axis: Axis = Field(Axis.row, description="Direction of blocks when axis=block")

    @model_validator(mode="after")
    def _check_shape(self) -> "Transform":
        if any(i < 0 for i in self.indices):
            raise ValueError("indices must be non-negative")
        if self.block_axis == Axis.block:
            raise ValueError("block_axis must be row or column")
        expected = {TransformOp.swap: 2}.get(self.op, 1)
        if self.axis == Axis.block:
            expected *= 2
        if len(self.indices) != expected:
            raise ValueError(f"{self.op.value} on {self.axis.value} takes {expected} indices")
        if self.op == TransformOp.alter and not self.payload:
            raise ValueError("alter needs a color payload")
        if self.op != TransformOp.alter and self.payload:
            raise ValueError("only alter carries a payload")
        return self


class SpanRegionMap(BaseModel):
    """Rows and columns crossed in their interior by a merged cell."""
    rows_crossed: List[bool]
    cols_crossed: List[bool]
    rectangles: List[Tuple[int, int, int, int]] = Field(
        default_factory=list, description="(row_start, col_start, row_end, col_end), half-open"
    )
