"""
Pydantic schemas for tables, styles and annotation records.
"""
import re
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

DEFAULT_FONT_COLOR = "#000000"
DEFAULT_BORDER_COLOR = "#000000"
HEX_COLOR_PATTERN = r"^#[0-9a-fA-F]{6}$"


class HeaderLayout(str, Enum):
    """Where header cells live: top band (vertical), left band (horizontal) or both."""
    horizontal = "horizontal"
    vertical = "vertical"
    matrix = "matrix"
    none = "none"


class LineStyle(str, Enum):
    fully_lined = "fully_lined"
    horizontally_lineless = "horizontally_lineless"
    vertically_lineless = "vertically_lineless"
    lined_headers_only = "lined_headers_only"
    lineless = "lineless"


class Language(str, Enum):
    zh = "zh"
    en = "en"


class StyleSpec(BaseModel):
    """Visual style of a rendered table.

    ``is_colored`` and ``is_lined`` are derived, never set directly.
    """
    model_config = ConfigDict(frozen=True)

    line_style: LineStyle = Field(LineStyle.fully_lined, description="Border line pattern")
    border_thickness: int = Field(1, ge=1, le=4, description="Border width in px")
    font_color: str = Field(DEFAULT_FONT_COLOR, pattern=HEX_COLOR_PATTERN)
    border_color: str = Field(DEFAULT_BORDER_COLOR, pattern=HEX_COLOR_PATTERN)
    header_background: Optional[str] = Field(None, pattern=HEX_COLOR_PATTERN)
    background_palette: Tuple[str, ...] = Field(default=(), description="Body background colors")
    zebra: bool = Field(False, description="Alternate body rows between the first two palette colors")
    font_family: str = "Arial, sans-serif"

    @field_validator("font_color", "border_color", "header_background")
    @classmethod
    def _lower_hex(cls, value: Optional[str]) -> Optional[str]:
        return value.lower() if value else value

    @field_validator("background_palette")
    @classmethod
    def _check_palette(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        for color in value:
            if not re.match(HEX_COLOR_PATTERN, color):
                raise ValueError(f"invalid palette color: {color}")
        return tuple(c.lower() for c in value)

    @model_validator(mode="after")
    def _zebra_needs_palette(self) -> "StyleSpec":
        if self.zebra and len(self.background_palette) < 2:
            raise ValueError("zebra striping needs at least two palette colors")
        return self

    @computed_field
    @property
    def is_colored(self) -> bool:
        return (
            self.font_color != DEFAULT_FONT_COLOR
            or self.border_color != DEFAULT_BORDER_COLOR
            or self.header_background is not None
            or bool(self.background_palette)
        )

    @computed_field
    @property
    def is_lined(self) -> bool:
        # Tables with only horizontal or only vertical lines count as not lined
        return self.line_style == LineStyle.fully_lined


class TableLabels(BaseModel):
    """Visual and structural labels of one table."""
    model_config = ConfigDict(extra="allow")

    is_simple: bool
    is_colored: bool
    is_lined: bool
    line_style: LineStyle
    header_layout: HeaderLayout


class CellRecord(BaseModel):
    model_config = ConfigDict(extra="allow")

    content: str = ""
    row_start: int = Field(..., ge=0)
    col_start: int = Field(..., ge=0)
    rowspan: int = Field(1, ge=1)
    colspan: int = Field(1, ge=1)
    is_header: bool = False


class Provenance(BaseModel):
    """Where an augmented record came from."""
    model_config = ConfigDict(extra="allow")

    parent_id: str
    transform: Optional[dict] = Field(None, description="Applied transform, None for untransformed variants")


class AnnotationRecord(BaseModel):
    """One dataset unit; one JSON object per manifest line.

    Unknown fields are kept so older tools can rewrite newer manifests.
    """
    model_config = ConfigDict(
        extra="allow",
        json_schema_extra={
            "example": {
                "id": "tbl-7-000000",
                "html": "<html><body><table><tr><th>Plan</th></tr><tr><td>5G Max</td></tr></table></body></html>",
                "structure_tokens": ["<table>", "<tr>", "<th>", "</th>", "</tr>", "<tr>", "<td>", "</td>", "</tr>", "</table>"],
                "labels": {"is_simple": True, "is_colored": False, "is_lined": True,
                           "line_style": "fully_lined", "header_layout": "vertical"},
                "topic": "5G plans",
                "language": "en",
            }
        },
    )

    id: str
    html: str
    structure_tokens: List[str] = Field(default_factory=list)
    cells: List[CellRecord] = Field(default_factory=list)
    labels: TableLabels
    topic: str = ""
    language: Language = Language.en
    style: Optional[StyleSpec] = None
    provenance: Optional[Provenance] = None


class PredictionRecord(BaseModel):
    """Minimal record for externally produced predictions."""
    model_config = ConfigDict(extra="allow")

    id: str
    html: str
