"""
Logical table representations and conversions.

TableSchema (span matrices) -> TableGrid (occupancy) -> HTML, and back from
HTML through the strict scanner. All values are immutable.
"""
import html as html_lib
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from tablesmith.core.errors import PARSE_ERRORS, SchemaError, TableParseError
from tablesmith.schemas.checker import Defect, DefectKind
from tablesmith.schemas.table import (
    AnnotationRecord,
    CellRecord,
    HeaderLayout,
    Language,
    LineStyle,
    Provenance,
    StyleSpec,
    TableLabels,
)
from tablesmith.services.html_table_parser import scan_table

logger = logging.getLogger(__name__)


# ============================================
# Types
# ============================================

@dataclass(frozen=True)
class Cell:
    row_start: int
    col_start: int
    rowspan: int = 1
    colspan: int = 1
    is_header: bool = False
    content: str = ""

    @property
    def row_end(self) -> int:
        return self.row_start + self.rowspan

    @property
    def col_end(self) -> int:
        return self.col_start + self.colspan

    @property
    def is_spanning(self) -> bool:
        return self.rowspan > 1 or self.colspan > 1

    @property
    def rectangle(self) -> Tuple[int, int, int, int]:
        """(row_start, col_start, row_end, col_end), half-open."""
        return (self.row_start, self.col_start, self.row_end, self.col_end)

    def structure(self) -> Tuple[int, int, int, int, bool]:
        return (self.row_start, self.col_start, self.rowspan, self.colspan, self.is_header)


@dataclass(frozen=True)
class TableGrid:
    """Occupancy-resolved table: every position maps to exactly one cell."""
    n_rows: int
    n_cols: int
    cells: Tuple[Cell, ...]
    occupancy: Tuple[Tuple[int, ...], ...]
    row_colors: Tuple[Optional[str], ...] = field(default=())

    def __post_init__(self):
        if not self.row_colors:
            object.__setattr__(self, "row_colors", (None,) * self.n_rows)
        if len(self.row_colors) != self.n_rows:
            raise ValueError("row_colors must have one entry per row")
        if len(self.occupancy) != self.n_rows or any(len(row) != self.n_cols for row in self.occupancy):
            raise ValueError("occupancy shape does not match n_rows x n_cols")
        for index, cell in enumerate(self.cells):
            if cell.rowspan < 1 or cell.colspan < 1:
                raise ValueError(f"cell {index} has a non-positive span")
            if cell.row_end > self.n_rows or cell.col_end > self.n_cols:
                raise ValueError(f"cell {index} leaves the grid")
            for r in range(cell.row_start, cell.row_end):
                for c in range(cell.col_start, cell.col_end):
                    if self.occupancy[r][c] != index:
                        raise ValueError(f"occupancy at ({r},{c}) does not reference cell {index}")

    @classmethod
    def from_cells(
        cls,
        n_rows: int,
        n_cols: int,
        cells: Iterable[Cell],
        row_colors: Optional[Sequence[Optional[str]]] = None,
    ) -> "TableGrid":
        """Build a grid from anchored cells, ordering them row-major.

        Raises the matching TableParseError subclass when the cells do not
        tile the rectangle.
        """
        ordered = sorted(cells, key=lambda cell: (cell.row_start, cell.col_start))
        occupancy = [[-1] * n_cols for _ in range(n_rows)]
        for index, cell in enumerate(ordered):
            if cell.row_end > n_rows or cell.col_end > n_cols:
                raise PARSE_ERRORS["SpanOutOfBounds"](
                    f"cell at ({cell.row_start},{cell.col_start}) leaves the {n_rows}x{n_cols} grid"
                )
            for r in range(cell.row_start, cell.row_end):
                for c in range(cell.col_start, cell.col_end):
                    if occupancy[r][c] != -1:
                        raise PARSE_ERRORS["OverlappingSpans"](
                            f"cells {occupancy[r][c]} and {index} both cover ({r},{c})"
                        )
                    occupancy[r][c] = index
        for r, row in enumerate(occupancy):
            if -1 in row:
                raise PARSE_ERRORS["RaggedRows"](f"row {r} has uncovered positions")
        return cls(
            n_rows=n_rows,
            n_cols=n_cols,
            cells=tuple(ordered),
            occupancy=tuple(tuple(row) for row in occupancy),
            row_colors=tuple(row_colors) if row_colors else (),
        )

    def cell_at(self, row: int, col: int) -> Cell:
        return self.cells[self.occupancy[row][col]]

    def rows_of_cells(self) -> List[List[Cell]]:
        """Cells grouped by anchor row, in column order (document order)."""
        rows: List[List[Cell]] = [[] for _ in range(self.n_rows)]
        for cell in self.cells:
            rows[cell.row_start].append(cell)
        return rows

    @property
    def is_simple(self) -> bool:
        return not any(cell.is_spanning for cell in self.cells)

    def spanning_cells(self) -> List[Cell]:
        return [cell for cell in self.cells if cell.is_spanning]

    def structure_key(self) -> Tuple:
        return (self.n_rows, self.n_cols, tuple(cell.structure() for cell in self.cells))

    def contents(self) -> List[str]:
        return [cell.content for cell in self.cells]

    def with_contents(self, contents: Sequence[str]) -> "TableGrid":
        if len(contents) != len(self.cells):
            raise ValueError("one content string per cell is required")
        cells = tuple(replace(cell, content=text) for cell, text in zip(self.cells, contents))
        return replace(self, cells=cells)

    def with_row_colors(self, row_colors: Sequence[Optional[str]]) -> "TableGrid":
        return replace(self, row_colors=tuple(row_colors))

    def transpose(self) -> "TableGrid":
        """Swap rows and columns; row colors do not survive."""
        cells = [
            Cell(c.col_start, c.row_start, c.colspan, c.rowspan, c.is_header, c.content)
            for c in self.cells
        ]
        return TableGrid.from_cells(self.n_cols, self.n_rows, cells)


@dataclass(frozen=True)
class TableSchema:
    """Logical blueprint of a table.

    Span matrices use anchor-value encoding: the anchor holds the span, every
    position absorbed by a span holds 0.
    """
    n_rows: int
    n_cols: int
    row_span_matrix: Tuple[Tuple[int, ...], ...]
    col_span_matrix: Tuple[Tuple[int, ...], ...]
    header_layout: HeaderLayout = HeaderLayout.vertical
    style: StyleSpec = field(default_factory=StyleSpec)
    header_rows: Optional[int] = None
    header_cols: Optional[int] = None

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise SchemaError("n_rows and n_cols must be positive")
        for name in ("row_span_matrix", "col_span_matrix"):
            matrix = getattr(self, name)
            if len(matrix) != self.n_rows or any(len(row) != self.n_cols for row in matrix):
                raise SchemaError(f"{name} must be {self.n_rows}x{self.n_cols}")
            if any(value < 0 for row in matrix for value in row):
                raise SchemaError(f"{name} holds a negative span")
            object.__setattr__(self, name, tuple(tuple(int(v) for v in row) for row in matrix))

        layout = HeaderLayout(self.header_layout)
        object.__setattr__(self, "header_layout", layout)
        default_rows = 1 if layout in (HeaderLayout.vertical, HeaderLayout.matrix) else 0
        default_cols = 1 if layout in (HeaderLayout.horizontal, HeaderLayout.matrix) else 0
        header_rows = default_rows if self.header_rows is None else self.header_rows
        header_cols = default_cols if self.header_cols is None else self.header_cols
        if (header_rows > 0) != (default_rows > 0) or (header_cols > 0) != (default_cols > 0):
            raise SchemaError(
                f"header bands rows={header_rows} cols={header_cols} do not match layout {layout.value}"
            )
        if header_rows > self.n_rows or header_cols > self.n_cols:
            raise SchemaError("header band deeper than the table")
        object.__setattr__(self, "header_rows", header_rows)
        object.__setattr__(self, "header_cols", header_cols)

    @classmethod
    def uniform(cls, n_rows: int, n_cols: int, **kwargs) -> "TableSchema":
        """Schema without any merged cell."""
        ones = tuple((1,) * n_cols for _ in range(n_rows))
        return cls(n_rows=n_rows, n_cols=n_cols, row_span_matrix=ones, col_span_matrix=ones, **kwargs)

    def anchors(self) -> List[Tuple[int, int, int, int]]:
        """(row, col, rowspan, colspan) of every anchor, row-major."""
        return [
            (r, c, self.row_span_matrix[r][c], self.col_span_matrix[r][c])
            for r in range(self.n_rows)
            for c in range(self.n_cols)
            if self.row_span_matrix[r][c] > 0
        ]

    @property
    def is_simple(self) -> bool:
        return all(rs == 1 and cs == 1 for _, _, rs, cs in self.anchors())

    def is_header_position(self, row: int, col: int) -> bool:
        return row < self.header_rows or col < self.header_cols


# ============================================
# Schema -> grid -> HTML
# ============================================

def grid_from_schema(schema: TableSchema) -> TableGrid:
    """
    Expand the span matrices of ``schema`` into an occupancy grid.

    Raises:
        SchemaError: naming the first anchor (row-major) that overlaps,
            leaves the grid, or leaves a hole
    """
    occupancy = [[-1] * schema.n_cols for _ in range(schema.n_rows)]
    cells: List[Cell] = []
    for r in range(schema.n_rows):
        for c in range(schema.n_cols):
            rs = schema.row_span_matrix[r][c]
            cs = schema.col_span_matrix[r][c]
            if rs == 0 and cs == 0:
                if occupancy[r][c] == -1:
                    raise SchemaError(f"position ({r},{c}) is absorbed but no span covers it", anchor=(r, c))
                continue
            if rs == 0 or cs == 0:
                raise SchemaError(f"anchor ({r},{c}) has rowspan={rs} colspan={cs}", anchor=(r, c))
            if occupancy[r][c] != -1:
                raise SchemaError(f"anchor ({r},{c}) lies inside another span", anchor=(r, c))
            if r + rs > schema.n_rows or c + cs > schema.n_cols:
                raise SchemaError(f"anchor ({r},{c}) spans beyond the table", anchor=(r, c))
            index = len(cells)
            for rr in range(r, r + rs):
                for cc in range(c, c + cs):
                    if occupancy[rr][cc] != -1:
                        raise SchemaError(f"anchor ({r},{c}) overlaps position ({rr},{cc})", anchor=(r, c))
                    occupancy[rr][cc] = index
            cells.append(Cell(r, c, rs, cs, is_header=schema.is_header_position(r, c)))
    return TableGrid(
        n_rows=schema.n_rows,
        n_cols=schema.n_cols,
        cells=tuple(cells),
        occupancy=tuple(tuple(row) for row in occupancy),
    )


def _border(style: StyleSpec) -> str:
    return f"{style.border_thickness}px solid {style.border_color}"


def css_for_style(style: StyleSpec) -> str:
    """Inline stylesheet for one table, fixed template filled from ``style``."""
    border = _border(style)
    rules = [
        f"table {{ border-collapse: collapse; font-family: {style.font_family}; color: {style.font_color}; }}",
        "th, td { padding: 4px 8px; border: none; }",
    ]
    if style.line_style == LineStyle.fully_lined:
        rules.append(f"th, td {{ border: {border}; }}")
    elif style.line_style == LineStyle.horizontally_lineless:
        rules.append(f"th, td {{ border-left: {border}; border-right: {border}; }}")
    elif style.line_style == LineStyle.vertically_lineless:
        rules.append(f"th, td {{ border-top: {border}; border-bottom: {border}; }}")
    elif style.line_style == LineStyle.lined_headers_only:
        rules.append(f"th {{ border: {border}; }}")
    if style.header_background:
        rules.append(f"th {{ background-color: {style.header_background}; font-weight: bold; }}")
    if style.background_palette:
        rules.append(f"td {{ background-color: {style.background_palette[0]}; }}")
    if style.zebra:
        rules.append(f"tr:nth-child(even) td {{ background-color: {style.background_palette[1]}; }}")
    return " ".join(rules)


def _open_tag(cell: Cell) -> str:
    tag = "th" if cell.is_header else "td"
    attrs = ""
    if cell.rowspan > 1:
        attrs += f' rowspan="{cell.rowspan}"'
    if cell.colspan > 1:
        attrs += f' colspan="{cell.colspan}"'
    return f"<{tag}{attrs}>"


def table_fragment(grid: TableGrid) -> str:
    """The <table> element alone, on one line."""
    parts = ["<table>"]
    for row_index, row in enumerate(grid.rows_of_cells()):
        color = grid.row_colors[row_index]
        parts.append(f'<tr style="background-color: {color}">' if color else "<tr>")
        for cell in row:
            tag = "th" if cell.is_header else "td"
            parts.append(f"{_open_tag(cell)}{html_lib.escape(cell.content, quote=False)}</{tag}>")
        parts.append("</tr>")
    parts.append("</table>")
    return "".join(parts)


def grid_to_html(grid: TableGrid, style: Optional[StyleSpec] = None) -> str:
    """Single-table HTML document with an inline style block."""
    style = style or StyleSpec()
    return (
        '<html><head><meta charset="utf-8"><style>'
        f"{css_for_style(style)}"
        "</style></head><body>"
        f"{table_fragment(grid)}"
        "</body></html>"
    )


# ============================================
# HTML -> grid
# ============================================

@dataclass(frozen=True)
class TableInspection:
    """Outcome of reading a table: a grid when no defect was found."""
    grid: Optional[TableGrid]
    defects: Tuple[Defect, ...]
    row_widths: Tuple[int, ...]

    @property
    def valid(self) -> bool:
        return not self.defects


def inspect_table(html: str) -> TableInspection:
    """Scan the first table of ``html`` and resolve spans, collecting every defect."""
    scan = scan_table(html)
    defects = list(scan.defects)
    if not scan.found:
        return TableInspection(grid=None, defects=tuple(defects), row_widths=())

    rows = scan.rows
    n_rows = len(rows)
    if not any(row.cells for row in rows):
        defects.append(Defect(kind=DefectKind.EmptyStructure, detail="table has no cells"))
        return TableInspection(grid=None, defects=tuple(defects), row_widths=(0,) * n_rows)

    occupied: Dict[Tuple[int, int], int] = {}
    cells: List[Cell] = []
    for r, row in enumerate(rows):
        c = 0
        for raw in row.cells:
            while (r, c) in occupied:
                c += 1
            rowspan, colspan = raw.rowspan, raw.colspan
            if r + rowspan > n_rows:
                defects.append(Defect(
                    kind=DefectKind.SpanOutOfBounds,
                    location={"row": r, "col": c},
                    detail=f"rowspan={rowspan} at row {r} exceeds the {n_rows} rows of the table",
                ))
                rowspan = n_rows - r
            clash = [
                (rr, cc)
                for rr in range(r, r + rowspan)
                for cc in range(c, c + colspan)
                if (rr, cc) in occupied
            ]
            if clash:
                other = cells[occupied[clash[0]]]
                defects.append(Defect(
                    kind=DefectKind.OverlappingSpans,
                    location={"row": r, "col": c},
                    detail=f"cell at ({r},{c}) overlaps the cell anchored at ({other.row_start},{other.col_start})",
                ))
            index = len(cells)
            for rr in range(r, r + rowspan):
                for cc in range(c, c + colspan):
                    occupied.setdefault((rr, cc), index)
            cells.append(Cell(r, c, rowspan, colspan, raw.tag == "th", raw.text))
            c += colspan

    columns: List[set] = [set() for _ in range(n_rows)]
    for rr, cc in occupied:
        columns[rr].add(cc)
    widths = tuple(max(cols) + 1 if cols else 0 for cols in columns)
    n_cols = max(widths)
    ragged = [r for r, cols in enumerate(columns) if cols != set(range(n_cols))]
    if ragged:
        defects.append(Defect(
            kind=DefectKind.RaggedRows,
            location={"rows": ragged},
            detail=f"logical row widths {list(widths)} differ",
        ))

    if defects:
        return TableInspection(grid=None, defects=tuple(defects), row_widths=widths)
    grid = TableGrid.from_cells(n_rows, n_cols, cells, row_colors=[row.color for row in rows])
    return TableInspection(grid=grid, defects=(), row_widths=widths)


def html_to_grid(html: str) -> TableGrid:
    """
    Resolve the first table of ``html`` into a TableGrid.

    Raises:
        TableParseError: subclass named after the first defect; ``defects``
            lists all of them
    """
    inspection = inspect_table(html)
    if inspection.grid is None:
        first = inspection.defects[0]
        error_cls = PARSE_ERRORS.get(first.kind.value, TableParseError)
        raise error_cls(first.detail, defects=list(inspection.defects), location=first.location)
    return inspection.grid


def row_widths(html: str) -> List[int]:
    """Logical width of every row, also for tables that fail validation."""
    return list(inspect_table(html).row_widths)


def grid_structure_equal(a: TableGrid, b: TableGrid) -> bool:
    """Same shape, spans and header flags; content and colors ignored."""
    return a.structure_key() == b.structure_key()


# ============================================
# Structure tokens and labels
# ============================================

def structure_tokens(grid: TableGrid) -> List[str]:
    tokens = ["<table>"]
    for row in grid.rows_of_cells():
        tokens.append("<tr>")
        for cell in row:
            tokens.append(_open_tag(cell))
            tokens.append("</th>" if cell.is_header else "</td>")
        tokens.append("</tr>")
    tokens.append("</table>")
    return tokens


def grid_from_tokens(tokens: Sequence[str]) -> TableGrid:
    """Reparse structure tokens; cells come back empty."""
    return html_to_grid("".join(tokens))


def _header_layout(grid: TableGrid) -> HeaderLayout:
    top = all(grid.cell_at(0, c).is_header for c in range(grid.n_cols))
    left = all(grid.cell_at(r, 0).is_header for r in range(grid.n_rows))
    if top and left:
        # A table made only of header cells reads as a top-header table
        if all(cell.is_header for cell in grid.cells):
            return HeaderLayout.vertical
        return HeaderLayout.matrix
    if top:
        return HeaderLayout.vertical
    if left:
        return HeaderLayout.horizontal
    return HeaderLayout.none


def derive_labels(grid: TableGrid, style: Optional[StyleSpec] = None) -> TableLabels:
    style = style or StyleSpec()
    return TableLabels(
        is_simple=grid.is_simple,
        is_colored=style.is_colored or any(grid.row_colors),
        is_lined=style.is_lined,
        line_style=style.line_style,
        header_layout=_header_layout(grid),
    )


def cell_records(grid: TableGrid) -> List[CellRecord]:
    return [
        CellRecord(
            content=cell.content,
            row_start=cell.row_start,
            col_start=cell.col_start,
            rowspan=cell.rowspan,
            colspan=cell.colspan,
            is_header=cell.is_header,
        )
        for cell in grid.cells
    ]


def build_record(
    record_id: str,
    grid: TableGrid,
    style: Optional[StyleSpec] = None,
    topic: str = "",
    language: Language = Language.en,
    provenance: Optional[Provenance] = None,
) -> AnnotationRecord:
    """Assemble the annotation record of a grid rendered with ``style``."""
    style = style or StyleSpec()
    return AnnotationRecord(
        id=record_id,
        html=grid_to_html(grid, style),
        structure_tokens=structure_tokens(grid),
        cells=cell_records(grid),
        labels=derive_labels(grid, style),
        topic=topic,
        language=language,
        style=style,
        provenance=provenance,
    )


TABLE_ELEMENT = re.compile(r"<table\b.*?</table\s*>", re.DOTALL | re.IGNORECASE)


def splice_table(document: str, table: Union[TableGrid, str]) -> str:
    """Replace the first table of ``document``, keeping everything around it.

    ``table`` is a grid or another document whose first table is taken.
    """
    if isinstance(table, TableGrid):
        fragment = table_fragment(table)
    else:
        match = TABLE_ELEMENT.search(table)
        fragment = match.group(0) if match else table
    if not TABLE_ELEMENT.search(document):
        return fragment
    return TABLE_ELEMENT.sub(lambda _: fragment, document, count=1)


def grid_from_cell_records(cells: Sequence[CellRecord], with_content: bool = True) -> TableGrid:
    """Rebuild a grid from the cell list of an annotation record."""
    n_rows = max((c.row_start + c.rowspan for c in cells), default=0)
    n_cols = max((c.col_start + c.colspan for c in cells), default=0)
    return TableGrid.from_cells(
        n_rows,
        n_cols,
        [
            Cell(c.row_start, c.col_start, c.rowspan, c.colspan, c.is_header, c.content if with_content else "")
            for c in cells
        ],
    )
