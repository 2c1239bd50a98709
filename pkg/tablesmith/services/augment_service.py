"""
Span-aware table transforms: copy, delete, swap and alter.

Row operations work on the grid directly; column operations run the row
operation on the transposed grid. Every accepted transform returns a grid
that tiles its rectangle exactly.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from tablesmith.core.errors import (
    DeleteBreaksSpan,
    InfeasibleTransform,
    OutOfBounds,
    SwapIntersectsSpan,
    TransformError,
)
from tablesmith.llm.provider import ContentProvider
from tablesmith.schemas.augment import Axis, SpanRegionMap, Transform, TransformOp
from tablesmith.schemas.table import AnnotationRecord, Language, Provenance, StyleSpec
from tablesmith.services.table_model import Cell, TableGrid, build_record, grid_from_cell_records, grid_to_html, html_to_grid

logger = logging.getLogger(__name__)

ROW_PALETTE = ("#f2f2f2", "#dce6f1", "#fde9d9", "#ebf1de", "#fff2cc", "#e4dfec")

UNTRANSFORMED_VARIANTS = 5
TRANSFORM_ORDER = (TransformOp.copy, TransformOp.delete, TransformOp.swap, TransformOp.alter)


def span_regions(grid: TableGrid) -> SpanRegionMap:
    """Flag rows and columns crossed in their interior by a merged cell."""
    rows = [False] * grid.n_rows
    cols = [False] * grid.n_cols
    rectangles = []
    for cell in grid.cells:
        if not cell.is_spanning:
            continue
        rectangles.append(cell.rectangle)
        for r in range(cell.row_start + 1, cell.row_end):
            rows[r] = True
        for c in range(cell.col_start + 1, cell.col_end):
            cols[c] = True
    return SpanRegionMap(rows_crossed=rows, cols_crossed=cols, rectangles=rectangles)


# ============================================
# Row primitives
# ============================================

def _rebuild(grid: TableGrid, n_rows: int, cells: List[Cell], row_colors: Sequence[Optional[str]]) -> TableGrid:
    return TableGrid.from_cells(n_rows, grid.n_cols, cells, row_colors=row_colors)


def _tall_cells(grid: TableGrid, rows: range) -> List[Cell]:
    """Cells spanning several rows that cover any of ``rows``."""
    return [
        cell for cell in grid.cells
        if cell.rowspan > 1 and cell.row_start < rows.stop and cell.row_end > rows.start
    ]


def _merged_cells(grid: TableGrid, rows: range) -> List[Cell]:
    """Merged cells of any shape that cover any of ``rows``."""
    return [
        cell for cell in grid.cells
        if cell.is_spanning and cell.row_start < rows.stop and cell.row_end > rows.start
    ]


def _straddling(grid: TableGrid, boundary: int) -> Optional[Cell]:
    for cell in grid.cells:
        if cell.row_start < boundary < cell.row_end:
            return cell
    return None


def _check_row(grid: TableGrid, index: int) -> None:
    if not 0 <= index < grid.n_rows:
        raise OutOfBounds(f"row {index} outside 0..{grid.n_rows - 1}")


def _check_block(grid: TableGrid, start: int, end: int) -> None:
    if not 0 <= start < end <= grid.n_rows:
        raise OutOfBounds(f"block [{start}, {end}) outside 0..{grid.n_rows}")
    for boundary in (start, end):
        cell = _straddling(grid, boundary)
        if cell is not None:
            raise InfeasibleTransform(
                f"merged cell straddles block boundary {boundary}", rectangle=cell.rectangle
            )


def copy_rows(grid: TableGrid, start: int, end: int) -> TableGrid:
    """Duplicate rows [start, end) right after ``end - 1``."""
    length = end - start
    cells: List[Cell] = []
    if length == 1:
        own = [c for c in grid.cells if c.row_start == start and c.rowspan == 1]
        if not own:
            blocking = _tall_cells(grid, range(start, end))[0]
            raise InfeasibleTransform(f"row {start} holds no cell of its own", rectangle=blocking.rectangle)
        for cell in grid.cells:
            if cell.row_end <= start:
                cells.append(cell)
            elif cell.row_start > start:
                cells.append(replace(cell, row_start=cell.row_start + 1))
            elif cell.rowspan == 1:
                cells.append(cell)
                cells.append(replace(cell, row_start=start + 1))
            else:
                cells.append(replace(cell, rowspan=cell.rowspan + 1))
    else:
        for cell in grid.cells:
            if cell.row_start >= end:
                cells.append(replace(cell, row_start=cell.row_start + length))
            else:
                cells.append(cell)
                if cell.row_start >= start:
                    cells.append(replace(cell, row_start=cell.row_start + length))
    colors = list(grid.row_colors)
    colors[end:end] = grid.row_colors[start:end]
    return _rebuild(grid, grid.n_rows + length, cells, colors)


def delete_rows(grid: TableGrid, start: int, end: int) -> TableGrid:
    """
    Remove rows [start, end).

    A merged cell anchored on a deleted single row keeps its anchor and
    loses one row; one crossing the row from above blocks the delete. The
    row must hold a cell of its own, as for copy.
    """
    length = end - start
    if length >= grid.n_rows:
        raise InfeasibleTransform("cannot delete every row of a table")
    if length == 1:
        crossing = _straddling(grid, start)
        if crossing is not None:
            raise DeleteBreaksSpan(f"row {start} is crossed by a merged cell", rectangle=crossing.rectangle)
        if not any(c.row_start == start and c.rowspan == 1 for c in grid.cells):
            blocking = _tall_cells(grid, range(start, end))[0]
            raise InfeasibleTransform(f"row {start} holds no cell of its own", rectangle=blocking.rectangle)
    cells = []
    for cell in grid.cells:
        if cell.row_end <= start:
            cells.append(cell)
        elif cell.row_start >= end:
            cells.append(replace(cell, row_start=cell.row_start - length))
        elif length == 1 and cell.rowspan > 1:
            cells.append(replace(cell, rowspan=cell.rowspan - 1))
    colors = list(grid.row_colors[:start]) + list(grid.row_colors[end:])
    return _rebuild(grid, grid.n_rows - length, cells, colors)


def swap_rows(grid: TableGrid, a: Tuple[int, int], b: Tuple[int, int]) -> TableGrid:
    """Exchange two equally long, disjoint row ranges."""
    (a0, a1), (b0, b1) = sorted([a, b])
    if a1 - a0 != b1 - b0:
        raise InfeasibleTransform(f"blocks [{a0}, {a1}) and [{b0}, {b1}) differ in length")
    if a1 > b0 and a0 != b0:
        raise InfeasibleTransform(f"blocks [{a0}, {a1}) and [{b0}, {b1}) overlap")
    if a0 == b0:
        return grid
    if a1 - a0 == 1:
        merged = _merged_cells(grid, range(a0, a1)) or _merged_cells(grid, range(b0, b1))
        if merged:
            raise SwapIntersectsSpan("a swapped row intersects a merged cell", rectangle=merged[0].rectangle)
    shift = b0 - a0
    cells = []
    for cell in grid.cells:
        if a0 <= cell.row_start < a1:
            cells.append(replace(cell, row_start=cell.row_start + shift))
        elif b0 <= cell.row_start < b1:
            cells.append(replace(cell, row_start=cell.row_start - shift))
        else:
            cells.append(cell)
    colors = list(grid.row_colors)
    colors[a0:a1], colors[b0:b1] = grid.row_colors[b0:b1], grid.row_colors[a0:a1]
    return _rebuild(grid, grid.n_rows, cells, colors)


def alter_rows(grid: TableGrid, start: int, end: int, color: str) -> TableGrid:
    colors = list(grid.row_colors)
    for r in range(start, end):
        colors[r] = color.lower()
    return grid.with_row_colors(colors)


# ============================================
# Dispatch
# ============================================

def _ranges(t: Transform) -> List[Tuple[int, int]]:
    if t.axis == Axis.block:
        return [(t.indices[i], t.indices[i + 1]) for i in range(0, len(t.indices), 2)]
    return [(i, i + 1) for i in t.indices]


def _apply_rows(grid: TableGrid, t: Transform) -> TableGrid:
    ranges = _ranges(t)
    for start, end in ranges:
        if t.axis == Axis.block:
            _check_block(grid, start, end)
        else:
            _check_row(grid, start)
    if t.op == TransformOp.copy:
        return copy_rows(grid, *ranges[0])
    if t.op == TransformOp.delete:
        return delete_rows(grid, *ranges[0])
    if t.op == TransformOp.swap:
        return swap_rows(grid, ranges[0], ranges[1])
    return alter_rows(grid, *ranges[0], t.payload)


def _on_columns(grid: TableGrid, fn: Callable[[TableGrid], TableGrid]) -> TableGrid:
    result = fn(grid.transpose()).transpose()
    return result.with_row_colors(grid.row_colors)


def _transposed(error: TransformError) -> TransformError:
    if error.rectangle is not None:
        r0, c0, r1, c1 = error.rectangle
        error.rectangle = (c0, r0, c1, r1)
        error.details["rectangle"] = error.rectangle
    error.message = error.message.replace("row", "column")
    return error


def apply_transform(grid: TableGrid, t: Transform) -> TableGrid:
    """
    Apply one transform.

    Raises:
        OutOfBounds: an operand lies outside the grid
        DeleteBreaksSpan: a merged cell crosses the deleted row/column from above or the left
        SwapIntersectsSpan: a merged cell covers a swapped row/column
        InfeasibleTransform: e.g. deleting the only row, block boundary
            straddled, or alter on columns
    """
    along_columns = t.axis == Axis.column or (t.axis == Axis.block and t.block_axis == Axis.column)
    if not along_columns:
        return _apply_rows(grid, t)
    if t.op == TransformOp.alter:
        raise InfeasibleTransform("alter recolors rows; it has no column form")
    try:
        return _on_columns(grid, lambda transposed: _apply_rows(transposed, t))
    except TransformError as e:
        raise _transposed(e)


def try_transform(grid: TableGrid, t: Transform) -> Optional[TableGrid]:
    try:
        return apply_transform(grid, t)
    except TransformError:
        return None


# ============================================
# Variant fan-out
# ============================================

def candidate_transforms(grid: TableGrid, op: TransformOp, rng: np.random.Generator) -> List[Transform]:
    """Every row, column and proper-block operand for ``op``."""
    candidates: List[Transform] = []
    if op == TransformOp.alter:
        color = ROW_PALETTE[int(rng.integers(len(ROW_PALETTE)))]
        for r in range(grid.n_rows):
            candidates.append(Transform(op=op, axis=Axis.row, indices=(r,), payload=color))
        return candidates

    for axis, size in ((Axis.row, grid.n_rows), (Axis.column, grid.n_cols)):
        if op == TransformOp.swap:
            candidates.extend(
                Transform(op=op, axis=axis, indices=(i, j)) for i in range(size) for j in range(i + 1, size)
            )
        else:
            candidates.extend(Transform(op=op, axis=axis, indices=(i,)) for i in range(size))
        for length in range(2, size):
            for start in range(0, size - length + 1):
                if op == TransformOp.swap:
                    candidates.extend(
                        Transform(op=op, axis=Axis.block, block_axis=axis,
                                  indices=(start, start + length, other, other + length))
                        for other in range(start + length, size - length + 1)
                    )
                else:
                    candidates.append(Transform(op=op, axis=Axis.block, block_axis=axis,
                                                indices=(start, start + length)))
    return candidates


def pick_transform(grid: TableGrid, op: TransformOp, rng: np.random.Generator) -> Tuple[Transform, TableGrid]:
    """Random feasible transform for ``op``; alter when ``op`` is infeasible here."""
    candidates = candidate_transforms(grid, op, rng)
    for i in rng.permutation(len(candidates)):
        result = try_transform(grid, candidates[i])
        if result is not None:
            return candidates[i], result
    if op == TransformOp.alter:
        raise InfeasibleTransform("grid has no row to alter")
    logger.debug(f"No feasible {op.value} transform, falling back to alter")
    return pick_transform(grid, TransformOp.alter, rng)


def variant_fanout(
    skeleton_html: str,
    provider: ContentProvider,
    rng: np.random.Generator,
    *,
    topic: str,
    domain: str = "telecommunication",
    language: Language = Language.en,
    style: Optional[StyleSpec] = None,
    parent_id: str = "table",
) -> List[AnnotationRecord]:
    """
    Nine records per skeleton: five filled variants as they are, four with
    one of copy, delete, swap and alter applied.
    """
    skeleton = html_to_grid(skeleton_html)
    html = skeleton_html
    if any(cell.is_header and not cell.content for cell in skeleton.cells):
        html = provider.fill_headers(skeleton_html, topic, domain, language)

    variants = provider.fill_bodies(html, topic, domain, language, UNTRANSFORMED_VARIANTS + len(TRANSFORM_ORDER))
    records = []
    for k, variant in enumerate(variants):
        grid = html_to_grid(variant)
        transform = None
        if k >= UNTRANSFORMED_VARIANTS:
            transform, grid = pick_transform(grid, TRANSFORM_ORDER[k - UNTRANSFORMED_VARIANTS], rng)
        records.append(build_record(
            f"{parent_id}-v{k}",
            grid,
            style,
            topic=topic,
            language=language,
            provenance=Provenance(
                parent_id=parent_id,
                transform=transform.model_dump(mode="json") if transform else None,
            ),
        ))
    return records


def body_skeleton(record: AnnotationRecord) -> str:
    """The record's table with header text kept and every td emptied."""
    grid = grid_from_cell_records(record.cells)
    contents = [cell.content if cell.is_header else "" for cell in grid.cells]
    return grid_to_html(grid.with_contents(contents), record.style)


def augment_records(
    records: Sequence[AnnotationRecord],
    provider: ContentProvider,
    seed: int = 0,
    domain: str = "telecommunication",
    workers: Optional[int] = None,
) -> List[AnnotationRecord]:
    """Fan every record out into nine variants; record ``i`` draws from seed ``(seed, i)``."""

    def fan_out(index: int) -> List[AnnotationRecord]:
        record = records[index]
        return variant_fanout(
            body_skeleton(record),
            provider,
            np.random.default_rng([seed, index]),
            topic=record.topic,
            domain=domain,
            language=record.language,
            style=record.style,
            parent_id=record.id,
        )

    with ThreadPoolExecutor(max_workers=workers) as pool:
        batches = list(pool.map(fan_out, range(len(records))))
    augmented = [record for batch in batches for record in batch]
    logger.info(f"Augmented manifest: parents={len(records)}, records={len(augmented)}")
    return augmented
