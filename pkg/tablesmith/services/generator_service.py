"""
Table generation: schema sampling, CSS style heuristics and the batch
pipeline (skeleton -> header fill -> body fill -> validate -> check, with
fallback regeneration).
"""
import logging
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from tablesmith.core.errors import (
    ConfigError,
    InvalidTableError,
    ProviderError,
    RankerError,
    ResponseFormatError,
    StructureDriftError,
    TableParseError,
)
from tablesmith.llm.provider import ContentProvider
from tablesmith.llm.runner import LLMRunner
from tablesmith.schemas.generation import AttributeCombo, BatchReport, Complexity, GenerationRequest, ItemStatus
from tablesmith.schemas.table import (
    DEFAULT_BORDER_COLOR,
    DEFAULT_FONT_COLOR,
    AnnotationRecord,
    HeaderLayout,
    LineStyle,
    StyleSpec,
)
from tablesmith.schemas.teds import TedsMode
from tablesmith.services.checker_service import FillingChecker
from tablesmith.services.table_model import (
    TableSchema,
    build_record,
    grid_from_cell_records,
    grid_from_schema,
    grid_structure_equal,
    grid_to_html,
    html_to_grid,
)
from tablesmith.services.teds_service import teds
from tablesmith.services.topic_memory import TopicMemory

logger = logging.getLogger(__name__)

HEADER_COLORS = ("#4472c4", "#1f4e79", "#c00000", "#548235", "#7030a0", "#bf8f00", "#2e75b6", "#833c0b")
BODY_COLORS = ("#f2f2f2", "#dce6f1", "#fde9d9", "#ebf1de", "#fff2cc", "#e4dfec", "#ddebf7", "#fce4d6")
FONT_COLORS = ("#1f3864", "#333333", "#7f6000", "#203864", "#3a3838")
BORDER_COLORS = ("#4472c4", "#808080", "#a5a5a5", "#2f5597", "#c55a11")
FONT_FAMILIES = (
    "Arial, sans-serif",
    "'Times New Roman', serif",
    "Verdana, sans-serif",
    "'Microsoft YaHei', sans-serif",
    "SimSun, serif",
)
UNLINED_STYLES = (
    LineStyle.horizontally_lineless,
    LineStyle.vertically_lineless,
    LineStyle.lined_headers_only,
    LineStyle.lineless,
)

MAX_SPAN = 3
MAX_SPANNING_ANCHORS = 3
DEFAULT_MAX_FALLBACK = 3


# ============================================
# Schema sampling
# ============================================

def check_request(request: GenerationRequest) -> None:
    """
    Raises:
        ConfigError: complex tables requested but the ranges only allow 1x1
    """
    max_area = request.row_range[1] * request.col_range[1]
    if request.complexity != Complexity.simple and max_area < 2:
        raise ConfigError(
            f"ranges rows={list(request.row_range)} cols={list(request.col_range)} cannot host a spanning cell",
            complexity=request.complexity.value,
        )


def _header_depths(
    layout: HeaderLayout, n_rows: int, n_cols: int, max_depth: int, rng: np.random.Generator
) -> Optional[Tuple[int, int]]:
    """Header band depths, each leaving at least one body row/column; None when impossible."""
    needs_rows = layout in (HeaderLayout.vertical, HeaderLayout.matrix)
    needs_cols = layout in (HeaderLayout.horizontal, HeaderLayout.matrix)
    if (needs_rows and n_rows < 2) or (needs_cols and n_cols < 2):
        return None
    header_rows = int(rng.integers(1, min(max_depth, n_rows - 1) + 1)) if needs_rows else 0
    header_cols = int(rng.integers(1, min(max_depth, n_cols - 1) + 1)) if needs_cols else 0
    return header_rows, header_cols


def _span_candidates(n_rows: int, n_cols: int, header_rows: int, header_cols: int) -> List[Tuple[int, int, int, int]]:
    """(row, col, max_rowspan, max_colspan) of anchors that can span.

    A span never crosses a header band boundary.
    """
    candidates = []
    for r in range(n_rows):
        row_limit = header_rows if r < header_rows else n_rows
        for c in range(n_cols):
            col_limit = header_cols if c < header_cols else n_cols
            max_rs = min(row_limit - r, MAX_SPAN)
            max_cs = min(col_limit - c, MAX_SPAN)
            if max_rs > 1 or max_cs > 1:
                candidates.append((r, c, max_rs, max_cs))
    return candidates


def _place_spans(
    n_rows: int, n_cols: int, candidates: List[Tuple[int, int, int, int]], rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    row_spans = np.ones((n_rows, n_cols), dtype=int)
    col_spans = np.ones((n_rows, n_cols), dtype=int)
    occupied = np.zeros((n_rows, n_cols), dtype=bool)
    k = int(rng.integers(1, max(1, min(MAX_SPANNING_ANCHORS, n_rows * n_cols // 4)) + 1))

    placed = 0
    for i in rng.permutation(len(candidates)):
        if placed == k:
            break
        r, c, max_rs, max_cs = candidates[i]
        if occupied[r, c]:
            continue
        options = [
            (rs, cs)
            for rs in range(1, max_rs + 1)
            for cs in range(1, max_cs + 1)
            if (rs, cs) != (1, 1) and not occupied[r:r + rs, c:c + cs].any()
        ]
        if not options:
            continue
        rs, cs = options[int(rng.integers(len(options)))]
        occupied[r:r + rs, c:c + cs] = True
        row_spans[r:r + rs, c:c + cs] = 0
        col_spans[r:r + rs, c:c + cs] = 0
        row_spans[r, c] = rs
        col_spans[r, c] = cs
        placed += 1
    return row_spans, col_spans


def sample_schema(
    request: GenerationRequest,
    rng: np.random.Generator,
    simple: Optional[bool] = None,
    style: Optional[StyleSpec] = None,
) -> TableSchema:
    """
    Draw dimensions, header layout and spans.

    ``simple`` overrides the request's complexity (used for attribute combos).
    Complex schemas hold between one and three spanning anchors.
    """
    check_request(request)
    if simple is None:
        if request.complexity == Complexity.mixed:
            simple = bool(rng.random() < 0.5)
        else:
            simple = request.complexity == Complexity.simple

    (row_lo, row_hi), (col_lo, col_hi) = request.row_range, request.col_range
    n_rows = int(rng.integers(row_lo, row_hi + 1))
    n_cols = int(rng.integers(col_lo, col_hi + 1))
    if not simple and n_rows * n_cols < 2:
        if col_hi >= 2:
            n_cols = 2
        else:
            n_rows = 2

    weighted = [(layout, w) for layout, w in request.header_layout_weights.items() if w > 0]
    weights = np.array([w for _, w in weighted], dtype=float)
    order = rng.choice(len(weighted), size=len(weighted), replace=False, p=weights / weights.sum())

    layout, header_rows, header_cols = HeaderLayout.none, 0, 0
    candidates = _span_candidates(n_rows, n_cols, 0, 0)
    for i in order:
        option = weighted[i][0]
        depths = _header_depths(option, n_rows, n_cols, request.max_header_depth, rng)
        if depths is None:
            continue
        option_candidates = _span_candidates(n_rows, n_cols, *depths)
        if not simple and not option_candidates:
            continue
        layout, (header_rows, header_cols), candidates = option, depths, option_candidates
        break

    if simple:
        row_spans = col_spans = np.ones((n_rows, n_cols), dtype=int)
    else:
        row_spans, col_spans = _place_spans(n_rows, n_cols, candidates, rng)

    return TableSchema(
        n_rows=n_rows,
        n_cols=n_cols,
        row_span_matrix=row_spans.tolist(),
        col_span_matrix=col_spans.tolist(),
        header_layout=layout,
        style=style or StyleSpec(),
        header_rows=header_rows,
        header_cols=header_cols,
    )


def style_from_combo(combo: AttributeCombo, rng: np.random.Generator) -> StyleSpec:
    """CSS heuristics whose derived labels match the combo's colour and line flags."""
    line_style = LineStyle.fully_lined if combo.lined else UNLINED_STYLES[int(rng.integers(len(UNLINED_STYLES)))]
    thickness = int(rng.integers(1, 4))
    font_family = FONT_FAMILIES[int(rng.integers(len(FONT_FAMILIES)))]
    if not combo.colored:
        return StyleSpec(line_style=line_style, border_thickness=thickness, font_family=font_family)

    def pick(options):
        return options[int(rng.integers(len(options)))]

    header_background = pick(HEADER_COLORS)
    font_color = pick(FONT_COLORS) if rng.random() < 0.3 else DEFAULT_FONT_COLOR
    border_color = pick(BORDER_COLORS) if rng.random() < 0.5 else DEFAULT_BORDER_COLOR
    zebra = bool(rng.random() < 0.5)
    if zebra:
        first, second = rng.choice(len(BODY_COLORS), size=2, replace=False)
        palette = (BODY_COLORS[int(first)], BODY_COLORS[int(second)])
    elif rng.random() < 0.5:
        palette = (pick(BODY_COLORS),)
    else:
        palette = ()
    return StyleSpec(
        line_style=line_style,
        border_thickness=thickness,
        font_color=font_color,
        border_color=border_color,
        header_background=header_background,
        background_palette=palette,
        zebra=zebra,
        font_family=font_family,
    )


def resolve_combo(request: GenerationRequest, index: int, rng: np.random.Generator) -> AttributeCombo:
    """Unconstrained requests cycle through the eight combos; otherwise fixed flags win."""
    if request.unconstrained:
        return AttributeCombo.all()[index % 8]
    if request.complexity == Complexity.mixed:
        simple = bool(rng.random() < 0.5)
    else:
        simple = request.complexity == Complexity.simple
    colored = request.colored.resolve()
    lined = request.lined.resolve()
    return AttributeCombo(
        simple=simple,
        colored=bool(rng.random() < 0.5) if colored is None else colored,
        lined=bool(rng.random() < 0.5) if lined is None else lined,
    )


def fallback_regenerate(schema: TableSchema, failure: Optional[object] = None) -> str:
    """Rule-built skeleton of ``schema``; always structurally valid."""
    if failure is not None:
        logger.debug(f"Fallback regeneration: reason={failure}")
    return grid_to_html(grid_from_schema(schema), schema.style)


# ============================================
# Batch pipeline
# ============================================

@dataclass
class GenerationOutcome:
    records: List[AnnotationRecord]
    report: BatchReport


@dataclass
class _ItemResult:
    record: Optional[AnnotationRecord]
    status: ItemStatus


def _generate_item(
    request: GenerationRequest,
    index: int,
    topic: str,
    infill: ContentProvider,
    checker: FillingChecker,
    max_fallback: int,
) -> _ItemResult:
    rng = np.random.default_rng(request.seed ^ index)
    combo = resolve_combo(request, index, rng)
    style = style_from_combo(combo, rng)
    schema = sample_schema(request, rng, simple=combo.simple, style=style)
    grid = grid_from_schema(schema)
    html = grid_to_html(grid, style)
    record_id = f"tbl-{request.seed}-{index:06d}"

    failure = None
    for attempt in range(1, max_fallback + 2):
        try:
            filled = infill.fill_headers(html, topic, request.domain, request.language)
            # Attempt k keeps the k-th body variant, so a retry never repeats a rejected fill
            filled = infill.fill_bodies(filled, topic, request.domain, request.language, attempt)[-1]
            filled_grid = html_to_grid(filled)
            if not grid_structure_equal(filled_grid, grid):
                raise StructureDriftError("filled table no longer matches its skeleton")
            ranks = checker.check(filled, topic)
            if checker.accepts(ranks):
                record = build_record(
                    record_id, grid.with_contents(filled_grid.contents()), style,
                    topic=topic, language=request.language,
                )
                return _ItemResult(record, ItemStatus(
                    index=index, id=record_id, status="ok", iterations=attempt, combo=combo,
                ))
            failure = f"overall rank {ranks.overall} below {checker.min_overall}"
        except (StructureDriftError, ResponseFormatError, TableParseError, RankerError) as e:
            failure = f"{e.kind}: {e.message}"
        logger.debug(f"Item attempt failed: index={index}, attempt={attempt}, reason={failure}")
        html = fallback_regenerate(schema, failure)

    logger.warning(f"Item failed after {max_fallback} fallbacks: index={index}, reason={failure}")
    return _ItemResult(None, ItemStatus(
        index=index, id=record_id, status="failed", iterations=max_fallback + 1, combo=combo,
        error=f"GenerationFailed: {failure}",
    ))


def _build_report(requested: int, statuses: List[ItemStatus], started: float) -> BatchReport:
    produced = sum(1 for s in statuses if s.status == "ok")
    histogram = Counter(s.iterations for s in statuses if s.status == "ok")
    ok_iterations = [s.iterations for s in statuses if s.status == "ok"]
    return BatchReport(
        requested=requested,
        produced=produced,
        failed=requested - produced,
        items=statuses,
        iteration_histogram=dict(sorted(histogram.items())),
        mean_iterations=float(np.mean(ok_iterations)) if ok_iterations else 0.0,
        duration_seconds=time.monotonic() - started,
    )


def generate_batch(
    request: GenerationRequest,
    infill: ContentProvider,
    checker: FillingChecker,
    max_fallback: int = DEFAULT_MAX_FALLBACK,
    workers: Optional[int] = None,
    topic_memory: Optional[TopicMemory] = None,
) -> GenerationOutcome:
    """
    Generate ``request.count`` tables.

    Topics are drawn first, in one sequential call, so batches do not depend on
    worker scheduling. Items then run in parallel, each with seed
    ``request.seed XOR index``.

    Raises:
        ConfigError: request cannot be satisfied
        ProviderError: provider unreachable; ``partial`` holds a
            GenerationOutcome of the items that finished
    """
    check_request(request)
    started = time.monotonic()
    memory = topic_memory if topic_memory is not None else TopicMemory()

    topics = infill.topic(request.domain, request.language, memory.topics, request.count)
    fresh = [t for t in dict.fromkeys(topics) if t not in memory]
    if len(fresh) < request.count:
        raise ProviderError(f"provider returned {len(fresh)} new topics, {request.count} needed")
    topics = fresh[:request.count]
    for topic in topics:
        memory.add(topic)

    results: List[Optional[_ItemResult]] = [None] * request.count
    provider_error: Optional[ProviderError] = None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_generate_item, request, i, topics[i], infill, checker, max_fallback)
            for i in range(request.count)
        ]
        for i, future in enumerate(futures):
            try:
                results[i] = future.result()
            except ProviderError as e:
                provider_error = provider_error or e

    records = [r.record for r in results if r is not None and r.record is not None]
    statuses = [
        r.status if r is not None else ItemStatus(index=i, status="failed", iterations=0, error="ProviderError")
        for i, r in enumerate(results)
    ]
    report = _build_report(request.count, statuses, started)
    logger.info(
        f"Batch generated: requested={report.requested}, produced={report.produced}, "
        f"failed={report.failed}, mean_iterations={report.mean_iterations:.2f}"
    )

    outcome = GenerationOutcome(records=records, report=report)
    if provider_error is not None:
        raise ProviderError(
            f"provider failed during batch: {provider_error.message}",
            retryable=provider_error.retryable,
            partial=outcome,
        )
    return outcome


# ============================================
# Fidelity
# ============================================

def structure_fidelity(schema: TableSchema, html: str, merge_th_td: bool = False) -> float:
    """Structure-only TEDS of ``html`` against the rule-built skeleton; 0 when unparseable."""
    try:
        return teds(fallback_regenerate(schema), html, TedsMode.structure, merge_th_td)
    except InvalidTableError:
        return 0.0


def record_fidelity(record: AnnotationRecord, merge_th_td: bool = False) -> float:
    """Structure-only TEDS of a record's HTML against the skeleton rebuilt from its cell list."""
    try:
        skeleton = grid_to_html(grid_from_cell_records(record.cells, with_content=False))
    except TableParseError:
        return 0.0
    try:
        return teds(skeleton, record.html, TedsMode.structure, merge_th_td)
    except InvalidTableError:
        return 0.0


def direct_generate(schema: TableSchema, runner: LLMRunner, content: str) -> str:
    """Ask the LLM for the whole table in one prompt; the baseline the pipeline is measured against."""
    result = runner.run("structure_only", {
        "n_rows": schema.n_rows,
        "n_cols": schema.n_cols,
        "content": content,
        "row_span_matrix": [list(row) for row in schema.row_span_matrix],
        "col_span_matrix": [list(row) for row in schema.col_span_matrix],
    })
    html = result.get("html")
    if isinstance(html, list) and html:
        html = html[0]
    if not isinstance(html, str):
        raise ResponseFormatError("structure-only response has no 'html' string")
    return html
