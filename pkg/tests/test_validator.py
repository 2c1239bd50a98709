"""
Tests for the structural validator.
"""
import numpy as np
import pytest

from tablesmith.core.errors import DisallowedTag, EmptyStructure, OverlappingSpans, RaggedRows, SpanOutOfBounds
from tablesmith.schemas.checker import DefectKind
from tablesmith.schemas.generation import GenerationRequest
from tablesmith.services.generator_service import fallback_regenerate, sample_schema
from tablesmith.services.table_model import html_to_grid
from tablesmith.services.validator_service import validate_table

DISALLOWED_FRAGMENTS = [
    "<div>a</div>",
    "<span>a</span>",
    '<img src="a.png">',
    "<p>a</p>",
    "<b>a</b>",
    "<i>a</i>",
    '<a href="#">a</a>',
    "<ul><li>a</li></ul>",
    "<table><tr><td>a</td></tr></table>",
]


def _ragged(k):
    return "<table><tr><td>a</td></tr><tr>" + "<td>b</td>" * (k + 2) + "</tr></table>"


def _overlap(k):
    first = "<td>a</td>" * (k + 1) + '<td rowspan="2">b</td>'
    return f'<table><tr>{first}</tr><tr><td colspan="{k + 3}">c</td></tr></table>'


def _out_of_bounds(k):
    return f'<table><tr><td rowspan="{k + 2}">a</td><td>b</td></tr></table>'


def _disallowed(k):
    if k < len(DISALLOWED_FRAGMENTS):
        return f"<table><tr><td>{DISALLOWED_FRAGMENTS[k]}</td><td>b</td></tr></table>"
    return '<table><tr><td rowspan="abc">a</td><td>b</td></tr></table>'


def _empty(k):
    return "<table>" + "<tr></tr>" * k + "</table>"


INVALID_CORPUS = [
    (builder(k), kind)
    for builder, kind in (
        (_ragged, DefectKind.RaggedRows),
        (_overlap, DefectKind.OverlappingSpans),
        (_out_of_bounds, DefectKind.SpanOutOfBounds),
        (_disallowed, DefectKind.DisallowedTag),
        (_empty, DefectKind.EmptyStructure),
    )
    for k in range(10)
]


@pytest.mark.parametrize("html,kind", INVALID_CORPUS)
def test_every_invalid_table_is_detected(html, kind):
    """Each constructed defect is reported with its kind."""
    report = validate_table(html)
    assert not report.valid
    assert kind in report.kinds()


def test_invalid_corpus_covers_fifty_tables():
    assert len(INVALID_CORPUS) == 50
    assert {kind for _, kind in INVALID_CORPUS} == {
        DefectKind.RaggedRows, DefectKind.OverlappingSpans, DefectKind.SpanOutOfBounds,
        DefectKind.DisallowedTag, DefectKind.EmptyStructure,
    }


def test_rule_built_skeletons_are_valid():
    """No false positives on a thousand sampled schemas."""
    request = GenerationRequest(count=1, seed=3)
    rng = np.random.default_rng(3)
    for _ in range(1000):
        schema = sample_schema(request, rng)
        report = validate_table(fallback_regenerate(schema))
        assert report.valid, report.defects


def test_missing_table_and_malformed_markup():
    assert validate_table("<p>no table</p>").kinds() == [DefectKind.MissingTable]
    assert DefectKind.MalformedMarkup in validate_table("<table><tr><td>a</tr></table>").kinds()
    assert DefectKind.MalformedMarkup in validate_table("<table><tr><td>a</td></tr>").kinds()


def test_all_defects_are_collected():
    """Validation keeps going after the first defect."""
    html = '<table><tr><td><b>a</b></td></tr><tr><td>b</td><td rowspan="3">c</td></tr></table>'
    kinds = set(validate_table(html).kinds())
    assert {DefectKind.DisallowedTag, DefectKind.SpanOutOfBounds, DefectKind.RaggedRows} <= kinds


def test_overlap_location_names_the_clashing_cell():
    report = validate_table(_overlap(1))
    overlap = next(d for d in report.defects if d.kind == DefectKind.OverlappingSpans)
    assert overlap.location == {"row": 1, "col": 0}


@pytest.mark.parametrize("html,error", [
    (_ragged(0), RaggedRows),
    (_overlap(0), OverlappingSpans),
    (_out_of_bounds(0), SpanOutOfBounds),
    (_disallowed(0), DisallowedTag),
    (_empty(2), EmptyStructure),
])
def test_parse_raises_named_error(html, error):
    """html_to_grid raises the class named after the first defect."""
    with pytest.raises(error) as exc:
        html_to_grid(html)
    assert exc.value.defects


def test_valid_table_with_wrappers_and_entities():
    html = ("<table><thead><tr><th>Plan</th><th>Fee</th></tr></thead>"
            "<tbody><tr><td>A &amp; B</td><td>10</td></tr></tbody></table>")
    report = validate_table(html)
    assert report.valid and report.defects == []
