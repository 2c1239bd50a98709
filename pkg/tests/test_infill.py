"""
Tests for content providers: template filling, the LLM-backed provider and
transcript replay.
"""
import json

import numpy as np
import pytest

from tablesmith.core.errors import ProviderError, ResponseFormatError, StructureDriftError
from tablesmith.llm.http_provider import HttpContentProvider, HttpRanker, width_diff
from tablesmith.llm.provider import LLMProvider, LLMResponse
from tablesmith.llm.runner import LLMRunner
from tablesmith.llm.template_provider import TemplateProvider
from tablesmith.llm.transcript import RecordingLLM, ReplayLLM, Transcript
from tablesmith.schemas.generation import GenerationRequest
from tablesmith.schemas.table import Language
from tablesmith.services.generator_service import fallback_regenerate, sample_schema
from tablesmith.services.table_model import grid_structure_equal, html_to_grid, row_widths
from tests.conftest import ScriptedLLM, complex_schema, skeleton_html


class FixedLLM(LLMProvider):
    """Returns the same body for every call."""

    def __init__(self, body):
        self.body = body

    def chat(self, messages, model, temperature=0.7, max_tokens=None, **kwargs):
        return LLMResponse(content=json.dumps(self.body), model=model)


def _skeletons(n, seed=0):
    rng = np.random.default_rng(seed)
    request = GenerationRequest(seed=seed)
    return [fallback_regenerate(sample_schema(request, rng)) for _ in range(n)]


def test_template_fills_never_drift(template_provider):
    """Five hundred header fills and five hundred body fills keep every row width."""
    drift = 0
    for i, html in enumerate(_skeletons(500)):
        widths = row_widths(html)
        headers = template_provider.fill_headers(html, f"topic {i}", "telecommunication", Language.en)
        body = template_provider.fill_bodies(headers, f"topic {i}", "telecommunication", Language.en, 1)[0]
        for filled in (headers, body):
            if row_widths(filled) != widths or not grid_structure_equal(html_to_grid(filled), html_to_grid(html)):
                drift += 1
    assert drift == 0


def test_template_fills_every_cell(template_provider):
    html = skeleton_html(complex_schema())
    headers = template_provider.fill_headers(html, "5G plans", "telecommunication", Language.en)
    grid = html_to_grid(headers)
    assert all(c.content for c in grid.cells if c.is_header)
    assert not any(c.content for c in grid.cells if not c.is_header)
    bodies = template_provider.fill_bodies(headers, "5G plans", "telecommunication", Language.en, 5)
    assert len(bodies) == 5
    assert len(set(bodies)) == 5
    assert all(all(c.content for c in html_to_grid(b).cells) for b in bodies)


def test_template_output_is_deterministic():
    html = skeleton_html(complex_schema())
    a = TemplateProvider(seed=3).fill_bodies(html, "t", "telecommunication", Language.zh, 3)
    b = TemplateProvider(seed=3).fill_bodies(html, "t", "telecommunication", Language.zh, 3)
    assert a == b


def test_template_topics_avoid_used_ones(template_provider):
    first = template_provider.topic("telecommunication", Language.en, [], 10)
    second = template_provider.topic("telecommunication", Language.en, first, 500)
    assert len(set(first)) == 10
    assert len(set(second)) == 500
    assert not set(first) & set(second)


def test_unknown_domain_uses_generic_lexicon():
    provider = TemplateProvider(seed=1)
    assert provider.topic("astronomy", Language.en, [], 3)
    assert provider.used_fallback
    assert provider.fallback_domains == {"astronomy"}


def test_width_diff_lists_changed_rows():
    assert width_diff([2, 2], [2, 2]) == []
    assert width_diff([2, 2], [2, 3]) == [{"row": 1, "expected": 2, "actual": 3}]
    assert width_diff([2], [2, 2]) == [{"row": 1, "expected": None, "actual": 2}]


def test_http_fill_keeps_document_around_table():
    provider = HttpContentProvider(LLMRunner(ScriptedLLM()))
    html = skeleton_html(complex_schema())
    filled = provider.fill_headers(html, "plan pricing", "telecommunication", Language.en)
    assert filled.startswith(html.split("<table")[0])
    assert grid_structure_equal(html_to_grid(filled), html_to_grid(html))
    bodies = provider.fill_bodies(filled, "plan pricing", "telecommunication", Language.en, 2)
    assert len(bodies) == 2
    assert all(c.content == "x" for c in html_to_grid(bodies[0]).cells if not c.is_header)


def test_http_fill_without_html_key_is_format_error():
    provider = HttpContentProvider(LLMRunner(FixedLLM({"table": "<table></table>"})))
    with pytest.raises(ResponseFormatError):
        provider.fill_headers(skeleton_html(complex_schema()), "t", "d", Language.en)


def test_http_body_with_too_few_variants_is_format_error():
    fragment = "<table><tr><td>a</td></tr></table>"
    provider = HttpContentProvider(LLMRunner(FixedLLM({"html": [fragment]})))
    with pytest.raises(ResponseFormatError):
        provider.fill_bodies(fragment, "t", "d", Language.en, 3)


def test_http_drift_is_reported_with_width_diff():
    provider = HttpContentProvider(LLMRunner(ScriptedLLM(drift_calls={1})))
    with pytest.raises(StructureDriftError) as exc:
        provider.fill_headers(skeleton_html(complex_schema()), "t", "d", Language.en)
    assert exc.value.width_diff == [{"row": 0, "expected": 4, "actual": 5}]


def test_http_topics_are_deduplicated():
    provider = HttpContentProvider(LLMRunner(ScriptedLLM()))
    topics = provider.topic("telecommunication", Language.en, [], 12)
    assert len(topics) == len(set(topics)) == 12


def test_http_topics_run_out():
    provider = HttpContentProvider(LLMRunner(FixedLLM({"phrase": ["same topic"]})))
    with pytest.raises(ResponseFormatError):
        provider.topic("d", Language.en, ["same topic"], 2)


def test_recorded_drift_replays_exactly_once(tmp_path):
    """A transcript with one drifted response raises one drift error on replay."""
    path = str(tmp_path / "transcript.jsonl")
    skeletons = _skeletons(10, seed=5)

    recorder = HttpContentProvider(LLMRunner(RecordingLLM(ScriptedLLM(drift_calls={4}), Transcript(path))))
    recorded_errors = 0
    for html in skeletons:
        try:
            recorder.fill_headers(html, "plan pricing", "telecommunication", Language.en)
        except StructureDriftError:
            recorded_errors += 1
    assert recorded_errors == 1

    replay = HttpContentProvider(LLMRunner(ReplayLLM.from_file(path)))
    replayed_errors = 0
    for html in skeletons:
        try:
            replay.fill_headers(html, "plan pricing", "telecommunication", Language.en)
        except StructureDriftError:
            replayed_errors += 1
    assert replayed_errors == 1


def test_replay_without_recording_fails(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    provider = HttpContentProvider(LLMRunner(ReplayLLM.from_file(str(path))))
    with pytest.raises(ProviderError) as exc:
        provider.fill_headers(skeleton_html(complex_schema()), "t", "d", Language.en)
    assert not exc.value.retryable


def test_http_ranker_reads_both_ranks_from_one_call():
    llm = ScriptedLLM()
    ranker = HttpRanker(LLMRunner(llm))
    html = skeleton_html(complex_schema())
    assert ranker.rank_topic(html, "plan pricing", ["plan", "pricing"]) == 4
    assert ranker.rank_semantics(html, "plan pricing") == 5
    assert llm.calls == 1
