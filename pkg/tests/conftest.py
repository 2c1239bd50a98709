"""
Shared fixtures and small table builders.
"""
import json
import re

import pytest

from tablesmith.core.errors import ProviderError
from tablesmith.llm.provider import LLMProvider, LLMResponse
from tablesmith.llm.template_provider import TemplateProvider
from tablesmith.schemas.generation import GenerationRequest
from tablesmith.services.checker_service import FillingChecker, SurrogateRanker
from tablesmith.services.table_model import TABLE_ELEMENT, TableSchema, grid_from_schema, grid_to_html, html_to_grid, table_fragment


def complex_schema() -> TableSchema:
    """4x4, one 2x2 block under a single header row."""
    return TableSchema(
        n_rows=4,
        n_cols=4,
        row_span_matrix=[[1, 1, 1, 1], [2, 0, 1, 1], [0, 0, 1, 1], [1, 1, 1, 1]],
        col_span_matrix=[[1, 1, 1, 1], [2, 0, 1, 1], [0, 0, 1, 1], [1, 1, 1, 1]],
    )


def skeleton_html(schema: TableSchema) -> str:
    return grid_to_html(grid_from_schema(schema), schema.style)


class ScriptedLLM(LLMProvider):
    """
    Answers header/body fill prompts by writing "x" into every cell of the
    table found in the prompt. Calls listed in ``drift_calls`` get an extra
    cell in their first row.
    """

    def __init__(self, drift_calls=()):
        self.calls = 0
        self.drift_calls = set(drift_calls)

    def chat(self, messages, model, temperature=0.7, max_tokens=None, **kwargs):
        prompt = messages[-1]["content"]
        self.calls += 1
        if "Topic Generation" in prompt:
            copy = int(re.search(r"Propose (\d+)", prompt).group(1))
            start = self.calls * 100
            return LLMResponse(content=json.dumps({"phrase": [f"plan pricing {start + i}" for i in range(copy)]}),
                               model=model)
        if "Ranking" in prompt:
            return LLMResponse(content=json.dumps({
                "structure_rank": 5, "topic_rank": 4, "semantic_rank": 5, "rank": 4, "reasons": [],
            }), model=model)

        grid = html_to_grid(TABLE_ELEMENT.search(prompt).group())
        fragment = table_fragment(grid.with_contents([c.content or "x" for c in grid.cells]))
        if self.calls in self.drift_calls:
            fragment = fragment.replace("</tr>", "<td>extra</td></tr>", 1)
        if "Body Filling" in prompt:
            copy = int(re.search(r"Produce (\d+)", prompt).group(1))
            body = {"html": [fragment] * copy}
        else:
            body = {"html": fragment}
        return LLMResponse(content=json.dumps(body), tokens_in=10, tokens_out=10, model=model)


class UnreachableLLM(LLMProvider):
    def chat(self, messages, model, temperature=0.7, max_tokens=None, **kwargs):
        raise ProviderError("connection refused", retryable=True)


@pytest.fixture
def template_provider():
    return TemplateProvider(seed=7)


@pytest.fixture
def checker():
    return FillingChecker(SurrogateRanker(), min_overall=3)


@pytest.fixture
def request_8():
    return GenerationRequest(count=8, seed=7)
