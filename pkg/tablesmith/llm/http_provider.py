"""
LLM-backed content provider and ranker.

Both talk to the chat backend through an LLMRunner, so they work the same
against a live endpoint, a recording wrapper or a transcript replay.
"""
import logging
import math
import threading
from typing import Any, Dict, List, Optional, Sequence, Tuple

from tablesmith.core.errors import ResponseFormatError, StructureDriftError
from tablesmith.llm.provider import ContentProvider, RankerProvider
from tablesmith.llm.runner import LLMRunner
from tablesmith.schemas.table import Language
from tablesmith.services.checker_service import clamp_rank, extract_entities, structure_rank_from_defects
from tablesmith.services.table_model import TABLE_ELEMENT, row_widths, splice_table
from tablesmith.services.validator_service import validate_table

logger = logging.getLogger(__name__)

TOPICS_PER_CALL = 5
EXTRA_TOPIC_ROUNDS = 3


def width_diff(expected: Sequence[int], actual: Sequence[int]) -> List[Dict[str, Any]]:
    """Rows whose logical width changed; a missing row has width None."""
    diff = []
    for row in range(max(len(expected), len(actual))):
        want = expected[row] if row < len(expected) else None
        got = actual[row] if row < len(actual) else None
        if want != got:
            diff.append({"row": row, "expected": want, "actual": got})
    return diff


class HttpContentProvider(ContentProvider):
    """Topic, header and body filling through the prompt assets."""

    def __init__(self, runner: LLMRunner):
        self.runner = runner

    def _lang(self, language: Language) -> str:
        return "Chinese" if Language(language) == Language.zh else "English"

    def topic(self, domain: str, language: Language, used_topics: Sequence[str], n: int) -> List[str]:
        used = list(used_topics)
        seen = set(used)
        topics: List[str] = []
        rounds = math.ceil(n / TOPICS_PER_CALL) + EXTRA_TOPIC_ROUNDS
        for _ in range(rounds):
            if len(topics) >= n:
                break
            result = self.runner.run("topic", {
                "domain": domain,
                "lang": self._lang(language),
                "used_topics": used,
                "copy": min(TOPICS_PER_CALL, n - len(topics)),
            })
            phrases = result.get("phrase")
            if isinstance(phrases, str):
                phrases = [phrases]
            if not isinstance(phrases, list):
                raise ResponseFormatError("topic response has no 'phrase' list")
            for phrase in phrases:
                phrase = str(phrase).strip()
                if phrase and phrase not in seen:
                    seen.add(phrase)
                    used.append(phrase)
                    topics.append(phrase)
        if len(topics) < n:
            raise ResponseFormatError(f"provider produced {len(topics)} new topics after {rounds} calls, {n} needed")
        return topics[:n]

    def _checked(self, original: str, filled: Any) -> str:
        """Splice the filled table into ``original`` after comparing row widths."""
        if not isinstance(filled, str):
            raise ResponseFormatError("filled HTML is not a string")
        match = TABLE_ELEMENT.search(filled)
        if match is None:
            raise ResponseFormatError("filled HTML holds no <table>")
        diff = width_diff(row_widths(original), row_widths(match.group()))
        if diff:
            logger.warning(f"Structure drift in filled table: rows_changed={len(diff)}")
            raise StructureDriftError("filled table changed logical row widths", width_diff=diff)
        return splice_table(original, match.group())

    def fill_headers(self, html: str, topic: str, domain: str, language: Language) -> str:
        result = self.runner.run("header_fill", {
            "domain": domain,
            "topic": topic,
            "lang": self._lang(language),
            "HTML_CODE": html,
        })
        if "html" not in result:
            raise ResponseFormatError("header response has no 'html' key")
        filled = result["html"]
        if isinstance(filled, list) and len(filled) == 1:
            filled = filled[0]
        return self._checked(html, filled)

    def fill_bodies(
        self, html: str, topic: str, domain: str, language: Language, n_variants: int = 5
    ) -> List[str]:
        result = self.runner.run("body_fill", {
            "domain": domain,
            "topic": topic,
            "lang": self._lang(language),
            "HTML_CODE": html,
            "copy": n_variants,
        })
        if "html" not in result:
            raise ResponseFormatError("body response has no 'html' key")
        filled = result["html"]
        if isinstance(filled, str):
            filled = [filled]
        if not isinstance(filled, list) or len(filled) < n_variants:
            raise ResponseFormatError(f"body response holds fewer than {n_variants} tables")
        return [self._checked(html, variant) for variant in filled[:n_variants]]


class HttpRanker(RankerProvider):
    """
    One ranking prompt per (table, topic); topic and semantic ranks are read
    from the same response.
    """

    def __init__(self, runner: LLMRunner):
        self.runner = runner
        self._cache: Dict[Tuple[str, str], Dict[str, Any]] = {}
        self._lock = threading.Lock()

    def _ranks(self, html: str, topic: str, entities: Optional[Sequence[str]] = None) -> Dict[str, Any]:
        key = (html, topic)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached

        result = self.runner.run("rank", {
            "topic": topic,
            "entities": list(extract_entities(topic) if entities is None else entities),
            "structure_info": row_widths(html),
            "html_code": html,
            "score": structure_rank_from_defects(validate_table(html).defects),
        })
        with self._lock:
            self._cache[key] = result
        return result

    def rank_topic(self, html: str, topic: str, entities: Sequence[str]) -> int:
        return clamp_rank(self._ranks(html, topic, entities).get("topic_rank"))

    def rank_semantics(self, html: str, topic: str) -> int:
        return clamp_rank(self._ranks(html, topic).get("semantic_rank"))
