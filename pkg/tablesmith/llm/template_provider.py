"""
Deterministic content provider backed by bundled word lists.

Every output is a pure function of (seed, inputs), so batches built with it
reproduce byte for byte.
"""
import hashlib
import logging
import threading
from typing import List, Sequence, Set

import numpy as np

from tablesmith.llm.lexicon import Lexicon, get_lexicon
from tablesmith.llm.provider import ContentProvider
from tablesmith.schemas.table import Language
from tablesmith.services.table_model import html_to_grid, splice_table

logger = logging.getLogger(__name__)

NUMERIC_COLUMN_SHARE = 0.5
MAX_VARIANT_ATTEMPTS = 20


def _cycle(items: Sequence[str], k: int) -> str:
    """k-th label, numbered once the list runs out so labels stay distinct."""
    label = items[k % len(items)]
    return label if k < len(items) else f"{label} {k // len(items) + 1}"


class TemplateProvider(ContentProvider):
    def __init__(self, seed: int = 0):
        self.seed = seed
        self.fallback_domains: Set[str] = set()
        self._lock = threading.Lock()

    @property
    def used_fallback(self) -> bool:
        """True once an unknown domain was served from the generic lexicon."""
        return bool(self.fallback_domains)

    def _rng(self, *parts) -> np.random.Generator:
        text = "|".join([str(self.seed), *(str(p) for p in parts)])
        digest = hashlib.sha256(text.encode("utf-8")).digest()
        return np.random.default_rng(int.from_bytes(digest[:8], "little"))

    def _lexicon(self, domain: str, language: Language) -> Lexicon:
        lexicon, fallback = get_lexicon(domain, language)
        if fallback:
            with self._lock:
                self.fallback_domains.add(domain)
        return lexicon

    def topic(self, domain: str, language: Language, used_topics: Sequence[str], n: int) -> List[str]:
        lexicon = self._lexicon(domain, language)
        used = set(used_topics)
        candidates = [lexicon.topic_phrase(k, f) for k in lexicon.keywords for f in lexicon.facets]
        rng = self._rng("topic", domain, Language(language).value, len(used))
        order = rng.permutation(len(candidates))

        topics: List[str] = []
        round_no = 1
        while len(topics) < n:
            for i in order:
                phrase = candidates[i] if round_no == 1 else f"{candidates[i]} ({round_no})"
                if phrase in used:
                    continue
                topics.append(phrase)
                used.add(phrase)
                if len(topics) == n:
                    break
            round_no += 1
        return topics

    def fill_headers(self, html: str, topic: str, domain: str, language: Language) -> str:
        grid = html_to_grid(html)
        lexicon = self._lexicon(domain, language)
        rng = self._rng("headers", topic, grid.structure_key())
        fields = [str(x) for x in rng.permutation(lexicon.fields)]
        row_labels = [str(x) for x in rng.permutation(lexicon.row_labels)]
        groups = [str(x) for x in rng.permutation(lexicon.groups)]

        contents = grid.contents()
        counters = {"field": 0, "row": 0, "group": 0}
        first = True
        for index, cell in enumerate(grid.cells):
            if not cell.is_header:
                continue
            if first:
                contents[index] = topic
                first = False
            elif cell.is_spanning:
                contents[index] = _cycle(groups, counters["group"])
                counters["group"] += 1
            elif cell.col_start == 0 and cell.row_start > 0:
                contents[index] = _cycle(row_labels, counters["row"])
                counters["row"] += 1
            else:
                contents[index] = _cycle(fields, counters["field"])
                counters["field"] += 1
        return splice_table(html, grid.with_contents(contents))

    def _number(self, rng: np.random.Generator, unit: str) -> str:
        value = int(rng.integers(1, 1000))
        if rng.random() < 0.5:
            text = f"{value + int(rng.integers(0, 100)) / 100:.2f}"
        else:
            text = f"{value:,}"
        return f"{text}{unit}" if unit == "%" else f"{text} {unit}"

    def fill_bodies(
        self, html: str, topic: str, domain: str, language: Language, n_variants: int = 5
    ) -> List[str]:
        grid = html_to_grid(html)
        lexicon = self._lexicon(domain, language)

        # Column types are fixed per topic so every variant agrees with its headers
        kinds = self._rng("columns", topic, grid.n_cols)
        numeric = [bool(kinds.random() < NUMERIC_COLUMN_SHARE) for _ in range(grid.n_cols)]
        units = [lexicon.units[int(kinds.integers(len(lexicon.units)))] for _ in range(grid.n_cols)]

        body = [i for i, cell in enumerate(grid.cells) if not cell.is_header]
        has_header = len(body) < len(grid.cells)

        variants: List[str] = []
        seen = set()
        attempt = 0
        while len(variants) < n_variants:
            rng = self._rng("body", topic, grid.structure_key(), attempt)
            attempt += 1
            contents = grid.contents()
            for index in body:
                col = grid.cells[index].col_start
                if numeric[col]:
                    contents[index] = self._number(rng, units[col])
                else:
                    contents[index] = lexicon.text_values[int(rng.integers(len(lexicon.text_values)))]
            if not has_header and body:
                contents[body[0]] = topic
            key = tuple(contents[i] for i in body)
            if key in seen and attempt < n_variants * MAX_VARIANT_ATTEMPTS:
                continue
            seen.add(key)
            variants.append(splice_table(html, grid.with_contents(contents)))
        return variants
