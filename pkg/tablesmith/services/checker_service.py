"""
Filling checker: heuristic structure rank combined with provider-backed
topic and semantic ranks.
"""
import logging
import re
from collections import Counter
from typing import Dict, List, Optional, Sequence

from tablesmith.core.errors import RankerError, TablesmithError
from tablesmith.llm.provider import RankerProvider
from tablesmith.schemas.checker import Defect, DefectKind, RankReport
from tablesmith.services.html_table_parser import scan_table
from tablesmith.services.table_model import inspect_table
from tablesmith.services.validator_service import validate_table

logger = logging.getLogger(__name__)

# Deduction per defect occurrence
STRUCTURE_PENALTIES: Dict[DefectKind, int] = {
    DefectKind.RaggedRows: 2,
    DefectKind.OverlappingSpans: 2,
    DefectKind.SpanOutOfBounds: 2,
    DefectKind.DisallowedTag: 1,
    DefectKind.MalformedMarkup: 2,
}

# Defects that pin the rank to the floor
FLOOR_DEFECTS = {DefectKind.EmptyStructure, DefectKind.MissingTable}

TOPIC_THRESHOLDS = ((0.6, 5), (0.4, 4), (0.25, 3), (0.1, 2))

NUMERIC_CELL = re.compile(r"^[^\d\s]{0,2}\s?[-+]?\d[\d,]*(\.\d+)?\s?[^\d\s]{0,6}$")
LATIN_TOKEN = re.compile(r"[a-z0-9][a-z0-9\-+.]*")
CJK_RUN = re.compile(r"[一-鿿]+")

STOPWORDS = {"the", "of", "and", "for", "in", "on", "a", "an", "to", "with", "by", "at", "or"}


def structure_rank_from_defects(defects: Sequence[Defect]) -> int:
    if any(d.kind in FLOOR_DEFECTS for d in defects):
        return 1
    rank = 5 - sum(STRUCTURE_PENALTIES.get(d.kind, 0) for d in defects)
    return max(1, rank)


def structure_rank(html: str) -> int:
    """5 for a defect-free table, minus the penalty of every defect, floor 1."""
    return structure_rank_from_defects(validate_table(html).defects)


def extract_entities(topic: str) -> List[str]:
    """
    Approximate the noun phrases of a topic.

    Latin tokens (stopwords dropped) plus CJK runs, split into bigrams when
    longer than two characters.
    """
    text = topic.lower()
    entities: List[str] = []
    for token in LATIN_TOKEN.findall(text):
        token = token.strip(".")
        if len(token) >= 2 and token not in STOPWORDS:
            entities.append(token)
    for run in CJK_RUN.findall(text):
        if len(run) <= 2:
            entities.append(run)
        else:
            entities.extend(run[i:i + 2] for i in range(len(run) - 1))
    return list(dict.fromkeys(entities))


def clamp_rank(value) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= 5:
        raise RankerError(f"ranker returned {value!r}, expected an integer in [1, 5]")
    return value


def rank_table(html: str, topic: str, ranker: RankerProvider) -> RankReport:
    """
    Structure rank from the validator plus the ranker's topic and semantic ranks.

    Raises:
        RankerError: ranker failed or answered out of range
    """
    entities = extract_entities(topic)
    try:
        topic_rank = ranker.rank_topic(html, topic, entities)
        semantic_rank = ranker.rank_semantics(html, topic)
    except RankerError:
        raise
    except TablesmithError as e:
        raise RankerError(f"ranker failed: {e.message}") from e
    except Exception as e:
        logger.error(f"Ranker error: {e}", exc_info=True)
        raise RankerError(f"ranker failed: {e}") from e
    return RankReport(
        structure_rank=structure_rank(html),
        topic_rank=clamp_rank(topic_rank),
        semantic_rank=clamp_rank(semantic_rank),
    )


class FillingChecker:
    """Accepts a filled table when its overall rank reaches ``min_overall``."""

    def __init__(self, ranker: RankerProvider, min_overall: int = 3):
        self.ranker = ranker
        self.min_overall = min_overall

    def check(self, html: str, topic: str) -> RankReport:
        return rank_table(html, topic, self.ranker)

    def accepts(self, report: RankReport) -> bool:
        return report.overall >= self.min_overall


# ============================================
# Surrogate ranker
# ============================================

def _is_empty(text: str) -> bool:
    # "N/A", "-" and "TBD" count as content
    return not text.strip()


def _cell_kind(text: str) -> str:
    return "number" if NUMERIC_CELL.match(text.strip()) else "text"


class SurrogateRanker(RankerProvider):
    """
    Deterministic stand-in for an LLM ranker, used at desk scale and in tests.

    Topic rank comes from the share of topic entities found in the cell text.
    Semantic rank starts at 5 and loses points for empty cells and for
    columns mixing numbers and text.
    """

    def rank_topic(self, html: str, topic: str, entities: Sequence[str]) -> int:
        if not entities:
            return 1
        scan = scan_table(html)
        text = " ".join(cell.text for row in scan.rows for cell in row.cells).lower()
        overlap = sum(1 for e in entities if e.lower() in text) / len(entities)
        for threshold, rank in TOPIC_THRESHOLDS:
            if overlap >= threshold:
                return rank
        return 1

    def rank_semantics(self, html: str, topic: str) -> int:
        scan = scan_table(html)
        cells = [cell for row in scan.rows for cell in row.cells]
        if not cells:
            return 1
        empty_ratio = sum(1 for c in cells if _is_empty(c.text)) / len(cells)
        rank = 5 - round(empty_ratio * 4)

        agreement = self._column_agreement(html)
        if agreement is not None:
            if agreement < 0.8:
                rank -= 1
            if agreement < 0.5:
                rank -= 1
        return max(1, min(5, rank))

    def _column_agreement(self, html: str) -> Optional[float]:
        """Mean share of body cells per column that match the column's majority kind."""
        grid = inspect_table(html).grid
        if grid is None:
            return None
        columns: Dict[int, List[str]] = {}
        for cell in grid.cells:
            if not cell.is_header and cell.content.strip():
                columns.setdefault(cell.col_start, []).append(_cell_kind(cell.content))
        shares = [
            Counter(kinds).most_common(1)[0][1] / len(kinds)
            for kinds in columns.values()
            if len(kinds) >= 2
        ]
        if not shares:
            return None
        return sum(shares) / len(shares)
