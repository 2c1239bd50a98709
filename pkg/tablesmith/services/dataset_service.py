"""
Dataset-level reports and splits over annotation records.
"""
import logging
from collections import Counter, defaultdict
from typing import Dict, List, Sequence, Tuple

import numpy as np

from tablesmith.core.errors import ConfigError
from tablesmith.schemas.generation import AttributeCombo
from tablesmith.schemas.table import AnnotationRecord

logger = logging.getLogger(__name__)

COMPOSITION_FIELDS = ("line_style", "header_layout", "is_simple", "is_colored", "is_lined")


def record_combo(record: AnnotationRecord) -> AttributeCombo:
    labels = record.labels
    return AttributeCombo(simple=labels.is_simple, colored=labels.is_colored, lined=labels.is_lined)


def composition(records: Sequence[AnnotationRecord]) -> Dict[str, Dict[str, int]]:
    """Record counts per label value, plus per attribute combo."""
    report: Dict[str, Dict[str, int]] = {name: {} for name in COMPOSITION_FIELDS}
    for name in COMPOSITION_FIELDS:
        counts = Counter()
        for record in records:
            value = getattr(record.labels, name)
            counts[value.value if hasattr(value, "value") else str(value).lower()] += 1
        report[name] = dict(sorted(counts.items()))
    report["combo"] = dict(sorted(Counter(record_combo(r).key for r in records).items()))
    report["total"] = {"records": len(records)}
    return report


def split_manifest(
    records: Sequence[AnnotationRecord],
    ratios: Sequence[float],
    seed: int = 0,
) -> List[List[AnnotationRecord]]:
    """
    Split records into ``len(ratios)`` parts, stratified by attribute combo.

    Each combo group is shuffled with the seed and cut by cumulative ratio,
    so every part holds roughly the same combo mix. Input order is kept
    within each part.
    """
    ratios = [float(r) for r in ratios]
    if not ratios or any(r < 0 for r in ratios) or sum(ratios) <= 0:
        raise ConfigError(f"split ratios {ratios} must be nonnegative with a positive sum")
    weights = np.asarray(ratios) / sum(ratios)

    groups: Dict[str, List[int]] = defaultdict(list)
    for i, record in enumerate(records):
        groups[record_combo(record).key].append(i)

    rng = np.random.default_rng(seed)
    assignment: Dict[int, int] = {}
    for key in sorted(groups):
        members = groups[key]
        shuffled = [members[i] for i in rng.permutation(len(members))]
        bounds = np.round(np.cumsum(weights) * len(members)).astype(int)
        start = 0
        for part, end in enumerate(bounds):
            for index in shuffled[start:end]:
                assignment[index] = part
            start = end

    parts: List[List[AnnotationRecord]] = [[] for _ in ratios]
    for i, record in enumerate(records):
        parts[assignment[i]].append(record)
    logger.info(f"Split manifest: records={len(records)}, parts={[len(p) for p in parts]}")
    return parts


def parse_ratios(text: str) -> Tuple[float, ...]:
    """``"0.8,0.2"`` -> (0.8, 0.2)"""
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"cannot parse split ratios: {text!r}")
