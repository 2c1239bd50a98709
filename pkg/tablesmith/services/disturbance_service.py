"""
Disturbance study: inject corruptions of known severity and measure how well
the filling checker's ranks track them.
"""
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from tablesmith.core.errors import ConfigError, DegenerateInput
from tablesmith.llm.provider import RankerProvider
from tablesmith.schemas.checker import DisturbanceDimension, DisturbanceReport, RankReport
from tablesmith.schemas.table import AnnotationRecord
from tablesmith.services.checker_service import extract_entities, rank_table
from tablesmith.services.correlation_service import kendall_tau, pearson, spearman

logger = logging.getLogger(__name__)

RANK_FIELDS = {
    "structure": "structure_rank",
    "topic": "topic_rank",
    "semantics": "semantic_rank",
}
DEFAULT_LEVELS = (0, 1, 2)

# Ground ordering: severity dominates, the clean rank breaks ties
SEVERITY_WEIGHT = 10

CLOSING_CELL = re.compile(r"</t[hd]\s*>", re.IGNORECASE)
BODY_CELL = re.compile(r"(<td\b[^>]*>)(.*?)(</td\s*>)", re.DOTALL | re.IGNORECASE)


def corrupt_structure(html: str, severity: int, rng: np.random.Generator) -> str:
    """Delete ``severity`` closing cell tags."""
    matches = list(CLOSING_CELL.finditer(html))
    if severity <= 0 or not matches:
        return html
    chosen = sorted(rng.choice(len(matches), size=min(severity, len(matches)), replace=False))
    out, last = [], 0
    for i in chosen:
        out.append(html[last:matches[i].start()])
        last = matches[i].end()
    out.append(html[last:])
    return "".join(out)


def corrupt_topic(topic: str, other_topic: str, severity: int) -> str:
    """Level 1 keeps half of the topic and mixes in another record's; level 2 swaps it."""
    if severity <= 0 or other_topic == topic:
        return topic
    if severity == 1:
        own = extract_entities(topic)
        return " ".join([other_topic, *own[: len(own) // 2]])
    return other_topic


def corrupt_semantics(html: str, severity: int, rng: np.random.Generator) -> str:
    """Level 1 shuffles half of the body cells, level 2 shuffles all and blanks a quarter."""
    matches = list(BODY_CELL.finditer(html))
    if severity <= 0 or len(matches) < 2:
        return html
    contents = [m.group(2) for m in matches]
    if severity == 1:
        picked = rng.choice(len(contents), size=max(2, len(contents) // 2), replace=False)
    else:
        picked = np.arange(len(contents))
    shuffled = list(contents)
    for target, source in zip(picked, rng.permutation(picked)):
        shuffled[target] = contents[source]
    if severity >= 2:
        for i in rng.choice(len(contents), size=max(1, len(contents) // 4), replace=False):
            shuffled[i] = ""

    out, last = [], 0
    for m, text in zip(matches, shuffled):
        out.append(html[last:m.start()])
        out.append(f"{m.group(1)}{text}{m.group(3)}")
        last = m.end()
    out.append(html[last:])
    return "".join(out)


def _coefficient(fn, ground: Sequence[float], ranks: Sequence[float]) -> float:
    # Identical sequences agree perfectly even when constant
    if list(ground) == list(ranks):
        return 1.0
    try:
        return fn(ground, ranks)
    except DegenerateInput:
        logger.warning(f"Correlation undefined for constant ranks, scored 0: fn={fn.__name__}")
        return 0.0


def _mean_half_std(values: List[float]) -> Tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std() / 2)


def disturbance_study(
    records: Sequence[AnnotationRecord],
    perturbations: Sequence[str],
    ranker: RankerProvider,
    repetitions: int = 3,
    levels: Sequence[int] = DEFAULT_LEVELS,
    seed: int = 0,
    workers: Optional[int] = None,
) -> DisturbanceReport:
    """
    Correlate known corruption severity with checker ranks, per perturbation.

    Raises:
        DegenerateInput: no records
        ConfigError: unknown perturbation
    """
    if not records:
        raise DegenerateInput("disturbance study needs at least one record")
    unknown = [p for p in perturbations if p not in RANK_FIELDS]
    if unknown:
        raise ConfigError(f"unknown perturbations {unknown}, expected {sorted(RANK_FIELDS)}")

    n = len(records)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        clean: List[RankReport] = list(pool.map(lambda r: rank_table(r.html, r.topic, ranker), records))

        dimensions = []
        for p_index, perturbation in enumerate(perturbations):
            field = RANK_FIELDS[perturbation]
            clean_ranks = [getattr(report, field) for report in clean]
            coefficients: Dict[str, List[float]] = {"spearman": [], "pearson": [], "kendall": []}
            lowered: List[bool] = []

            for rep in range(repetitions):
                streams = np.random.SeedSequence([seed, p_index, rep]).spawn(n + 1)
                severities = np.random.default_rng(streams[0]).choice(levels, size=n)
                inputs = []
                for i, record in enumerate(records):
                    rng = np.random.default_rng(streams[i + 1])
                    severity = int(severities[i])
                    html, topic = record.html, record.topic
                    if perturbation == "structure":
                        html = corrupt_structure(html, severity, rng)
                    elif perturbation == "topic":
                        topic = corrupt_topic(topic, records[(i + 1) % n].topic, severity)
                    else:
                        html = corrupt_semantics(html, severity, rng)
                    inputs.append((html, topic))

                reports = list(pool.map(lambda item: rank_table(item[0], item[1], ranker), inputs))
                ranks = [getattr(report, field) for report in reports]
                ground = [clean_ranks[i] - SEVERITY_WEIGHT * int(severities[i]) for i in range(n)]

                coefficients["spearman"].append(_coefficient(spearman, ground, ranks))
                coefficients["pearson"].append(_coefficient(pearson, ground, ranks))
                coefficients["kendall"].append(_coefficient(kendall_tau, ground, ranks))
                lowered.extend(ranks[i] < clean_ranks[i] for i in range(n) if severities[i] > 0)

            s_mean, s_half = _mean_half_std(coefficients["spearman"])
            p_mean, p_half = _mean_half_std(coefficients["pearson"])
            k_mean, k_half = _mean_half_std(coefficients["kendall"])
            dimensions.append(DisturbanceDimension(
                perturbation=perturbation,
                spearman_mean=s_mean,
                spearman_half_std=s_half,
                pearson_mean=p_mean,
                pearson_half_std=p_half,
                kendall_mean=k_mean,
                kendall_half_std=k_half,
                repetitions=repetitions,
                strictly_lowered_ratio=(sum(lowered) / len(lowered)) if lowered else None,
            ))
            logger.info(f"Disturbance dimension done: perturbation={perturbation}, spearman={s_mean:.3f}")

    return DisturbanceReport(records=n, dimensions=dimensions)
