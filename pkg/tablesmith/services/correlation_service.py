"""
Rank correlations between two scorings of the same items.
"""
import logging
from typing import Sequence

import numpy as np
from scipy import stats

from tablesmith.core.errors import DegenerateInput
from tablesmith.schemas.checker import CorrelationSummary

logger = logging.getLogger(__name__)


def _as_arrays(xs: Sequence[float], ys: Sequence[float]):
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DegenerateInput(f"sequences must have equal length, got {len(xs)} and {len(ys)}")
    if len(x) < 2:
        raise DegenerateInput("at least two paired values are required")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise DegenerateInput("correlation undefined: a sequence has zero variance")
    return x, y


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman's rho; ties take average ranks."""
    x, y = _as_arrays(xs, ys)
    return float(stats.spearmanr(x, y).statistic)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x, y = _as_arrays(xs, ys)
    return float(stats.pearsonr(x, y).statistic)


def kendall_tau(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Kendall's tau-b (tie-corrected)."""
    x, y = _as_arrays(xs, ys)
    return float(stats.kendalltau(x, y, variant="b").statistic)


def correlate(xs: Sequence[float], ys: Sequence[float]) -> CorrelationSummary:
    return CorrelationSummary(
        spearman=spearman(xs, ys),
        pearson=pearson(xs, ys),
        kendall_tau=kendall_tau(xs, ys),
        n=len(xs),
    )
