"""
Tests for rank correlation helpers.
"""
import numpy as np
import pytest

from tablesmith.core.errors import DegenerateInput
from tablesmith.services.correlation_service import correlate, kendall_tau, pearson, spearman

COEFFICIENTS = [spearman, pearson, kendall_tau]


@pytest.mark.parametrize("fn", COEFFICIENTS)
def test_identical_and_reversed(fn):
    assert fn([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]) == pytest.approx(1.0)
    assert fn([1, 2, 3, 4, 5], [5, 4, 3, 2, 1]) == pytest.approx(-1.0)


def test_kendall_single_swap():
    """One discordant pair out of six."""
    assert kendall_tau([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(2 / 3)


def test_spearman_single_swap():
    # 1 - 6 * 2 / (4 * 15)
    assert spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)


@pytest.mark.parametrize("fn", COEFFICIENTS)
def test_symmetry(fn):
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(3, 20))
        xs = rng.integers(1, 6, size=n).tolist()
        ys = rng.integers(1, 6, size=n).tolist()
        if len(set(xs)) < 2 or len(set(ys)) < 2:
            continue
        assert fn(xs, ys) == pytest.approx(fn(ys, xs), abs=1e-12)


@pytest.mark.parametrize("xs,ys", [
    ([1, 1, 1], [1, 2, 3]),
    ([1, 2], [1, 2, 3]),
    ([1], [1]),
])
def test_degenerate_inputs(xs, ys):
    with pytest.raises(DegenerateInput):
        spearman(xs, ys)


def test_correlate_summary():
    summary = correlate([1, 2, 3, 4], [1, 3, 2, 4])
    assert summary.n == 4
    assert summary.kendall_tau == pytest.approx(2 / 3)
    assert -1.0 <= summary.pearson <= 1.0
