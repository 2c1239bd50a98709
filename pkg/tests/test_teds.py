"""
Tests for tree edit distance and TEDS scoring.
"""
from functools import lru_cache

import numpy as np
import pytest

from tablesmith.core.errors import AlignmentError, InvalidTableError
from tablesmith.schemas.table import Language, PredictionRecord
from tablesmith.schemas.teds import TedsMode
from tablesmith.services.teds_service import TreeNode, batch_teds, teds, teds_trees, tree_edit_distance, tree_from_html
from tablesmith.services.table_model import build_record, grid_from_schema
from tests.conftest import complex_schema, skeleton_html

LABELS = ("a", "b", "c")


def _random_tree(rng, max_nodes=8):
    n = int(rng.integers(1, max_nodes + 1))
    nodes = [TreeNode(LABELS[int(rng.integers(3))]) for _ in range(n)]
    for i in range(1, n):
        nodes[int(rng.integers(i))].children.append(nodes[i])
    return nodes[0]


def _frozen(node):
    return node.tag, tuple(_frozen(child) for child in node.children)


def _size(forest):
    return sum(1 + _size(children) for _, children in forest)


@lru_cache(maxsize=None)
def _forest_distance(f, g):
    """Exhaustive recursion over the rightmost roots of both forests."""
    if not f:
        return _size(g)
    if not g:
        return _size(f)
    (v_label, v_children), (w_label, w_children) = f[-1], g[-1]
    return min(
        _forest_distance(f[:-1] + v_children, g) + 1,
        _forest_distance(f, g[:-1] + w_children) + 1,
        _forest_distance(v_children, w_children) + _forest_distance(f[:-1], g[:-1]) + (v_label != w_label),
    )


def _oracle(a, b):
    return _forest_distance((_frozen(a),), (_frozen(b),))


def test_distance_matches_exhaustive_search():
    """Five hundred random pairs of small ordered trees."""
    rng = np.random.default_rng(0)
    for _ in range(500):
        a, b = _random_tree(rng), _random_tree(rng)
        assert tree_edit_distance(a, b) == _oracle(a, b)


def test_distance_basics():
    leaf = TreeNode("a")
    assert tree_edit_distance(leaf, TreeNode("a")) == 0
    assert tree_edit_distance(leaf, TreeNode("b")) == 1
    assert tree_edit_distance(leaf, TreeNode("a", children=[TreeNode("b"), TreeNode("c")])) == 2


TABLE = "<table><tr><th>Plan</th><th>Fee</th></tr><tr><td>ab</td><td>10</td></tr></table>"


def test_identical_tables_score_one():
    assert teds(TABLE, TABLE) == 1.0
    assert teds(TABLE, TABLE, TedsMode.structure) == 1.0


def test_full_text_substitution_costs_one_node():
    """Seven nodes, one cell text fully replaced."""
    other = TABLE.replace("<td>ab</td>", "<td>cd</td>")
    assert teds(TABLE, other) == pytest.approx(1 - 1 / 7)
    assert teds(TABLE, other, TedsMode.structure) == 1.0


def test_partial_text_substitution_is_fractional():
    other = TABLE.replace("<td>ab</td>", "<td>ac</td>")
    assert teds(TABLE, other) == pytest.approx(1 - 0.5 / 7)


def test_structure_mode_ignores_content(template_provider):
    html = skeleton_html(complex_schema())
    filled = template_provider.fill_headers(html, "5G plans", "telecommunication", Language.en)
    filled = template_provider.fill_bodies(filled, "5G plans", "telecommunication", Language.en, 1)[0]
    assert teds(html, filled, TedsMode.structure) == 1.0
    assert teds(html, filled) < 1.0


def test_deleting_leaves_degrades_monotonically():
    tree = tree_from_html(skeleton_html(complex_schema()))
    scores = []
    for k in range(1, 6):
        pruned = tree_from_html(skeleton_html(complex_schema()))
        removed = 0
        for row in pruned.children:
            while row.children and removed < k:
                row.children.pop()
                removed += 1
        scores.append(teds_trees(tree, pruned))
    assert all(a > b for a, b in zip(scores, scores[1:]))


def test_thead_tbody_are_ignored():
    wrapped = TABLE.replace("<table>", "<table><thead>").replace("</tr><tr>", "</tr></thead><tbody><tr>", 1)
    wrapped = wrapped.replace("</table>", "</tbody></table>")
    assert teds(TABLE, wrapped) == 1.0


def test_header_tags_count_unless_merged():
    all_td = TABLE.replace("th>", "td>")
    assert teds(TABLE, all_td, TedsMode.structure) < 1.0
    assert teds(TABLE, all_td, TedsMode.structure, merge_th_td=True) == 1.0


def test_invalid_table_raises_with_report():
    with pytest.raises(InvalidTableError) as exc:
        teds(TABLE, "<table><tr><td>a</td></tr><tr><td>b</td><td>c</td></tr></table>")
    assert not exc.value.report.valid


def _gold(n):
    grid = grid_from_schema(complex_schema()).with_contents([f"c{i}" for i in range(13)])
    return [build_record(f"t{i}", grid, None, topic="plans") for i in range(n)]


def test_batch_teds_self_comparison():
    gold = _gold(3)
    predictions = [PredictionRecord(id=r.id, html=r.html) for r in gold]
    report = batch_teds(predictions, gold, TedsMode.full)
    assert report.mean == 1.0
    assert report.n == 3 and report.invalid == 0
    assert report.subsets["is_simple"].false == 1.0
    assert report.subsets["is_simple"].true is None


def test_batch_teds_scores_invalid_predictions_zero():
    gold = _gold(2)
    predictions = [PredictionRecord(id="t0", html=gold[0].html), PredictionRecord(id="t1", html="<p>none</p>")]
    report = batch_teds(predictions, gold, TedsMode.structure)
    assert report.scores == {"t0": 1.0, "t1": 0.0}
    assert report.invalid_ids == ["t1"]
    assert report.mean == 0.5


def test_batch_teds_requires_aligned_ids():
    gold = _gold(2)
    with pytest.raises(AlignmentError) as exc:
        batch_teds([PredictionRecord(id="t0", html=gold[0].html)], gold)
    assert exc.value.details["missing_predictions"] == ["t1"]
