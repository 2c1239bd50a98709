"""
Tree edit distance based similarity (TEDS) between HTML tables.

Trees are ordered: table -> tr -> th/td, thead/tbody flattened away. The
distance is the classic keyroot dynamic program over postorder numbering,
with unit insert/delete costs and a fractional substitution cost for cell
text.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import Levenshtein

from tablesmith.core.errors import AlignmentError, InvalidTableError
from tablesmith.schemas.checker import ValidationReport
from tablesmith.schemas.table import AnnotationRecord, PredictionRecord
from tablesmith.schemas.teds import SubsetMeans, TedsMode, TedsReport
from tablesmith.services.table_model import inspect_table

logger = logging.getLogger(__name__)

SUBSET_LABELS = ("is_simple", "is_colored", "is_lined")


@dataclass
class TreeNode:
    tag: str
    rowspan: int = 1
    colspan: int = 1
    text: str = ""
    children: List["TreeNode"] = field(default_factory=list)

    def size(self) -> int:
        return 1 + sum(child.size() for child in self.children)


@dataclass(frozen=True)
class EditCosts:
    insert: float = 1.0
    delete: float = 1.0

    def substitute(self, a: TreeNode, b: TreeNode) -> float:
        if a.tag != b.tag or a.rowspan != b.rowspan or a.colspan != b.colspan:
            return 1.0
        if a.text == b.text:
            return 0.0
        return Levenshtein.distance(a.text, b.text) / max(len(a.text), len(b.text))


def tree_from_html(html: str, mode: TedsMode = TedsMode.full, merge_th_td: bool = False) -> TreeNode:
    """
    Build the table tree of the first table in ``html``.

    Raises:
        InvalidTableError: wrapping the ValidationReport of an unparseable table
    """
    inspection = inspect_table(html)
    if inspection.grid is None:
        report = ValidationReport(valid=False, defects=list(inspection.defects))
        raise InvalidTableError(f"table is invalid: {', '.join(k.value for k in report.kinds())}", report=report)

    keep_text = TedsMode(mode) == TedsMode.full
    root = TreeNode("table")
    for row in inspection.grid.rows_of_cells():
        tr = TreeNode("tr")
        for cell in row:
            tag = "td" if merge_th_td or not cell.is_header else "th"
            tr.children.append(TreeNode(tag, cell.rowspan, cell.colspan, cell.content if keep_text else ""))
        root.children.append(tr)
    return root


def _postorder(root: TreeNode) -> Tuple[List[TreeNode], List[int], List[int]]:
    """Postorder nodes, leftmost-leaf index of each, and the keyroots."""
    nodes: List[TreeNode] = []
    leftmost: List[int] = []

    def walk(node: TreeNode) -> int:
        first_leaf = None
        for child in node.children:
            index = walk(child)
            if first_leaf is None:
                first_leaf = leftmost[index]
        nodes.append(node)
        leftmost.append(len(nodes) - 1 if first_leaf is None else first_leaf)
        return len(nodes) - 1

    walk(root)
    last_with_leaf: Dict[int, int] = {}
    for index, leaf in enumerate(leftmost):
        last_with_leaf[leaf] = index
    return nodes, leftmost, sorted(last_with_leaf.values())


def tree_edit_distance(a: TreeNode, b: TreeNode, costs: Optional[EditCosts] = None) -> float:
    """Minimal cost of insert/delete/substitute operations turning ``a`` into ``b``."""
    costs = costs or EditCosts()
    a_nodes, a_left, a_keys = _postorder(a)
    b_nodes, b_left, b_keys = _postorder(b)
    tree_dist = [[0.0] * len(b_nodes) for _ in range(len(a_nodes))]

    for i in a_keys:
        for j in b_keys:
            li, lj = a_left[i], b_left[j]
            rows, cols = i - li + 2, j - lj + 2
            forest = [[0.0] * cols for _ in range(rows)]
            for x in range(1, rows):
                forest[x][0] = forest[x - 1][0] + costs.delete
            for y in range(1, cols):
                forest[0][y] = forest[0][y - 1] + costs.insert

            for x in range(1, rows):
                ax = li + x - 1
                for y in range(1, cols):
                    by = lj + y - 1
                    if a_left[ax] == li and b_left[by] == lj:
                        value = min(
                            forest[x - 1][y] + costs.delete,
                            forest[x][y - 1] + costs.insert,
                            forest[x - 1][y - 1] + costs.substitute(a_nodes[ax], b_nodes[by]),
                        )
                        forest[x][y] = value
                        tree_dist[ax][by] = value
                    else:
                        p = a_left[ax] - li
                        q = b_left[by] - lj
                        forest[x][y] = min(
                            forest[x - 1][y] + costs.delete,
                            forest[x][y - 1] + costs.insert,
                            forest[p][q] + tree_dist[ax][by],
                        )
    return tree_dist[-1][-1]


def teds_trees(a: TreeNode, b: TreeNode) -> float:
    return 1.0 - tree_edit_distance(a, b) / max(a.size(), b.size())


def teds(html_a: str, html_b: str, mode: TedsMode = TedsMode.full, merge_th_td: bool = False) -> float:
    """
    Similarity in [0, 1]; 1 for identical trees.

    Raises:
        InvalidTableError: either side does not parse
    """
    return teds_trees(tree_from_html(html_a, mode, merge_th_td), tree_from_html(html_b, mode, merge_th_td))


def _score_pair(pred_html: str, gold_tree: TreeNode, mode: TedsMode, merge_th_td: bool) -> Optional[float]:
    try:
        pred_tree = tree_from_html(pred_html, mode, merge_th_td)
    except InvalidTableError:
        return None
    return teds_trees(pred_tree, gold_tree)


def batch_teds(
    predictions: Sequence[PredictionRecord],
    gold: Sequence[AnnotationRecord],
    mode: TedsMode = TedsMode.full,
    merge_th_td: bool = False,
    workers: Optional[int] = None,
) -> TedsReport:
    """
    Score predictions against gold records matched by id.

    Invalid predictions score 0 and are listed. Subset means group by the gold
    record's labels.

    Raises:
        AlignmentError: the two id sets differ
        InvalidTableError: a gold table does not parse
    """
    pred_by_id = {p.id: p for p in predictions}
    gold_by_id = {g.id: g for g in gold}
    missing_pred = sorted(set(gold_by_id) - set(pred_by_id))
    missing_gold = sorted(set(pred_by_id) - set(gold_by_id))
    if missing_pred or missing_gold:
        raise AlignmentError(
            f"manifests do not align: {len(missing_pred)} gold ids without prediction, "
            f"{len(missing_gold)} predictions without gold",
            missing_predictions=missing_pred,
            missing_gold=missing_gold,
        )

    ids = [g.id for g in gold]
    gold_trees = {g.id: tree_from_html(g.html, mode, merge_th_td) for g in gold}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        raw = list(pool.map(
            lambda record_id: _score_pair(pred_by_id[record_id].html, gold_trees[record_id], mode, merge_th_td),
            ids,
        ))

    scores = {record_id: (score if score is not None else 0.0) for record_id, score in zip(ids, raw)}
    invalid_ids = [record_id for record_id, score in zip(ids, raw) if score is None]
    if invalid_ids:
        logger.warning(f"Invalid predictions scored 0: count={len(invalid_ids)}")

    subsets = {}
    for label in SUBSET_LABELS:
        groups: Dict[bool, List[float]] = {True: [], False: []}
        for record_id in ids:
            groups[bool(getattr(gold_by_id[record_id].labels, label))].append(scores[record_id])
        subsets[label] = SubsetMeans(
            true=sum(groups[True]) / len(groups[True]) if groups[True] else None,
            false=sum(groups[False]) / len(groups[False]) if groups[False] else None,
            n_true=len(groups[True]),
            n_false=len(groups[False]),
        )

    return TedsReport(
        mode=TedsMode(mode),
        merge_th_td=merge_th_td,
        n=len(ids),
        mean=sum(scores.values()) / len(ids) if ids else 0.0,
        subsets=subsets,
        invalid=len(invalid_ids),
        invalid_ids=invalid_ids,
        scores=scores,
    )
