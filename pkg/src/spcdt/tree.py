"""Binary threshold decision trees: prediction, evaluation, stats, editing.

Trees are immutable: nodes live in a tuple arena indexed by node_id and every
edit returns a new tree.  The split convention is ``value < t`` to the low
child and ``value >= t`` to the high child; equality always goes high.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterator

from .dataset import Case, Dataset


class TreeError(ValueError):
    """Raised for structurally invalid trees or bad edits."""


class TreeFormatError(TreeError):
    """Raised when tree text or JSON cannot be decoded."""


@dataclass(frozen=True)
class SplitNode:
    node_id: int
    attribute: str
    threshold: float
    low: int   # child taken when value < threshold
    high: int  # child taken when value >= threshold


@dataclass(frozen=True)
class LeafNode:
    node_id: int
    class_name: str
    purity_pct: float = 100.0
    count: int = 0


Node = SplitNode | LeafNode


@dataclass(frozen=True)
class DecisionTree:
    root: int
    nodes: tuple[Node, ...]

    def node(self, node_id: int) -> Node:
        try:
            n = self.nodes[node_id]
        except IndexError:
            raise TreeError(f"unknown node id {node_id}") from None
        return n

    def splits(self) -> Iterator[SplitNode]:
        return (n for n in self.nodes if isinstance(n, SplitNode))

    def leaves(self) -> Iterator[LeafNode]:
        return (n for n in self.nodes if isinstance(n, LeafNode))

    @property
    def split_count(self) -> int:
        return sum(1 for _ in self.splits())

    @property
    def leaf_count(self) -> int:
        return sum(1 for _ in self.leaves())

    def attributes_used(self) -> tuple[str, ...]:
        seen: list[str] = []
        for n in self.nodes:
            if isinstance(n, SplitNode) and n.attribute not in seen:
                seen.append(n.attribute)
        return tuple(seen)

    def subtree_count(self, node_id: int) -> int:
        """Training cases under a node, summed from leaf annotations."""
        n = self.node(node_id)
        if isinstance(n, LeafNode):
            return n.count
        return self.subtree_count(n.low) + self.subtree_count(n.high)

    def validate(self) -> None:
        if self.leaf_count != self.split_count + 1:
            raise TreeError("tree is not a proper binary tree")
        ids = [n.node_id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise TreeError("duplicate node ids")


@dataclass(frozen=True)
class Prediction:
    class_name: str
    leaf_id: int
    path: tuple[tuple[int, str], ...]  # (node_id, "low"|"high") for every split visited


def route_at_split(tree: DecisionTree, node: SplitNode, value: float | None) -> int:
    """Child id for a value at a split; equality goes high.

    A missing value follows the child that received more training cases
    (falling back to the low child when counts are unavailable or tied).
    """
    if value is None:
        low_n = tree.subtree_count(node.low)
        high_n = tree.subtree_count(node.high)
        return node.high if high_n > low_n else node.low
    return node.low if value < node.threshold else node.high


def predict(tree: DecisionTree, case: Case, dataset: Dataset) -> Prediction:
    """Trace a case from the root to a leaf; total and deterministic."""
    path: list[tuple[int, str]] = []
    node = tree.node(tree.root)
    while isinstance(node, SplitNode):
        value = case.values[dataset.attribute_index(node.attribute)]
        child = route_at_split(tree, node, value)
        path.append((node.node_id, "low" if child == node.low else "high"))
        node = tree.node(child)
    return Prediction(node.class_name, node.node_id, tuple(path))


@dataclass(frozen=True)
class EvaluationReport:
    classes: tuple[str, ...]
    confusion: tuple[tuple[int, ...], ...]  # [actual][predicted]
    total: int

    @property
    def error_rate(self) -> float:
        if self.total == 0:
            return 0.0
        correct = sum(self.confusion[i][i] for i in range(len(self.classes)))
        return 1.0 - correct / self.total

    def row_sum(self, c: str) -> int:
        return sum(self.confusion[self.classes.index(c)])

    def col_sum(self, c: str) -> int:
        j = self.classes.index(c)
        return sum(row[j] for row in self.confusion)

    def recall(self, c: str) -> float:
        i = self.classes.index(c)
        rs = self.row_sum(c)
        return self.confusion[i][i] / rs if rs else 0.0

    def one_minus_precision(self, c: str) -> float:
        i = self.classes.index(c)
        cs = self.col_sum(c)
        return 1.0 - self.confusion[i][i] / cs if cs else 0.0

    def to_json_dict(self) -> dict:
        return {
            "error_rate": self.error_rate,
            "classes": list(self.classes),
            "confusion": [list(r) for r in self.confusion],
            "per_class": {
                c: {
                    "recall": self.recall(c),
                    "one_minus_precision": self.one_minus_precision(c),
                }
                for c in self.classes
            },
            "total": self.total,
        }

    def to_text(self) -> str:
        """Aligned report: error rate, per-class values, confusion matrix."""
        name_w = max(len("Value"), *(len(c) for c in self.classes))
        lines = [f"Error rate  {self.error_rate:.4f}", ""]
        header = (
            f"{'Value':<{name_w}}  {'Recall':>8}  {'1-Precision':>11}  | "
            + "  ".join(f"{c:>{max(len(c), 5)}}" for c in self.classes)
            + f"  {'Sum':>5}"
        )
        lines.append(header)
        for i, c in enumerate(self.classes):
            cells = "  ".join(
                f"{self.confusion[i][j]:>{max(len(cj), 5)}}" for j, cj in enumerate(self.classes)
            )
            lines.append(
                f"{c:<{name_w}}  {self.recall(c):>8.4f}  {self.one_minus_precision(c):>11.4f}  | "
                f"{cells}  {self.row_sum(c):>5}"
            )
        col_cells = "  ".join(f"{self.col_sum(c):>{max(len(c), 5)}}" for c in self.classes)
        lines.append(f"{'Sum':<{name_w}}  {'':>8}  {'':>11}  | {col_cells}  {self.total:>5}")
        return "\n".join(lines)


def evaluate(tree: DecisionTree, dataset: Dataset) -> EvaluationReport:
    """Confusion matrix over a dataset; rows are actual, columns predicted."""
    classes = list(dataset.classes)
    for leaf in tree.leaves():
        if leaf.class_name not in classes:
            classes.append(leaf.class_name)
    idx = {c: i for i, c in enumerate(classes)}
    conf = [[0] * len(classes) for _ in classes]
    for case in dataset.cases:
        pred = predict(tree, case, dataset)
        conf[idx[case.label]][idx[pred.class_name]] += 1
    return EvaluationReport(tuple(classes), tuple(tuple(r) for r in conf), len(dataset.cases))


def refresh_leaf_stats(tree: DecisionTree, dataset: Dataset) -> DecisionTree:
    """Recompute every leaf's count and purity from the dataset.

    Purity is the majority-class share among the cases reaching the leaf; an
    empty leaf keeps purity 100 by convention.  Leaf classes are unchanged.
    """
    reached: dict[int, dict[str, int]] = {}
    for case in dataset.cases:
        pred = predict(tree, case, dataset)
        reached.setdefault(pred.leaf_id, {}).setdefault(case.label, 0)
        reached[pred.leaf_id][case.label] += 1
    nodes: list[Node] = []
    for n in tree.nodes:
        if isinstance(n, LeafNode):
            by_class = reached.get(n.node_id, {})
            count = sum(by_class.values())
            purity = 100.0 * max(by_class.values()) / count if count else 100.0
            nodes.append(replace(n, count=count, purity_pct=purity))
        else:
            nodes.append(n)
    return DecisionTree(tree.root, tuple(nodes))


def adjust_threshold(tree: DecisionTree, node_id: int, new_t: float) -> DecisionTree:
    """Return a tree with one threshold replaced; leaf stats become stale."""
    node = tree.node(node_id)
    if not isinstance(node, SplitNode):
        raise TreeError(f"node {node_id} is a leaf, not a split")
    nodes = list(tree.nodes)
    nodes[node_id] = replace(node, threshold=new_t)
    return DecisionTree(tree.root, tuple(nodes))


# --- canonical JSON form ---------------------------------------------------

def _node_to_obj(tree: DecisionTree, node_id: int) -> dict:
    n = tree.node(node_id)
    if isinstance(n, SplitNode):
        return {
            "node_id": n.node_id,
            "kind": "split",
            "attribute": n.attribute,
            "threshold": n.threshold,
            "low": _node_to_obj(tree, n.low),
            "high": _node_to_obj(tree, n.high),
        }
    return {
        "node_id": n.node_id,
        "kind": "leaf",
        "class": n.class_name,
        "purity_pct": n.purity_pct,
        "count": n.count,
    }


def to_json(tree: DecisionTree) -> str:
    """Canonical JSON string; byte-stable for equal trees."""
    return json.dumps(_node_to_obj(tree, tree.root), indent=2) + "\n"


def _obj_to_nodes(obj: object, nodes: list[Node]) -> int:
    if not isinstance(obj, dict):
        raise TreeFormatError("tree JSON nodes must be objects")
    kind = obj.get("kind")
    if kind == "split":
        for key in ("attribute", "threshold", "low", "high"):
            if key not in obj:
                raise TreeFormatError(f"split node missing field {key!r}")
        node_id = len(nodes)
        nodes.append(SplitNode(node_id, "", 0.0, -1, -1))  # placeholder
        low = _obj_to_nodes(obj["low"], nodes)
        high = _obj_to_nodes(obj["high"], nodes)
        nodes[node_id] = SplitNode(
            node_id, str(obj["attribute"]), float(obj["threshold"]), low, high
        )
        return node_id
    if kind == "leaf":
        if "class" not in obj:
            raise TreeFormatError("leaf node missing field 'class'")
        node_id = len(nodes)
        nodes.append(
            LeafNode(
                node_id,
                str(obj["class"]),
                float(obj.get("purity_pct", 100.0)),
                int(obj.get("count", 0)),
            )
        )
        return node_id
    raise TreeFormatError(f"unknown node kind: {kind!r}")


def from_json(text: str) -> DecisionTree:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeFormatError(f"invalid JSON: {exc}") from None
    nodes: list[Node] = []
    root = _obj_to_nodes(obj, nodes)
    tree = DecisionTree(root, tuple(nodes))
    tree.validate()
    return tree
