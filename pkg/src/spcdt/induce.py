"""Entropy/information-gain induction of binary threshold trees.

Candidate thresholds are midpoints between consecutive distinct sorted values
of each attribute.  Recursion stops on purity, min_leaf, max_depth or when the
best gain falls below min_gain.  The induction tool behind the reference trees
does not publish its stopping parameters, so they are exposed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .dataset import Case, Dataset
from .tree import DecisionTree, LeafNode, Node, SplitNode


@dataclass(frozen=True)
class InduceParams:
    min_leaf: int = 1
    max_depth: int = 25
    min_gain: float = 1e-12


def entropy(labels: list[str]) -> float:
    n = len(labels)
    if n == 0:
        return 0.0
    counts: dict[str, int] = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    return -sum((c / n) * math.log2(c / n) for c in counts.values() if c)


def candidate_thresholds(values: list[float]) -> list[float]:
    distinct = sorted(set(values))
    return [(a + b) / 2.0 for a, b in zip(distinct, distinct[1:])]


def information_gain(cases: list[Case], attr_idx: int, t: float) -> float:
    """Gain of splitting at t, over the cases with a value for the attribute."""
    known = [c for c in cases if c.values[attr_idx] is not None]
    if not known:
        return 0.0
    low = [c.label for c in known if c.values[attr_idx] < t]
    high = [c.label for c in known if c.values[attr_idx] >= t]
    n = len(known)
    parent = entropy([c.label for c in known])
    return parent - (len(low) / n) * entropy(low) - (len(high) / n) * entropy(high)


# gains this close are treated as tied, so the documented order decides and
# float summation noise cannot flip the winner
GAIN_TIE_EPS = 1e-12


def best_split(cases: list[Case], dataset: Dataset) -> tuple[str, float, float] | None:
    """Maximal-gain (attribute, threshold, gain); ties keep the first found
    in attribute order then ascending threshold."""
    best: tuple[str, float, float] | None = None
    for meta in dataset.attributes:
        values = [c.values[meta.index] for c in cases if c.values[meta.index] is not None]
        for t in candidate_thresholds(values):
            gain = information_gain(cases, meta.index, t)
            if best is None or gain > best[2] + GAIN_TIE_EPS:
                best = (meta.name, t, gain)
    return best


def majority_class(cases: list[Case], dataset: Dataset) -> str:
    counts = {c: 0 for c in dataset.classes}
    for case in cases:
        counts[case.label] += 1
    best = max(counts.values())
    for c in dataset.classes:  # ties resolved by class order
        if counts[c] == best:
            return c
    raise AssertionError("unreachable")


def _partition(cases: list[Case], attr_idx: int, t: float) -> tuple[list[Case], list[Case]]:
    low = [c for c in cases if c.values[attr_idx] is not None and c.values[attr_idx] < t]
    high = [c for c in cases if c.values[attr_idx] is not None and c.values[attr_idx] >= t]
    # cases missing the split attribute follow the larger side (low on ties)
    for c in cases:
        if c.values[attr_idx] is None:
            (high if len(high) > len(low) else low).append(c)
    return low, high


def induce_id3(train: Dataset, params: InduceParams | None = None) -> DecisionTree:
    if not train.cases:
        raise ValueError("cannot induce from an empty dataset")
    p = params or InduceParams()
    nodes: list[Node] = []

    def make_leaf(cases: list[Case]) -> int:
        cls = majority_class(cases, train) if cases else train.classes[0]
        n = len(cases)
        maj = sum(1 for c in cases if c.label == cls)
        purity = 100.0 * maj / n if n else 100.0
        node_id = len(nodes)
        nodes.append(LeafNode(node_id, cls, purity, n))
        return node_id

    def build(cases: list[Case], depth: int) -> int:
        labels = {c.label for c in cases}
        if len(labels) <= 1 or depth >= p.max_depth or len(cases) < 2 * p.min_leaf:
            return make_leaf(cases)
        found = best_split(cases, train)
        if found is None or found[2] < p.min_gain:
            return make_leaf(cases)
        attr, t, _ = found
        low_cases, high_cases = _partition(cases, train.attribute_index(attr), t)
        if len(low_cases) < p.min_leaf or len(high_cases) < p.min_leaf:
            return make_leaf(cases)
        node_id = len(nodes)
        nodes.append(SplitNode(node_id, attr, t, -1, -1))  # placeholder
        low = build(low_cases, depth + 1)
        high = build(high_cases, depth + 1)
        nodes[node_id] = SplitNode(node_id, attr, t, low, high)
        return node_id

    root = build(list(train.cases), 0)
    tree = DecisionTree(root, tuple(nodes))
    tree.validate()
    return tree
