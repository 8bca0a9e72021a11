"""Model-audit reports: overgeneralization slack, threshold margins and
train/validation comparison."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .dataset import Dataset, attribute_range
from .tree import DecisionTree, EvaluationReport, LeafNode, SplitNode, evaluate, predict


@dataclass(frozen=True)
class AttributeSlack:
    attribute: str
    rule_interval: tuple[float, float]
    data_interval: tuple[float, float] | None  # None when the leaf covers no usable values
    slack_low: float
    slack_high: float


@dataclass(frozen=True)
class LeafOvergen:
    leaf_id: int
    class_name: str
    covered: int
    per_attribute: tuple[AttributeSlack, ...]


@dataclass(frozen=True)
class OvergenReport:
    leaves: tuple[LeafOvergen, ...]

    def to_json_dict(self) -> dict:
        return {
            "leaves": [
                {
                    "leaf_id": l.leaf_id,
                    "class": l.class_name,
                    "covered": l.covered,
                    "attributes": [
                        {
                            "attribute": a.attribute,
                            "rule_interval": list(a.rule_interval),
                            "data_interval": None if a.data_interval is None else list(a.data_interval),
                            "slack_low": a.slack_low,
                            "slack_high": a.slack_high,
                        }
                        for a in l.per_attribute
                    ],
                }
                for l in self.leaves
            ]
        }

    def to_text(self) -> str:
        lines = [f"{'leaf':>4}  {'class':<16} {'attribute':<16} "
                 f"{'rule':<22} {'data':<22} {'slack -':>8} {'slack +':>8}"]
        for l in self.leaves:
            for a in l.per_attribute:
                rule = f"[{a.rule_interval[0]:g}, {a.rule_interval[1]:g})"
                data = "(empty)" if a.data_interval is None else (
                    f"[{a.data_interval[0]:g}, {a.data_interval[1]:g}]")
                lines.append(
                    f"{l.leaf_id:>4}  {l.class_name:<16} {a.attribute:<16} "
                    f"{rule:<22} {data:<22} {a.slack_low:>8.4f} {a.slack_high:>8.4f}"
                )
        return "\n".join(lines)


def overgeneralization(tree: DecisionTree, dataset: Dataset) -> OvergenReport:
    """Per-leaf slack between rule intervals and the covered data.

    The rule interval for each attribute on the leaf's path is the
    intersection of its path conditions with the attribute's plot range.
    Slack is how far each rule bound overshoots the covered cases; a leaf
    with no covered values keeps slack equal to the full rule width on both
    sides.
    """
    covered: dict[int, list] = {}
    for case in dataset.cases:
        covered.setdefault(predict(tree, case, dataset).leaf_id, []).append(case)

    def leaf_paths(node_id: int, conds: list[tuple[str, str, float]], acc: dict) -> None:
        node = tree.node(node_id)
        if isinstance(node, LeafNode):
            acc[node.node_id] = list(conds)
            return
        leaf_paths(node.low, conds + [(node.attribute, "<", node.threshold)], acc)
        leaf_paths(node.high, conds + [(node.attribute, ">=", node.threshold)], acc)

    paths: dict[int, list[tuple[str, str, float]]] = {}
    root = tree.node(tree.root)
    if isinstance(root, LeafNode):
        paths[root.node_id] = []
    else:
        leaf_paths(tree.root, [], paths)

    leaves = []
    for leaf in tree.leaves():
        conds = paths[leaf.node_id]
        cases = covered.get(leaf.node_id, [])
        per_attr = []
        for attr in dict.fromkeys(a for a, _, _ in conds):
            lo, hi = attribute_range(dataset, attr)
            for a, op, t in conds:
                if a != attr:
                    continue
                if op == "<":
                    hi = min(hi, t)
                else:
                    lo = max(lo, t)
            idx = dataset.attribute_index(attr)
            values = [c.values[idx] for c in cases if c.values[idx] is not None]
            if values:
                data = (min(values), max(values))
                slack_low = max(0.0, data[0] - lo)
                slack_high = max(0.0, hi - data[1])
            else:
                data = None
                slack_low = slack_high = hi - lo
            per_attr.append(AttributeSlack(attr, (lo, hi), data, slack_low, slack_high))
        leaves.append(LeafOvergen(leaf.node_id, leaf.class_name, len(cases), tuple(per_attr)))
    return OvergenReport(tuple(leaves))


@dataclass(frozen=True)
class BorderlineCase:
    case_id: int
    value: float
    distance: float
    side: str  # "low" | "high"
    opposite_class: bool  # class differs from the majority on its side


@dataclass(frozen=True)
class SplitMargin:
    node_id: int
    attribute: str
    threshold: float
    nearest_low: float | None
    nearest_high: float | None
    borderline: tuple[BorderlineCase, ...]


@dataclass(frozen=True)
class MarginReport:
    epsilon: float | None  # None = per-node default of 1% of the attribute range
    splits: tuple[SplitMargin, ...]

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "splits": [
                {
                    "node_id": s.node_id,
                    "attribute": s.attribute,
                    "threshold": s.threshold,
                    "nearest_low": s.nearest_low,
                    "nearest_high": s.nearest_high,
                    "borderline": [
                        {
                            "case_id": b.case_id,
                            "value": b.value,
                            "distance": b.distance,
                            "side": b.side,
                            "opposite_class": b.opposite_class,
                        }
                        for b in s.borderline
                    ],
                }
                for s in self.splits
            ],
        }

    def to_text(self) -> str:
        eps = "1% of attribute range" if self.epsilon is None else f"{self.epsilon:g}"
        lines = [f"borderline = |value - t| <= eps, eps = {eps}"]
        for s in self.splits:
            nl = "-" if s.nearest_low is None else f"{s.nearest_low:g}"
            nh = "-" if s.nearest_high is None else f"{s.nearest_high:g}"
            lines.append(
                f"node {s.node_id:>3}  {s.attribute:<16} t={s.threshold:<10g} "
                f"nearest<[{nl}] nearest>=[{nh}] borderline={len(s.borderline)}"
            )
        return "\n".join(lines)


def margins(tree: DecisionTree, dataset: Dataset, epsilon: float | None = None) -> MarginReport:
    """Nearest values on each side of every threshold plus the borderline cases.

    Default epsilon is 1% of each split attribute's range (scale free), applied
    per node; passing an explicit epsilon uses it everywhere.
    """
    reach: dict[int, list] = {}
    for case in dataset.cases:
        for node_id, _ in predict(tree, case, dataset).path:
            reach.setdefault(node_id, []).append(case)

    out = []
    for node in tree.splits():
        cases = reach.get(node.node_id, [])
        idx = dataset.attribute_index(node.attribute)
        lo, hi = attribute_range(dataset, node.attribute)
        eps = epsilon if epsilon is not None else 0.01 * (hi - lo)
        t = node.threshold
        lows = [(c, c.values[idx]) for c in cases
                if c.values[idx] is not None and c.values[idx] < t]
        highs = [(c, c.values[idx]) for c in cases
                 if c.values[idx] is not None and c.values[idx] >= t]

        def majority(side: list) -> str | None:
            counts: dict[str, int] = {}
            for c, _ in side:
                counts[c.label] = counts.get(c.label, 0) + 1
            if not counts:
                return None
            best = max(counts.values())
            for cls in dataset.classes:
                if counts.get(cls) == best:
                    return cls
            return None

        maj_low, maj_high = majority(lows), majority(highs)
        borderline = []
        for side_name, side, maj in (("low", lows, maj_low), ("high", highs, maj_high)):
            for c, v in side:
                d = abs(v - t)
                if d <= eps:
                    borderline.append(
                        BorderlineCase(c.id, v, d, side_name, c.label != maj)
                    )
        borderline.sort(key=lambda b: (b.distance, b.case_id))
        out.append(
            SplitMargin(
                node.node_id,
                node.attribute,
                t,
                max(v for _, v in lows) if lows else None,
                min(v for _, v in highs) if highs else None,
                tuple(borderline),
            )
        )
    return MarginReport(epsilon, tuple(out))


@dataclass(frozen=True)
class RegionCoverage:
    leaf_id: int
    class_name: str
    train_count: int
    validation_count: int


@dataclass(frozen=True)
class SplitCompareReport:
    train_eval: EvaluationReport
    validation_eval: EvaluationReport
    coverage: tuple[RegionCoverage, ...]
    uncovered_by_validation: tuple[int, ...]  # leaf ids with train>0, validation=0
    uncovered_by_train: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "train": self.train_eval.to_json_dict(),
            "validation": self.validation_eval.to_json_dict(),
            "coverage": [
                {
                    "leaf_id": c.leaf_id,
                    "class": c.class_name,
                    "train_count": c.train_count,
                    "validation_count": c.validation_count,
                }
                for c in self.coverage
            ],
            "uncovered_by_validation": list(self.uncovered_by_validation),
            "uncovered_by_train": list(self.uncovered_by_train),
        }

    def to_text(self) -> str:
        lines = ["== training =="]
        lines.append(self.train_eval.to_text())
        lines.append("")
        lines.append("== validation ==")
        lines.append(self.validation_eval.to_text())
        lines.append("")
        lines.append(f"{'leaf':>4}  {'class':<16} {'train':>6} {'valid':>6}")
        for c in self.coverage:
            lines.append(f"{c.leaf_id:>4}  {c.class_name:<16} {c.train_count:>6} {c.validation_count:>6}")
        lines.append(f"regions unused by validation: {list(self.uncovered_by_validation)}")
        lines.append(f"regions unused by training:   {list(self.uncovered_by_train)}")
        return "\n".join(lines)


def split_compare(tree: DecisionTree, train: Dataset, validation: Dataset) -> SplitCompareReport:
    """Evaluate both sides and compare per-terminal-region coverage."""
    def leaf_counts(ds: Dataset) -> dict[int, int]:
        counts: dict[int, int] = {}
        for case in ds.cases:
            lid = predict(tree, case, ds).leaf_id
            counts[lid] = counts.get(lid, 0) + 1
        return counts

    tc, vc = leaf_counts(train), leaf_counts(validation)
    coverage = tuple(
        RegionCoverage(l.node_id, l.class_name, tc.get(l.node_id, 0), vc.get(l.node_id, 0))
        for l in tree.leaves()
    )
    return SplitCompareReport(
        train_eval=evaluate(tree, train),
        validation_eval=evaluate(tree, validation),
        coverage=coverage,
        uncovered_by_validation=tuple(
            c.leaf_id for c in coverage if c.train_count > 0 and c.validation_count == 0
        ),
        uncovered_by_train=tuple(
            c.leaf_id for c in coverage if c.validation_count > 0 and c.train_count == 0
        ),
    )


def report_to_json(report) -> str:
    return json.dumps(report.to_json_dict(), indent=2) + "\n"
