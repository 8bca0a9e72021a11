"""Derive shifted-paired-coordinate plot units from a decision tree.

Each plot unit covers up to two attribute levels of a branch: the chain of
splits on the plot root's attribute forms the horizontal axis, the chains on
the chosen second attribute form the vertical axis.  Leaves absorbed by the
plot become class-decided rectangles; deeper splits on other attributes
become undecided (gray) rectangles that route to their own plot units.
Regions always span the full attribute ranges of the plot; ancestor
constraints from other plots affect routing only.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dataset import Dataset, attribute_range
from .tree import DecisionTree, LeafNode, SplitNode, predict


class PairingError(ValueError):
    pass


@dataclass(frozen=True)
class Region:
    h_interval: tuple[float, float]
    v_interval: tuple[float, float]
    kind: str  # "decided" | "undecided"
    node_id: int  # the leaf (decided) or the subtree root (undecided)
    class_name: str | None = None
    dest_plot: int | None = None
    shade_key: int | None = None

    def to_json_dict(self) -> dict:
        d: dict = {
            "h_interval": list(self.h_interval),
            "v_interval": list(self.v_interval),
            "kind": self.kind,
            "node_id": self.node_id,
        }
        if self.kind == "decided":
            d["class"] = self.class_name
        else:
            d["dest"] = self.dest_plot
            d["shade_key"] = self.shade_key
        return d


@dataclass(frozen=True)
class PlotUnit:
    plot_id: int
    root_node: int
    h_attr: str
    v_attr: str
    h_thresholds: tuple[float, ...]
    v_thresholds: tuple[float, ...]
    h_range: tuple[float, float]
    v_range: tuple[float, float]
    regions: tuple[Region, ...]

    @property
    def degenerate(self) -> bool:
        return self.h_attr == self.v_attr


@dataclass(frozen=True)
class PairingPlan:
    plots: tuple[PlotUnit, ...]
    root_plot: int
    routing: dict[int, int]  # split node id -> plot id
    diagnostics: tuple[str, ...] = ()

    def plot(self, plot_id: int) -> PlotUnit:
        return self.plots[plot_id]


def _node_coverage(tree: DecisionTree, dataset: Dataset) -> dict[int, int]:
    counts: dict[int, int] = {n.node_id: 0 for n in tree.nodes}
    for case in dataset.cases:
        pred = predict(tree, case, dataset)
        for node_id, _ in pred.path:
            counts[node_id] += 1
        counts[pred.leaf_id] += 1
    return counts


def _chain(tree: DecisionTree, node_id: int, attr: str) -> list[int]:
    """Maximal connected run of splits on one attribute, in preorder."""
    members = [node_id]
    node = tree.node(node_id)
    assert isinstance(node, SplitNode)
    for child_id in (node.low, node.high):
        child = tree.node(child_id)
        if isinstance(child, SplitNode) and child.attribute == attr:
            members.extend(_chain(tree, child_id, attr))
    return members


def _hanging(tree: DecisionTree, members: list[int]) -> list[int]:
    """Children of member splits that are not members themselves, preorder."""
    member_set = set(members)
    out: list[int] = []
    for m in members:
        node = tree.node(m)
        assert isinstance(node, SplitNode)
        for child_id in (node.low, node.high):
            if child_id not in member_set:
                out.append(child_id)
    return out


def derive_plot_units(tree: DecisionTree, dataset: Dataset) -> PairingPlan:
    """Build the plot units, their rectangle regions and the gray routing."""
    root = tree.node(tree.root)
    if isinstance(root, LeafNode):
        return PairingPlan((), -1, {}, ("tree has no splits; nothing to pair",))

    coverage = _node_coverage(tree, dataset)
    preorder: dict[int, int] = {}

    def number(node_id: int) -> None:
        preorder[node_id] = len(preorder)
        node = tree.node(node_id)
        if isinstance(node, SplitNode):
            number(node.low)
            number(node.high)

    number(tree.root)

    plots: list[PlotUnit | None] = []
    routing: dict[int, int] = {}
    pending: list[tuple[int, int]] = []  # (plot_id, plot root node)

    def schedule(node_id: int) -> int:
        plot_id = len(plots)
        plots.append(None)
        pending.append((plot_id, node_id))
        return plot_id

    def build(plot_id: int, root_id: int) -> PlotUnit:
        root_node = tree.node(root_id)
        assert isinstance(root_node, SplitNode)
        h_attr = root_node.attribute
        h_members = _chain(tree, root_id, h_attr)

        # second coordinate: the first different attribute below the h chain,
        # preferring the introducing split that covers the most training cases
        candidates = [
            cid
            for cid in _hanging(tree, h_members)
            if isinstance(tree.node(cid), SplitNode)
        ]
        if candidates:
            chosen = min(candidates, key=lambda c: (-coverage[c], preorder[c]))
            v_attr = tree.node(chosen).attribute  # type: ignore[union-attr]
        else:
            v_attr = h_attr  # repeated coordinate: only leaves hang below
        v_members: list[int] = []
        if v_attr != h_attr:
            for cid in _hanging(tree, h_members):
                child = tree.node(cid)
                if isinstance(child, SplitNode) and child.attribute == v_attr:
                    v_members.extend(_chain(tree, cid, v_attr))
        members = h_members + v_members
        for m in members:
            routing[m] = plot_id

        h_range = attribute_range(dataset, h_attr)
        v_range = attribute_range(dataset, v_attr)

        # walk the member nodes accumulating in-plot interval constraints
        regions: list[Region] = []
        shade_next = 0

        def walk(node_id: int, h_iv: tuple[float, float], v_iv: tuple[float, float]) -> None:
            nonlocal shade_next
            node = tree.node(node_id)
            assert isinstance(node, SplitNode)
            on_h = node.attribute == h_attr
            for is_low, child_id in ((True, node.low), (False, node.high)):
                t = node.threshold
                if on_h:
                    c_h = (h_iv[0], min(h_iv[1], t)) if is_low else (max(h_iv[0], t), h_iv[1])
                    c_v = v_iv
                else:
                    c_h = h_iv
                    c_v = (v_iv[0], min(v_iv[1], t)) if is_low else (max(v_iv[0], t), v_iv[1])
                child = tree.node(child_id)
                if child_id in routing and routing[child_id] == plot_id and isinstance(child, SplitNode):
                    walk(child_id, c_h, c_v)
                elif isinstance(child, LeafNode):
                    regions.append(Region(c_h, c_v, "decided", child_id, class_name=child.class_name))
                else:
                    dest = schedule(child_id)
                    regions.append(
                        Region(c_h, c_v, "undecided", child_id, dest_plot=dest, shade_key=shade_next)
                    )
                    shade_next += 1

        walk(root_id, h_range, v_range)

        h_ts = tuple(sorted({tree.node(m).threshold for m in h_members}))  # type: ignore[union-attr]
        v_ts = tuple(sorted({tree.node(m).threshold for m in v_members}))  # type: ignore[union-attr]
        return PlotUnit(plot_id, root_id, h_attr, v_attr, h_ts, v_ts, h_range, v_range, tuple(regions))

    root_plot = schedule(tree.root)
    while pending:
        plot_id, node_id = pending.pop(0)
        plots[plot_id] = build(plot_id, node_id)

    done = [p for p in plots if p is not None]
    return PairingPlan(tuple(done), root_plot, routing)


def region_of(plan: PairingPlan, plot_id: int, point: tuple[float, float]) -> Region:
    """The unique region of a plot containing a point.

    Intervals are half-open [lo, hi); the side touching the range maximum is
    closed so the tiling covers the full rectangle.
    """
    plot = plan.plot(plot_id)
    x, y = point
    if not (plot.h_range[0] <= x <= plot.h_range[1]):
        raise PairingError(f"h value {x} outside range {plot.h_range} of {plot.h_attr}")
    if not (plot.v_range[0] <= y <= plot.v_range[1]):
        raise PairingError(f"v value {y} outside range {plot.v_range} of {plot.v_attr}")

    def contains(iv: tuple[float, float], value: float, range_hi: float) -> bool:
        lo, hi = iv
        if value < lo:
            return False
        if value < hi:
            return True
        return value == hi == range_hi

    for region in plot.regions:
        if contains(region.h_interval, x, plot.h_range[1]) and contains(
            region.v_interval, y, plot.v_range[1]
        ):
            return region
    raise PairingError(f"no region of plot {plot_id} contains {point}")  # pragma: no cover


def plan_to_json_dict(plan: PairingPlan) -> dict:
    return {
        "root_plot": plan.root_plot,
        "plots": [
            {
                "plot_id": p.plot_id,
                "h_attr": p.h_attr,
                "v_attr": p.v_attr,
                "h_thresholds": list(p.h_thresholds),
                "v_thresholds": list(p.v_thresholds),
                "regions": [r.to_json_dict() for r in p.regions],
            }
            for p in plan.plots
        ],
        "routing": {str(k): v for k, v in sorted(plan.routing.items())},
    }
