"""Render-ready scenes: placed plots, styled regions and case polylines.

A scene is a pure function of (tree, plan, dataset, placements, options);
every edit (relocate, flip, swap, condense, jitter, trace mode, context,
summaries) rebuilds from the same inputs, so view edits can never disturb the
embedded evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .dataset import Dataset, attribute_range
from .pairing import PairingPlan, PlotUnit, Region, region_of
from .tree import DecisionTree, evaluate, predict

# staircase layout: plot k sits at (k * H_STEP * w, k * V_STEP * h)
H_STEP = 1.25
V_STEP = 0.25

# density shading floor: a region with no cases keeps this intensity
BASE_INTENSITY = 0.35


class SceneError(ValueError):
    pass


@dataclass(frozen=True)
class PlotPlacement:
    plot_id: int
    origin: tuple[float, float]
    size: tuple[float, float] = (1.0, 1.0)
    h_flipped: bool = False
    v_flipped: bool = False
    swapped: bool = False


@dataclass(frozen=True)
class SceneOptions:
    trace_mode: str = "terminate"  # "terminate" | "full"
    condensed_regions: frozenset[tuple[int, int]] = frozenset()  # (plot_id, region index)
    jitter: float = 0.0
    context: bool = False
    summary: str = "none"  # "none" | "centers" | "minmax"
    case_selection: tuple[int, ...] | None = None  # None = all cases


@dataclass(frozen=True)
class Vertex:
    plot_id: int
    x: float
    y: float
    raw_pair: tuple[float | None, float | None]
    imputed: bool = False
    context: bool = False
    condensed: bool = False


@dataclass(frozen=True)
class Polyline:
    case_id: int
    actual_class: str
    predicted_class: str
    vertices: tuple[Vertex, ...]
    terminal_plot: int
    terminal_region: int
    misclassified: bool
    dimmed: bool = False
    summary_kind: str | None = None  # "center" | "min" | "max" for synthetic lines
    summary_count: int = 0


@dataclass(frozen=True)
class StyledRegion:
    region: Region
    intensity: float
    count: int
    condensed: bool = False
    condensed_counts: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class ScenePlot:
    plot_id: int
    unit: PlotUnit | None  # None for context plots
    placement: PlotPlacement
    h_attr: str
    v_attr: str
    regions: tuple[StyledRegion, ...]
    is_context: bool = False


@dataclass(frozen=True)
class SceneGraph:
    plots: tuple[ScenePlot, ...]
    polylines: tuple[Polyline, ...]
    evaluation: object  # EvaluationReport
    options: SceneOptions
    placements: tuple[PlotPlacement, ...]
    warnings: tuple[str, ...] = ()
    # inputs retained so edits can rebuild; not part of the wire format
    inputs: tuple = field(default=(), repr=False, compare=False)


def default_placement(plan: PairingPlan, extra_plots: int = 0) -> list[PlotPlacement]:
    """Unit plots on a left-to-right staircase, one step per plot."""
    n = len(plan.plots) + extra_plots
    return [
        PlotPlacement(k, (k * H_STEP, k * V_STEP))
        for k in range(n)
    ]


def _scale(dataset: Dataset, attr: str, value: float) -> float:
    lo, hi = attribute_range(dataset, attr)
    return (value - lo) / (hi - lo)


def _project(p: PlotPlacement, u: float, v: float) -> tuple[float, float]:
    """Local unit coordinates -> scene coordinates under flips/swap."""
    if p.h_flipped:
        u = 1.0 - u
    if p.v_flipped:
        v = 1.0 - v
    if p.swapped:
        u, v = v, u
    return (p.origin[0] + u * p.size[0], p.origin[1] + v * p.size[1])


def _region_for_case(tree: DecisionTree, plan: PairingPlan, dataset: Dataset,
                     plot: PlotUnit, case) -> Region | None:
    """Region a case occupies in a plot.

    Uses the raw coordinate values when both are present (the geometric
    route), falling back to the tree path for missing values.  Returns None
    when a value is missing and the path never crosses this plot (possible
    only for off-route plots in full-trace mode).
    """
    hx = dataset.value(case, plot.h_attr)
    vy = dataset.value(case, plot.v_attr)
    if hx is not None and vy is not None:
        return region_of(plan, plot.plot_id, (hx, vy))
    pred = predict(tree, case, dataset)
    path_nodes = {nid for nid, _ in pred.path} | {pred.leaf_id}
    exits = [r for r in plot.regions if r.node_id in path_nodes]
    return exits[0] if len(exits) == 1 else None


def _vertex_local(dataset: Dataset, plot: PlotUnit, case,
                  region: Region | None) -> tuple[float, float, bool]:
    """Unit-square position of a case in a plot; a missing axis value falls
    back to the midpoint of its routed region (or of the whole axis when no
    region is known)."""
    imputed = False
    hx = dataset.value(case, plot.h_attr)
    vy = dataset.value(case, plot.v_attr)
    if hx is None:
        iv = region.h_interval if region is not None else plot.h_range
        hx = (iv[0] + iv[1]) / 2.0
        imputed = True
    if vy is None:
        iv = region.v_interval if region is not None else plot.v_range
        vy = (iv[0] + iv[1]) / 2.0
        imputed = True
    return _scale(dataset, plot.h_attr, hx), _scale(dataset, plot.v_attr, vy), imputed


def route_case(case, tree: DecisionTree, plan: PairingPlan,
               placements: dict[int, PlotPlacement], dataset: Dataset,
               options: SceneOptions | None = None) -> Polyline:
    """Trace one case through the plan into a polyline.

    Terminate mode stops at the first class-decided region; full mode visits
    every plot in plan order so all paired values stay recoverable.
    """
    options = options or SceneOptions()
    pred = predict(tree, case, dataset)

    visited: list[tuple[PlotUnit, Region]] = []
    plot_id = plan.root_plot
    while True:
        plot = plan.plot(plot_id)
        region = _region_for_case(tree, plan, dataset, plot, case)
        if region is None:  # pragma: no cover - routing always stays on path
            raise SceneError(f"cannot route case {case.id} in plot {plot_id}")
        visited.append((plot, region))
        if region.kind == "decided":
            break
        plot_id = region.dest_plot

    terminal_plot, terminal_region = visited[-1]
    if options.trace_mode == "full":
        by_id = {p.plot_id: r for p, r in visited}
        seq = [
            (p, by_id.get(p.plot_id) or _region_for_case(tree, plan, dataset, p, case))
            for p in plan.plots
        ]
    else:
        seq = visited

    vertices = []
    for plot, region in seq:
        u, v, imputed = _vertex_local(dataset, plot, case, region)
        x, y = _project(placements[plot.plot_id], u, v)
        vertices.append(
            Vertex(plot.plot_id, x, y,
                   (dataset.value(case, plot.h_attr), dataset.value(case, plot.v_attr)),
                   imputed=imputed)
        )
    return Polyline(
        case_id=case.id,
        actual_class=case.label,
        predicted_class=pred.class_name,
        vertices=tuple(vertices),
        terminal_plot=terminal_plot.plot_id,
        terminal_region=terminal_plot.regions.index(terminal_region),
        misclassified=case.label != pred.class_name,
    )


def _context_pairs(tree: DecisionTree, dataset: Dataset) -> list[tuple[str, str]]:
    used = set(tree.attributes_used())
    unused = [a.name for a in dataset.attributes if a.name not in used]
    pairs = []
    for i in range(0, len(unused), 2):
        a = unused[i]
        b = unused[i + 1] if i + 1 < len(unused) else unused[i]
        pairs.append((a, b))
    return pairs


def build_scene(tree: DecisionTree, plan: PairingPlan, dataset: Dataset,
                placements: list[PlotPlacement] | None = None,
                options: SceneOptions | None = None) -> SceneGraph:
    """Assemble the full scene; deterministic for equal inputs."""
    options = options or SceneOptions()
    context_pairs = _context_pairs(tree, dataset) if options.context else []
    if placements is None:
        placements = default_placement(plan, extra_plots=len(context_pairs))
    place = {p.plot_id: p for p in placements}
    for k in range(len(plan.plots) + len(context_pairs)):
        if k not in place:
            place[k] = PlotPlacement(k, (k * H_STEP, k * V_STEP))

    warnings = _overlap_warnings(sorted(place.values(), key=lambda p: p.plot_id))

    selected = dataset.cases
    if options.case_selection is not None:
        wanted = set(options.case_selection)
        selected = tuple(c for c in dataset.cases if c.id in wanted)

    polylines = [
        route_case(c, tree, plan, place, dataset, options) for c in selected
    ]

    # region coverage counts use the whole dataset (training density), not the selection
    counts: dict[tuple[int, int], int] = {}
    region_index = {
        (p.plot_id, id(r)): i for p in plan.plots for i, r in enumerate(p.regions)
    }
    for c in dataset.cases:
        plot_id = plan.root_plot
        while True:
            plot = plan.plot(plot_id)
            region = _region_for_case(tree, plan, dataset, plot, c)
            assert region is not None  # the walk follows the routed path
            key = (plot_id, region_index[(plot_id, id(region))])
            counts[key] = counts.get(key, 0) + 1
            if region.kind == "decided":
                break
            plot_id = region.dest_plot

    n_max = max(counts.values(), default=0)

    def intensity(n: int) -> float:
        if n_max == 0 or n == 0:
            return BASE_INTENSITY
        return BASE_INTENSITY + (1.0 - BASE_INTENSITY) * math.log1p(n) / math.log1p(n_max)

    # condensation: collapse per-class vertices inside the selected regions
    membership: dict[tuple[int, int], dict[str, list[int]]] = {}
    if options.condensed_regions:
        for li, pl in enumerate(polylines):
            for vi, vx in enumerate(pl.vertices):
                if vx.plot_id >= len(plan.plots):
                    continue
                plot = plan.plot(vx.plot_id)
                region = _region_for_case(tree, plan, dataset, plot, selected[li])
                if region is None:
                    continue
                key = (vx.plot_id, region_index[(vx.plot_id, id(region))])
                if key in options.condensed_regions:
                    membership.setdefault(key, {}).setdefault(pl.actual_class, []).append(li * 10000 + vi)

    condensed_counts: dict[tuple[int, int], tuple[tuple[str, int], ...]] = {}
    if membership:
        new_polylines = [list(pl.vertices) for pl in polylines]
        for key, by_class in membership.items():
            condensed_counts[key] = tuple(
                (cls, len(v)) for cls, v in sorted(by_class.items())
            )
            for cls, refs in by_class.items():
                xs = [new_polylines[r // 10000][r % 10000].x for r in refs]
                ys = [new_polylines[r // 10000][r % 10000].y for r in refs]
                cx, cy = sum(xs) / len(xs), sum(ys) / len(ys)
                for r in refs:
                    old = new_polylines[r // 10000][r % 10000]
                    new_polylines[r // 10000][r % 10000] = replace(old, x=cx, y=cy, condensed=True)
        polylines = [
            replace(pl, vertices=tuple(vs)) for pl, vs in zip(polylines, new_polylines)
        ]

    if options.context and context_pairs:
        polylines = [
            _append_context(pl, dataset, selected[i], context_pairs, len(plan.plots), place)
            for i, pl in enumerate(polylines)
        ]

    if options.jitter > 0:
        polylines = _jitter(polylines, options.jitter)

    if options.summary in ("centers", "minmax"):
        polylines = _summarize(polylines, options.summary)

    scene_plots = []
    for p in plan.plots:
        styled = tuple(
            StyledRegion(
                region=r,
                intensity=round(intensity(counts.get((p.plot_id, i), 0)), 6),
                count=counts.get((p.plot_id, i), 0),
                condensed=(p.plot_id, i) in options.condensed_regions,
                condensed_counts=condensed_counts.get((p.plot_id, i), ()),
            )
            for i, r in enumerate(p.regions)
        )
        scene_plots.append(
            ScenePlot(p.plot_id, p, place[p.plot_id], p.h_attr, p.v_attr, styled)
        )
    for j, (a, b) in enumerate(context_pairs):
        pid = len(plan.plots) + j
        scene_plots.append(
            ScenePlot(pid, None, place[pid], a, b, (), is_context=True)
        )

    return SceneGraph(
        plots=tuple(scene_plots),
        polylines=tuple(polylines),
        evaluation=evaluate(tree, dataset),
        options=options,
        placements=tuple(sorted(place.values(), key=lambda p: p.plot_id)),
        warnings=tuple(warnings),
        inputs=(tree, plan, dataset),
    )


def _append_context(pl: Polyline, dataset: Dataset, case, pairs, first_id: int,
                    place: dict[int, PlotPlacement]) -> Polyline:
    vs = list(pl.vertices)
    for j, (a, b) in enumerate(pairs):
        va, vb = dataset.value(case, a), dataset.value(case, b)
        u = _scale(dataset, a, va) if va is not None else 0.5
        v = _scale(dataset, b, vb) if vb is not None else 0.5
        x, y = _project(place[first_id + j], u, v)
        vs.append(Vertex(first_id + j, x, y, (va, vb),
                         imputed=va is None or vb is None, context=True))
    return replace(pl, vertices=tuple(vs))


def _jitter(polylines: list[Polyline], magnitude: float) -> list[Polyline]:
    """Spread exactly-coincident vertices along the down-right diagonal.

    Offsets are deterministic: coincident vertices are ordered by case id and
    placed evenly within +-magnitude along (1, -1)/sqrt(2).
    """
    groups: dict[tuple[int, float, float], list[tuple[int, int]]] = {}
    for li, pl in enumerate(polylines):
        for vi, vx in enumerate(pl.vertices):
            if vx.condensed:
                continue
            groups.setdefault((vx.plot_id, vx.x, vx.y), []).append((li, vi))
    new_vertices = [list(pl.vertices) for pl in polylines]
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for key, members in groups.items():
        if len(members) < 2:
            continue
        members.sort(key=lambda m: (polylines[m[0]].case_id, m[1]))
        m = len(members)
        for k, (li, vi) in enumerate(members):
            t = -magnitude + 2.0 * magnitude * k / (m - 1)
            old = new_vertices[li][vi]
            new_vertices[li][vi] = replace(
                old, x=old.x + t * inv_sqrt2, y=old.y - t * inv_sqrt2
            )
    return [replace(pl, vertices=tuple(vs)) for pl, vs in zip(polylines, new_vertices)]


def _summarize(polylines: list[Polyline], mode: str) -> list[Polyline]:
    """Per terminal region and class keep synthetic center (or min/max) lines,
    dimming the individual cases."""
    groups: dict[tuple[int, int, str], list[Polyline]] = {}
    for pl in polylines:
        if pl.summary_kind is None:
            groups.setdefault((pl.terminal_plot, pl.terminal_region, pl.actual_class), []).append(pl)
    out = [replace(pl, dimmed=True) for pl in polylines]
    for (terminal, _region, cls), members in sorted(groups.items()):
        depth = max(len(m.vertices) for m in members)
        aligned = [m for m in members if len(m.vertices) == depth]
        def synth(kind: str, agg) -> Polyline:
            vs = []
            for vi in range(depth):
                xs = [m.vertices[vi].x for m in aligned]
                ys = [m.vertices[vi].y for m in aligned]
                proto = aligned[0].vertices[vi]
                vs.append(replace(proto, x=agg(xs), y=agg(ys)))
            return replace(
                aligned[0], vertices=tuple(vs), dimmed=False,
                summary_kind=kind, summary_count=len(members), misclassified=False,
            )
        if mode == "centers":
            out.append(synth("center", lambda xs: sum(xs) / len(xs)))
        else:
            out.append(synth("min", min))
            out.append(synth("max", max))
    return out


def _overlap_warnings(placements: list[PlotPlacement]) -> list[str]:
    warnings = []
    for i, a in enumerate(placements):
        for b in placements[i + 1:]:
            if (a.origin[0] < b.origin[0] + b.size[0] and b.origin[0] < a.origin[0] + a.size[0]
                    and a.origin[1] < b.origin[1] + b.size[1] and b.origin[1] < a.origin[1] + a.size[1]):
                warnings.append(f"plots {a.plot_id} and {b.plot_id} overlap")
    return warnings


# --- edits (all rebuild from the retained inputs) ---------------------------

def _rebuild(scene: SceneGraph, placements=None, options=None) -> SceneGraph:
    tree, plan, dataset = scene.inputs
    return build_scene(
        tree, plan, dataset,
        list(placements if placements is not None else scene.placements),
        options if options is not None else scene.options,
    )


def apply_transforms(scene: SceneGraph, plot_id: int, edit: str,
                     origin: tuple[float, float] | None = None) -> SceneGraph:
    """relocate | flip_h | flip_v | swap; view-only, never touches the data."""
    place = {p.plot_id: p for p in scene.placements}
    if plot_id not in place:
        raise SceneError(f"unknown plot {plot_id}")
    p = place[plot_id]
    if edit == "relocate":
        if origin is None:
            raise SceneError("relocate needs an origin")
        place[plot_id] = replace(p, origin=tuple(origin))
    elif edit == "flip_h":
        place[plot_id] = replace(p, h_flipped=not p.h_flipped)
    elif edit == "flip_v":
        place[plot_id] = replace(p, v_flipped=not p.v_flipped)
    elif edit == "swap":
        place[plot_id] = replace(p, swapped=not p.swapped)
    else:
        raise SceneError(f"unknown edit {edit!r}")
    return _rebuild(scene, placements=sorted(place.values(), key=lambda q: q.plot_id))


def condense(scene: SceneGraph, selector) -> SceneGraph:
    """Collapse same-class vertices in the selected (plot, region) pairs."""
    tree, plan, dataset = scene.inputs
    selected = frozenset(selector) | scene.options.condensed_regions
    for plot_id, region_idx in selected:
        if plot_id >= len(plan.plots) or region_idx >= len(plan.plot(plot_id).regions):
            raise SceneError(f"no region ({plot_id}, {region_idx})")
    return _rebuild(scene, options=replace(scene.options, condensed_regions=selected))


def jitter_overlaps(scene: SceneGraph, magnitude: float) -> SceneGraph:
    return _rebuild(scene, options=replace(scene.options, jitter=magnitude))


def context_and_summary(scene: SceneGraph, context: bool | None = None,
                        summary: str | None = None) -> SceneGraph:
    opts = scene.options
    if context is not None:
        opts = replace(opts, context=context)
    if summary is not None:
        if summary not in ("none", "centers", "minmax"):
            raise SceneError(f"unknown summary mode {summary!r}")
        opts = replace(opts, summary=summary)
    return _rebuild(scene, options=opts)


def density_shading(scene: SceneGraph, dataset: Dataset | None = None) -> SceneGraph:
    """Recompute region intensities (already part of build; exposed for API parity)."""
    return _rebuild(scene)


def set_trace_mode(scene: SceneGraph, mode: str) -> SceneGraph:
    if mode not in ("terminate", "full"):
        raise SceneError(f"unknown trace mode {mode!r}")
    return _rebuild(scene, options=replace(scene.options, trace_mode=mode))


def select_cases(scene: SceneGraph, case_ids: list[int] | None) -> SceneGraph:
    sel = None if case_ids is None else tuple(sorted(case_ids))
    return _rebuild(scene, options=replace(scene.options, case_selection=sel))


# --- wire format -------------------------------------------------------------

def scene_to_json_dict(scene: SceneGraph) -> dict:
    """Canonical wire form of a scene."""
    plots = []
    for sp in sorted(scene.plots, key=lambda s: s.plot_id):
        p = sp.placement
        unit = sp.unit
        plots.append({
            "plot_id": sp.plot_id,
            "axes": {
                "h": {
                    "attr": sp.h_attr,
                    "thresholds": list(unit.h_thresholds) if unit else [],
                    "flipped": p.h_flipped,
                },
                "v": {
                    "attr": sp.v_attr,
                    "thresholds": list(unit.v_thresholds) if unit else [],
                    "flipped": p.v_flipped,
                },
            },
            "origin": list(p.origin),
            "size": list(p.size),
            "swapped": p.swapped,
            "context": sp.is_context,
            "regions": [
                {
                    **sr.region.to_json_dict(),
                    "intensity": sr.intensity,
                    "count": sr.count,
                    "condensed": sr.condensed,
                    "condensed_counts": [list(t) for t in sr.condensed_counts],
                }
                for sr in sp.regions
            ],
        })
    polylines = []
    for pl in scene.polylines:
        polylines.append({
            "case_id": pl.case_id,
            "actual": pl.actual_class,
            "predicted": pl.predicted_class,
            "misclassified": pl.misclassified,
            "terminal_plot": pl.terminal_plot,
            "terminal_region": pl.terminal_region,
            "dimmed": pl.dimmed,
            "summary": pl.summary_kind,
            "summary_count": pl.summary_count,
            "vertices": [
                {
                    "plot": v.plot_id,
                    "x": v.x,
                    "y": v.y,
                    "raw": list(v.raw_pair),
                    "imputed": v.imputed,
                    "context": v.context,
                }
                for v in pl.vertices
            ],
        })
    return {
        "plots": plots,
        "polylines": polylines,
        "evaluation": scene.evaluation.to_json_dict(),
        "options": {
            "trace_mode": scene.options.trace_mode,
            "condensed_regions": sorted(list(t) for t in scene.options.condensed_regions),
            "jitter": scene.options.jitter,
            "context": scene.options.context,
            "summary": scene.options.summary,
            "case_selection": (
                None if scene.options.case_selection is None
                else list(scene.options.case_selection)
            ),
        },
        "warnings": list(scene.warnings),
    }
