"""Session-oriented HTTP/JSON API for the interactive frontend.

A session owns a dataset, a working tree, the derived pairing plan, plot
placements and scene options.  Edits are serialized per session; reads serve
the last published scene snapshot, so concurrent readers never observe a
half-applied edit.  Layout edits can never change the embedded evaluation.
"""
from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import analysis as analysis_mod
from .dataset import Dataset, DatasetError, load_bundled, load_csv, split
from .induce import InduceParams, induce_id3
from .pairing import derive_plot_units
from .scene import (
    PlotPlacement,
    SceneOptions,
    build_scene,
    scene_to_json_dict,
    default_placement,
)
from .tree import (
    DecisionTree,
    SplitNode,
    TreeError,
    TreeFormatError,
    adjust_threshold,
    evaluate,
    from_json,
    predict,
    refresh_leaf_stats,
)
from .tree_text import parse_tree_text


@dataclass(frozen=True)
class SessionState:
    tree: DecisionTree
    placements: tuple[PlotPlacement, ...]
    options: SceneOptions


class Session:
    def __init__(self, session_id: str, dataset: Dataset, tree: DecisionTree):
        self.session_id = session_id
        self.dataset = dataset
        self.lock = threading.Lock()
        self.undo_stack: list[SessionState] = []
        tree = refresh_leaf_stats(tree, dataset)
        plan = derive_plot_units(tree, dataset)
        self.state = SessionState(tree, tuple(default_placement(plan)), SceneOptions())
        self.plan = plan
        self._publish()

    def _publish(self) -> None:
        scene = build_scene(
            self.state.tree, self.plan, self.dataset,
            list(self.state.placements), self.state.options,
        )
        self.scene = scene
        self.scene_json = scene_to_json_dict(scene)

    def apply(self, new_state: SessionState, tree_changed: bool) -> None:
        """Swap in a new state; callers hold the session lock."""
        self.undo_stack.append(self.state)
        self.state = new_state
        if tree_changed:
            self.plan = derive_plot_units(new_state.tree, self.dataset)
        self._publish()

    def undo(self) -> bool:
        if not self.undo_stack:
            return False
        previous = self.undo_stack.pop()
        tree_changed = previous.tree is not self.state.tree
        self.state = previous
        if tree_changed:
            self.plan = derive_plot_units(previous.tree, self.dataset)
        self._publish()
        return True


class CreateSession(BaseModel):
    dataset_id: str | None = None
    csv: str | None = None
    label_column: str = "class"
    tree_text: str | None = None
    tree_json: dict | str | None = None
    induce_params: dict | None = None


class ThresholdEdit(BaseModel):
    node_id: int
    value: float


class LayoutEdit(BaseModel):
    relocate: dict | None = None           # {plot_id, origin: [x, y]}
    flip: dict | None = None               # {plot_id, axis: "h"|"v"}
    swap: int | None = None                # plot_id
    condense: list[list[int]] | None = None  # [[plot_id, region_index], ...]
    toggle_condense: list[int] | None = None  # [plot_id, region_index]
    uncondense: bool | None = None
    jitter: float | None = None
    trace_mode: str | None = None
    context: bool | None = None
    summary: str | None = None
    case_selection: list[int] | None = None


def create_app(ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="spcdt service")
    sessions: dict[str, Session] = {}
    counter = itertools.count(1)

    def get_session(session_id: str) -> Session:
        s = sessions.get(session_id)
        if s is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return s

    @app.post("/sessions")
    def create_session(body: CreateSession):
        try:
            if body.csv is not None:
                dataset = load_csv(body.csv, label_column=body.label_column)
            elif body.dataset_id is not None:
                dataset = load_bundled(body.dataset_id)
            else:
                raise HTTPException(422, "one of dataset_id or csv is required")
            if body.tree_text is not None:
                tree = parse_tree_text(body.tree_text)
            elif body.tree_json is not None:
                text = (
                    body.tree_json
                    if isinstance(body.tree_json, str)
                    else json.dumps(body.tree_json)
                )
                tree = from_json(text)
            else:
                params = InduceParams(**(body.induce_params or {}))
                tree = induce_id3(dataset, params)
        except (DatasetError, TreeFormatError, TypeError) as exc:
            raise HTTPException(422, str(exc)) from None
        session_id = f"s{next(counter)}"
        sessions[session_id] = Session(session_id, dataset, tree)
        return {"session_id": session_id}

    @app.get("/sessions/{session_id}/scene")
    def get_scene(session_id: str):
        return JSONResponse(get_session(session_id).scene_json)

    @app.get("/sessions/{session_id}/evaluation")
    def get_evaluation(session_id: str):
        s = get_session(session_id)
        return evaluate(s.state.tree, s.dataset).to_json_dict()

    @app.get("/sessions/{session_id}/tree")
    def get_tree(session_id: str):
        s = get_session(session_id)
        from .tree import to_json

        return JSONResponse(json.loads(to_json(s.state.tree)))

    @app.patch("/sessions/{session_id}/threshold")
    def patch_threshold(session_id: str, body: ThresholdEdit):
        s = get_session(session_id)
        with s.lock:
            tree = s.state.tree
            try:
                node = tree.node(body.node_id)
            except TreeError:
                raise HTTPException(404, f"unknown node {body.node_id}") from None
            if not isinstance(node, SplitNode):
                raise HTTPException(422, f"node {body.node_id} is a leaf")
            before = evaluate(tree, s.dataset)
            pred_before = {
                c.id: predict(tree, c, s.dataset).class_name for c in s.dataset.cases
            }
            new_tree = refresh_leaf_stats(
                adjust_threshold(tree, body.node_id, body.value), s.dataset
            )
            after = evaluate(new_tree, s.dataset)
            changed = sorted(
                c.id
                for c in s.dataset.cases
                if predict(new_tree, c, s.dataset).class_name != pred_before[c.id]
            )
            s.apply(replace(s.state, tree=new_tree), tree_changed=True)
            return {
                "scene": s.scene_json,
                "delta": {
                    "error_rate_before": before.error_rate,
                    "error_rate_after": after.error_rate,
                    "changed_cases": changed,
                },
            }

    @app.patch("/sessions/{session_id}/layout")
    def patch_layout(session_id: str, body: LayoutEdit):
        s = get_session(session_id)
        with s.lock:
            placements = {p.plot_id: p for p in s.state.placements}
            options = s.state.options
            n_plots = len(s.plan.plots)

            def plot_placement(pid: int) -> PlotPlacement:
                if pid not in placements:
                    raise HTTPException(404, f"unknown plot {pid}")
                return placements[pid]

            if body.relocate is not None:
                pid = int(body.relocate["plot_id"])
                origin = body.relocate.get("origin")
                if origin is None or len(origin) != 2:
                    raise HTTPException(422, "relocate needs origin [x, y]")
                placements[pid] = replace(plot_placement(pid), origin=(float(origin[0]), float(origin[1])))
            if body.flip is not None:
                pid = int(body.flip["plot_id"])
                axis = body.flip.get("axis", "h")
                p = plot_placement(pid)
                if axis == "h":
                    placements[pid] = replace(p, h_flipped=not p.h_flipped)
                elif axis == "v":
                    placements[pid] = replace(p, v_flipped=not p.v_flipped)
                else:
                    raise HTTPException(422, f"unknown flip axis {axis!r}")
            if body.swap is not None:
                p = plot_placement(int(body.swap))
                placements[int(body.swap)] = replace(p, swapped=not p.swapped)
            if body.uncondense:
                options = replace(options, condensed_regions=frozenset())
            def check_region(pair) -> tuple[int, int]:
                if len(pair) != 2:
                    raise HTTPException(422, "condense entries are [plot_id, region_index]")
                pid, ridx = int(pair[0]), int(pair[1])
                if pid >= n_plots or ridx >= len(s.plan.plot(pid).regions):
                    raise HTTPException(422, f"no region ({pid}, {ridx})")
                return pid, ridx

            if body.condense is not None:
                extra = {check_region(pair) for pair in body.condense}
                options = replace(options, condensed_regions=options.condensed_regions | extra)
            if body.toggle_condense is not None:
                key = check_region(body.toggle_condense)
                selected = set(options.condensed_regions)
                selected.symmetric_difference_update({key})
                options = replace(options, condensed_regions=frozenset(selected))
            if body.jitter is not None:
                if body.jitter < 0:
                    raise HTTPException(422, "jitter must be >= 0")
                options = replace(options, jitter=float(body.jitter))
            if body.trace_mode is not None:
                if body.trace_mode not in ("terminate", "full"):
                    raise HTTPException(422, f"unknown trace mode {body.trace_mode!r}")
                options = replace(options, trace_mode=body.trace_mode)
            if body.context is not None:
                options = replace(options, context=bool(body.context))
            if body.summary is not None:
                if body.summary not in ("none", "centers", "minmax"):
                    raise HTTPException(422, f"unknown summary {body.summary!r}")
                options = replace(options, summary=body.summary)
            if body.case_selection is not None:
                options = replace(
                    options,
                    case_selection=tuple(sorted(int(i) for i in body.case_selection)),
                )
            new_state = SessionState(
                s.state.tree,
                tuple(sorted(placements.values(), key=lambda p: p.plot_id)),
                options,
            )
            s.apply(new_state, tree_changed=False)
            return JSONResponse(s.scene_json)

    @app.get("/sessions/{session_id}/reports/{kind}")
    def get_report(session_id: str, kind: str, epsilon: float | None = None,
                   train_fraction: float = 0.9, seed: int = 0):
        s = get_session(session_id)
        if kind == "overgen":
            return analysis_mod.overgeneralization(s.state.tree, s.dataset).to_json_dict()
        if kind == "margins":
            return analysis_mod.margins(s.state.tree, s.dataset, epsilon).to_json_dict()
        if kind == "split-compare":
            try:
                train, validation = split(s.dataset, train_fraction, seed)
            except DatasetError as exc:
                raise HTTPException(422, str(exc)) from None
            return analysis_mod.split_compare(s.state.tree, train, validation).to_json_dict()
        raise HTTPException(404, f"unknown report {kind!r}")

    @app.post("/sessions/{session_id}/undo")
    def post_undo(session_id: str):
        s = get_session(session_id)
        with s.lock:
            if not s.undo():
                raise HTTPException(422, "nothing to undo")
            return JSONResponse(s.scene_json)

    @app.get("/sessions/{session_id}/workspace")
    def get_workspace(session_id: str):
        """Snapshot of the editable state, suitable for saving to disk."""
        s = get_session(session_id)
        from .tree import to_json

        return {
            "tree": json.loads(to_json(s.state.tree)),
            "placements": [
                {
                    "plot_id": p.plot_id,
                    "origin": list(p.origin),
                    "size": list(p.size),
                    "flip_h": p.h_flipped,
                    "flip_v": p.v_flipped,
                    "swap": p.swapped,
                }
                for p in s.state.placements
            ],
            "options": s.scene_json["options"],
        }

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

        @app.get("/")
        def index():
            return RedirectResponse("/ui/")

    return app
