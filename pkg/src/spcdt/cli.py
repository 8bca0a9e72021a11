"""Batch command line covering the pipeline: parse, induce, eval, render,
report and serve.  Every subcommand is a thin composition of library calls."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis as analysis_mod
from .dataset import DatasetError, load_bundled, load_csv_file, split
from .induce import InduceParams, induce_id3
from .pairing import derive_plot_units
from .render_svg import RenderConfig, to_svg
from .scene import PlotPlacement, SceneOptions, build_scene, default_placement
from .tree import TreeError, evaluate, from_json, refresh_leaf_stats, to_json
from .tree_text import parse_tree_text


class CliError(Exception):
    pass


def _load_dataset(spec: str, label_column: str = "class"):
    if spec in ("iris", "wine", "wbc"):
        return load_bundled(spec)
    return load_csv_file(spec, label_column=label_column)


def _load_tree(path: str):
    text = Path(path).read_text()
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return from_json(text)
    return parse_tree_text(text)


def _write(path: str | None, content: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(content)
    else:
        Path(path).write_text(content)


def _layout_from_file(path: str | None, plan) -> tuple[list[PlotPlacement], SceneOptions]:
    placements = default_placement(plan)
    options = SceneOptions()
    if path is None:
        return placements, options
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read layout file: {exc}") from None
    by_id = {p.plot_id: p for p in placements}
    for entry in spec.get("placements", []):
        pid = int(entry["plot_id"])
        base = by_id.get(pid, PlotPlacement(pid, (0.0, 0.0)))
        by_id[pid] = PlotPlacement(
            pid,
            tuple(entry.get("origin", base.origin)),
            tuple(entry.get("size", base.size)),
            bool(entry.get("flip_h", base.h_flipped)),
            bool(entry.get("flip_v", base.v_flipped)),
            bool(entry.get("swap", base.swapped)),
        )
    options = SceneOptions(
        trace_mode=spec.get("trace", "terminate"),
        condensed_regions=frozenset(
            (int(a), int(b)) for a, b in spec.get("condense", [])
        ),
        jitter=float(spec.get("jitter", 0.0)),
        context=bool(spec.get("context", False)),
        summary=spec.get("summary", "none"),
        case_selection=(
            tuple(spec["cases"]) if spec.get("cases") is not None else None
        ),
    )
    return sorted(by_id.values(), key=lambda p: p.plot_id), options


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spcdt", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("parse", help="tree text -> canonical JSON")
    p.add_argument("--tree", required=True)
    p.add_argument("--out", default="-")

    p = sub.add_parser("induce", help="induce a tree from a dataset")
    p.add_argument("--data", required=True, help="iris|wine|wbc or a CSV path")
    p.add_argument("--label-column", default="class")
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--max-depth", type=int, default=25)
    p.add_argument("--min-gain", type=float, default=1e-12)
    p.add_argument("--out", default="-")

    p = sub.add_parser("eval", help="evaluate a tree on a dataset")
    p.add_argument("--tree", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label-column", default="class")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("render", help="render the scene to SVG")
    p.add_argument("--tree", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label-column", default="class")
    p.add_argument("--layout", help="layout overrides JSON file")
    p.add_argument("--trace", choices=["terminate", "full"])
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="audit reports")
    p.add_argument("kind", choices=["overgen", "margins", "split-compare"])
    p.add_argument("--tree", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label-column", default="class")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--train-fraction", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default="-")

    p = sub.add_parser("serve", help="start the interactive session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8646)
    p.add_argument("--ui-dir", help="directory with the built frontend bundle")

    return ap


def run(argv: list[str]) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.cmd == "parse":
            tree = _load_tree(args.tree)
            _write(args.out, to_json(tree))
        elif args.cmd == "induce":
            data = _load_dataset(args.data, args.label_column)
            params = InduceParams(args.min_leaf, args.max_depth, args.min_gain)
            _write(args.out, to_json(induce_id3(data, params)))
        elif args.cmd == "eval":
            tree = _load_tree(args.tree)
            data = _load_dataset(args.data, args.label_column)
            report = evaluate(tree, data)
            if args.json:
                _write("-", json.dumps(report.to_json_dict(), indent=2) + "\n")
            else:
                _write("-", report.to_text() + "\n")
        elif args.cmd == "render":
            tree = _load_tree(args.tree)
            data = _load_dataset(args.data, args.label_column)
            tree = refresh_leaf_stats(tree, data)
            plan = derive_plot_units(tree, data)
            placements, options = _layout_from_file(args.layout, plan)
            if args.trace:
                from dataclasses import replace
                options = replace(options, trace_mode=args.trace)
            scene = build_scene(tree, plan, data, placements, options)
            _write(args.out, to_svg(scene, RenderConfig()))
        elif args.cmd == "report":
            tree = _load_tree(args.tree)
            data = _load_dataset(args.data, args.label_column)
            if args.kind == "overgen":
                rep = analysis_mod.overgeneralization(tree, data)
            elif args.kind == "margins":
                rep = analysis_mod.margins(tree, data, args.epsilon)
            else:
                train, validation = split(data, args.train_fraction, args.seed)
                rep = analysis_mod.split_compare(tree, train, validation)
            out = (
                json.dumps(rep.to_json_dict(), indent=2) + "\n"
                if args.json
                else rep.to_text() + "\n"
            )
            _write(args.out, out)
        elif args.cmd == "serve":
            import uvicorn

            from .service import create_app

            ui_dir = args.ui_dir
            if ui_dir is None:
                bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
                if bundled.is_dir():
                    ui_dir = str(bundled)
            app = create_app(ui_dir=ui_dir)
            uvicorn.run(app, host=args.host, port=args.port)
        return 0
    except (DatasetError, TreeError, CliError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
