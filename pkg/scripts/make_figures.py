#!/usr/bin/env python3
"""Render a set of demonstration figures into out/figures/: the default
staircase scene, a relocated variant, a condensed variant and a full-trace
variant, for each bundled tree/dataset pair."""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from spcdt import (
    apply_transforms,
    build_scene,
    condense,
    derive_plot_units,
    jitter_overlaps,
    load_bundled,
    parse_tree_text,
    set_trace_mode,
    to_svg,
)

DATA = Path(__file__).resolve().parents[1] / "data"
OUT = Path(__file__).resolve().parents[1] / "out" / "figures"

PAIRS = [("wbc_subset", "wbc"), ("wbc_full", "wbc"), ("iris", "iris"), ("wine", "wine")]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for tree_name, ds_name in PAIRS:
        ds = load_bundled(ds_name)
        tree = parse_tree_text((DATA / "trees" / f"{tree_name}.txt").read_text())
        plan = derive_plot_units(tree, ds)
        scene = build_scene(tree, plan, ds)

        (OUT / f"{tree_name}_default.svg").write_text(to_svg(scene))

        relocated = scene
        for k in range(1, len(plan.plots)):
            relocated = apply_transforms(relocated, k, "relocate",
                                         origin=(k * 1.4, 0.0 if k % 2 else 0.6))
        (OUT / f"{tree_name}_relocated.svg").write_text(to_svg(relocated))

        grays = [
            (p.plot_id, i)
            for p in plan.plots
            for i, r in enumerate(p.regions)
            if r.kind == "undecided"
        ]
        if grays:
            condensed = jitter_overlaps(condense(relocated, grays), 0.01)
            (OUT / f"{tree_name}_condensed.svg").write_text(to_svg(condensed))

        (OUT / f"{tree_name}_fulltrace.svg").write_text(to_svg(set_trace_mode(scene, "full")))
        print(f"{tree_name}: rendered into {OUT}")


if __name__ == "__main__":
    main()
