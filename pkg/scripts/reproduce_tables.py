#!/usr/bin/env python3
"""Evaluate the three bundled reference trees on their datasets and print the
performance tables (error rate, per-class recall / 1-precision, confusion
matrix)."""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from spcdt import evaluate, load_bundled, parse_tree_text, refresh_leaf_stats

DATA = Path(__file__).resolve().parents[1] / "data"

PAIRS = [
    ("iris tree on iris (150 cases)", "iris", "iris"),
    ("wine tree on wine (178 cases)", "wine", "wine"),
    ("full wbc tree on wbc (699 cases)", "wbc_full", "wbc"),
    ("wbc subset tree on wbc (annotations from its 349-case training set)", "wbc_subset", "wbc"),
]


def main() -> None:
    for title, tree_name, ds_name in PAIRS:
        ds = load_bundled(ds_name)
        tree = parse_tree_text((DATA / "trees" / f"{tree_name}.txt").read_text())
        print(f"== {title} ==")
        print(evaluate(tree, ds).to_text())
        stats = refresh_leaf_stats(tree, ds)
        leaves = ", ".join(
            f"{l.class_name}:{l.count}@{l.purity_pct:.2f}%" for l in stats.leaves()
        )
        print(f"leaf coverage: {leaves}")
        print()


if __name__ == "__main__":
    main()
