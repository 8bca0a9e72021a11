"""Decision-tree audit and visualization in shifted paired coordinates."""

from .dataset import (
    AttributeMeta,
    Case,
    Dataset,
    DatasetError,
    attribute_range,
    load_bundled,
    load_csv,
    load_csv_file,
    split,
    to_csv,
)
from .tree import (
    DecisionTree,
    EvaluationReport,
    LeafNode,
    SplitNode,
    TreeError,
    TreeFormatError,
    adjust_threshold,
    evaluate,
    from_json,
    predict,
    refresh_leaf_stats,
    to_json,
)
from .tree_text import format_tree_text, parse_tree_text
from .induce import InduceParams, induce_id3
from .pairing import PairingError, PairingPlan, PlotUnit, Region, derive_plot_units, region_of
from .scene import (
    PlotPlacement,
    SceneGraph,
    SceneOptions,
    apply_transforms,
    build_scene,
    condense,
    context_and_summary,
    default_placement,
    jitter_overlaps,
    route_case,
    scene_to_json_dict,
    set_trace_mode,
)
from .render_svg import RenderConfig, RenderError, to_svg
from .analysis import margins, overgeneralization, split_compare

__all__ = [name for name in dir() if not name.startswith("_")]
