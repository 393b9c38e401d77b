"""Vertex-distinguishing edge colorings of simple graphs."""

from .edge_coloring import EdgeColoring, semi_vd_refine, vizing_color
from .errors import (
    GraphParseError,
    NotVdecError,
    PreconditionError,
    StageError,
    VdecError,
    VerificationFailed,
)
from .graph import Graph, is_vdec, k_lower_bound, load_graph, read_graph, save_graph
from .matching import max_matching
from .oracle import exact_chi_vd
from .path_factor import LinearForest, find_linear_forest, kaneko_condition
from .pipeline import general_vdec, long_path_3color, path_recolor, regular_vdec
from .verify import VerificationReport, verify_forest, verify_semi_vd, verify_vd

__all__ = [
    "EdgeColoring",
    "Graph",
    "GraphParseError",
    "LinearForest",
    "NotVdecError",
    "PreconditionError",
    "StageError",
    "VdecError",
    "VerificationFailed",
    "VerificationReport",
    "exact_chi_vd",
    "find_linear_forest",
    "general_vdec",
    "is_vdec",
    "k_lower_bound",
    "kaneko_condition",
    "load_graph",
    "long_path_3color",
    "max_matching",
    "path_recolor",
    "read_graph",
    "regular_vdec",
    "save_graph",
    "semi_vd_refine",
    "verify_forest",
    "verify_semi_vd",
    "verify_vd",
    "vizing_color",
]
