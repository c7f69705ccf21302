"""Exact solvers for Graph Motif and its colorful and list-colored variants."""
from .core import (
    Instance,
    Kind,
    LimitExceeded,
    MotifError,
    NotATree,
    Occurrence,
    ParseError,
    ShapeViolation,
    SolveResult,
    UnknownVertex,
    VcgNotForest,
    count_non_unique,
    dual_parameter,
    format_witness,
    normalize,
    parse_instance,
    parse_witness,
    serialize_instance,
    validate,
    verify_occurrence,
    vertex_color_graph,
)
from .dispatch import choose_algorithm, solve
from .oracle import OracleLimits, oracle_solve

__all__ = [
    "Instance", "Kind", "LimitExceeded", "MotifError", "NotATree", "Occurrence",
    "ParseError", "ShapeViolation", "SolveResult", "UnknownVertex", "VcgNotForest",
    "count_non_unique", "dual_parameter", "format_witness", "normalize",
    "parse_instance", "parse_witness", "serialize_instance", "validate",
    "verify_occurrence", "vertex_color_graph", "choose_algorithm", "solve",
    "OracleLimits", "oracle_solve",
]
