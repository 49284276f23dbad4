"""Hypertree decompositions by recursive balanced-separator search."""
from .bench import Unknown, WidthResult, compute_hw, run_benchmark
from .decomposition import HDFragment, check_normal_form, validate_extended_hd, validate_hd
from .engine import Decision, SearchConfig, SearchOutcome, decide_hw_le_k, decomp, decomp_reference
from .export import export_dot, export_json, import_json
from .hybrid import HybridConfig, Metric, oracle_hw
from .hypergraph import (
    ExtendedComp,
    Hypergraph,
    SpecialEdge,
    components,
    gyo_acyclic,
    load_hyperbench,
    parse_hyperbench,
    serialize_hyperbench,
)

__all__ = [
    "Decision", "ExtendedComp", "HDFragment", "HybridConfig", "Hypergraph", "Metric",
    "SearchConfig", "SearchOutcome", "SpecialEdge", "Unknown", "WidthResult",
    "check_normal_form", "components", "compute_hw", "decide_hw_le_k", "decomp",
    "decomp_reference", "export_dot", "export_json", "gyo_acyclic", "import_json",
    "load_hyperbench", "oracle_hw", "parse_hyperbench", "run_benchmark",
    "serialize_hyperbench", "validate_extended_hd", "validate_hd",
]
