"""Online and offline weighted edge coloring with exact rational weights."""

from .adversary import (AdversaryPrediction, balanced_composed, gen_composed_tightness, gen_harmonic_worstcase,
                        gen_nf_worstcase)
from .binpack import (Bin, PackResult, exact_min_bins, exact_packing, harmonic_pack, harmonic_type, next_fit,
                      typed_harmonic_pack, typed_next_fit)
from .core import (Coloring, Instance, InstanceStats, OracleRefusal, ParseError, StructureError, TraceStep,
                   WeightedEdge, compute_stats, load_instance, parse_instance, serialize_instance)
from .offline import (StructureReport, analyze_structure, color_edge_disjoint_cycles, color_tree_harmonic,
                      color_tree_nf)
from .online import PaletteState, color_online_harmonic, color_online_nf, select_color
from .oracle import ColoringError, ViolationReport, exact_min_colors, verify_coloring

__all__ = [
    "AdversaryPrediction", "Bin", "Coloring", "ColoringError", "Instance", "InstanceStats", "OracleRefusal",
    "PackResult", "PaletteState", "ParseError", "StructureError", "StructureReport", "TraceStep",
    "ViolationReport", "WeightedEdge", "analyze_structure", "balanced_composed", "color_edge_disjoint_cycles",
    "color_online_harmonic", "color_online_nf", "color_tree_harmonic", "color_tree_nf", "compute_stats",
    "exact_min_bins", "exact_min_colors", "exact_packing", "gen_composed_tightness", "gen_harmonic_worstcase",
    "gen_nf_worstcase", "harmonic_pack", "harmonic_type", "load_instance", "next_fit", "parse_instance",
    "select_color", "serialize_instance", "typed_harmonic_pack", "typed_next_fit", "verify_coloring",
]
