"""Build the k-graph of a k-coloured graph with a complete associative collection of squares."""

from __future__ import annotations

from .category import KGraph, check_category_laws, is_row_finite_no_sources, paths_of_degree
from .cube import (
    CubeMorphism,
    compose,
    edge_morphism,
    enumerate_traversals,
    factorise,
    identity_at,
    normalize,
    restrict,
    segment,
    traverses,
    tricolour_fill,
)
from .dynamics import (
    AnalysisVerdict,
    check_aperiodic,
    check_cofinal,
    noncofinal_ray,
    separating_path,
    simplicity_verdict,
)
from .errors import KGraphError
from .graph import ColouredGraph, ColouredPath, abelianize, build_grid, find_coloured_isomorphisms, validate_path
from .io import Instance, load, save
from .quotient import (
    cylinder_preimage_check,
    equivalent,
    extend_pi,
    quotient_structure_check,
    shuffle_chain,
    witness_chain,
)
from .skeleton import build_theta, extract_skeleton, verify_rho
from .squares import Square, SquareCollection, check_associative, check_complete, flip

__all__ = [
    "AnalysisVerdict",
    "ColouredGraph",
    "ColouredPath",
    "CubeMorphism",
    "Instance",
    "KGraph",
    "KGraphError",
    "Square",
    "SquareCollection",
    "abelianize",
    "build_grid",
    "build_theta",
    "check_aperiodic",
    "check_associative",
    "check_category_laws",
    "check_cofinal",
    "check_complete",
    "compose",
    "cylinder_preimage_check",
    "edge_morphism",
    "enumerate_traversals",
    "equivalent",
    "extend_pi",
    "extract_skeleton",
    "factorise",
    "find_coloured_isomorphisms",
    "flip",
    "identity_at",
    "is_row_finite_no_sources",
    "load",
    "noncofinal_ray",
    "normalize",
    "paths_of_degree",
    "quotient_structure_check",
    "restrict",
    "save",
    "segment",
    "separating_path",
    "shuffle_chain",
    "simplicity_verdict",
    "traverses",
    "tricolour_fill",
    "validate_path",
    "verify_rho",
    "witness_chain",
]
__version__ = "0.1.0"
