"""Sections of the cross-polytope B_1^n by lines, hyperplanes and slabs.

``exact`` computes individual sections, ``closed_forms`` gives the extremal
values as functions of (n, t), and ``search`` / ``montecarlo`` provide the
independent numerical routes used by ``verify`` to certify them.
"""

__version__ = "0.1.0"

from .core import (
    ConditioningError,
    CrossPolytopeError,
    DegenerateInputError,
    HyperplaneSpec,
    LineSpec,
    RegimeError,
    SectionResult,
    SlabSpec,
    canonicalize_line,
    line_distance_to_origin,
    project_qk,
)
from .exact import (
    chopped_volume,
    hyperplane_section_volume,
    line_section_length,
    simplex_central_line_length,
    simplex_chord_through_centroid,
    slab_volume,
)
from .closed_forms import (
    ExtremalAnswer,
    ThresholdTable,
    max_hyperplane_volume,
    max_line_length,
    min_line_length,
    min_slab_volume,
    mk,
    simplex_extremes,
    threshold,
    threshold_table,
)

__all__ = [
    "ConditioningError",
    "CrossPolytopeError",
    "DegenerateInputError",
    "ExtremalAnswer",
    "HyperplaneSpec",
    "LineSpec",
    "RegimeError",
    "SectionResult",
    "SlabSpec",
    "ThresholdTable",
    "canonicalize_line",
    "chopped_volume",
    "hyperplane_section_volume",
    "line_distance_to_origin",
    "line_section_length",
    "max_hyperplane_volume",
    "max_line_length",
    "min_line_length",
    "min_slab_volume",
    "mk",
    "project_qk",
    "simplex_central_line_length",
    "simplex_chord_through_centroid",
    "simplex_extremes",
    "slab_volume",
    "threshold",
    "threshold_table",
]
