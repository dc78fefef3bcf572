"""Reeb graphs with exact rational heights.

Smoothing, truncation, the maps between truncated smoothings, and the
family of truncated interleaving distances, all over exact arithmetic.
"""

from .errors import (
    BandOutOfRange,
    DocumentError,
    DomainMismatch,
    EmptyTruncatedDomain,
    GraphInvalid,
    InvalidParams,
    MorphismError,
    NegativeEpsilon,
    NegativeTau,
    NotInTruncation,
    ParamsOutOfRange,
    ReebflowError,
    SlopePairOutOfRange,
    TauExceedsEpsilon,
)
from .flowmaps import (
    ETA,
    NU,
    OMEGA,
    RHO,
    FlowSpace,
    SubgraphSelection,
    apply_flow_functor,
    backward_view,
    backward_view_selection,
    band_image,
    flow_space,
    intersect_selections,
    make_flow_map,
    restrict_to_truncation,
)
from .generators import generate
from .graphio import parse, serialize
from .graphs import (
    EMPTY_GRAPH,
    EdgeRef,
    Interval,
    PointRef,
    ReebGraph,
    VertexRef,
    as_height,
    component_images,
    components,
    disjoint_union,
    forks,
    image,
    longest_up_down,
    normalize_regular,
    reeb_graph,
    segment,
    subdivide_at,
    validate,
)
from .iso import IsoResult, are_isomorphic
from .maps import (
    ReebMorphism,
    compose,
    equal_maps,
    identity_morphism,
    make_morphism,
    verify_morphism,
)
from .metrics import (
    EXHAUSTED,
    FOUND,
    INFINITE,
    NOT_FOUND,
    Certificate,
    DistanceBracket,
    InterleavingWitness,
    LowerBound,
    SearchResult,
    coarse_witness,
    estimate_distance,
    lower_bounds,
    search_interleaving,
    transfer_chain,
    transfer_interleaving,
    verify_interleaving,
)
from .properties import UNBOUNDED, TailReport, is_safe, is_tailed, is_weakly_safe, tail_report
from .render import render
from .smoothing import (
    FlowParams,
    SmoothResult,
    TruncationResult,
    smooth,
    truncate,
    truncated_smooth,
)

__version__ = "0.1.0"

__all__ = [
    "EMPTY_GRAPH",
    "ETA",
    "EXHAUSTED",
    "FOUND",
    "INFINITE",
    "NOT_FOUND",
    "NU",
    "OMEGA",
    "RHO",
    "UNBOUNDED",
    "BandOutOfRange",
    "Certificate",
    "DistanceBracket",
    "DocumentError",
    "DomainMismatch",
    "EdgeRef",
    "EmptyTruncatedDomain",
    "FlowParams",
    "FlowSpace",
    "GraphInvalid",
    "InterleavingWitness",
    "LowerBound",
    "SearchResult",
    "Interval",
    "InvalidParams",
    "IsoResult",
    "MorphismError",
    "NegativeEpsilon",
    "NegativeTau",
    "NotInTruncation",
    "ParamsOutOfRange",
    "PointRef",
    "ReebGraph",
    "ReebMorphism",
    "ReebflowError",
    "SlopePairOutOfRange",
    "SmoothResult",
    "SubgraphSelection",
    "TailReport",
    "TauExceedsEpsilon",
    "TruncationResult",
    "VertexRef",
    "apply_flow_functor",
    "are_isomorphic",
    "as_height",
    "backward_view",
    "backward_view_selection",
    "band_image",
    "coarse_witness",
    "component_images",
    "components",
    "compose",
    "disjoint_union",
    "equal_maps",
    "estimate_distance",
    "flow_space",
    "forks",
    "generate",
    "identity_morphism",
    "image",
    "intersect_selections",
    "is_safe",
    "is_tailed",
    "is_weakly_safe",
    "longest_up_down",
    "lower_bounds",
    "make_flow_map",
    "make_morphism",
    "normalize_regular",
    "parse",
    "reeb_graph",
    "render",
    "restrict_to_truncation",
    "search_interleaving",
    "segment",
    "serialize",
    "smooth",
    "subdivide_at",
    "tail_report",
    "transfer_chain",
    "transfer_interleaving",
    "truncate",
    "truncated_smooth",
    "validate",
    "verify_interleaving",
    "verify_morphism",
]
