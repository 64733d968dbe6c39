"""Finite median algebras, median pretrees, and variation of real functions on them."""
from .caps import override as override_caps
from .convexity import (
    convex_hull,
    convex_sets,
    directions,
    interval,
    is_collinear,
    is_convex,
    is_convexity_preserving,
    is_linear,
    is_median_preserving,
    is_monotone,
    is_monotone_function,
    is_subalgebra,
    span,
    subalgebras,
)
from .errors import (
    CoverInvalid,
    InvalidInput,
    MedianBVError,
    NotASubalgebra,
    NotLinear,
    SizeCapExceeded,
    SourceExhausted,
)
from .helly import SelectionResult, select_diagonal, select_finite, verify_limit_variation
from .structures import (
    AxiomReport,
    Structure,
    TernaryRelation,
    check_median_axioms,
    check_median_pretree,
    check_pretree_axioms,
    induced_betweenness,
    is_median_pretree,
    median,
    median_from_relation,
)
from .topology import (
    FiniteTopology,
    OscillationWitness,
    branch,
    check_finite_union_lemma,
    closure,
    is_closed,
    is_fragmented,
    is_hausdorff,
    shadow,
    shadow_topology,
    unfragmented_witness,
)
from .variation import (
    INFINITY,
    RealFunction,
    VariationReport,
    adjacency_gaps,
    deviation_support,
    in_bv_r,
    limit_probe,
    linear_variation,
    restricted_variation,
    total_variation,
    variation_on,
)

__version__ = "0.1.0"
