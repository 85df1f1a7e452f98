"""Adjunction n-genus bounds and twist/surgery obstructions for algebraic
models of smooth 4-manifolds."""

__version__ = "0.1.0"

from .lattice import (
    HClass,
    Lattice,
    LatticeError,
    divisibility,
    evaluate,
    is_primitive,
    is_rational_basis,
    pair,
    rank_of,
    smith_normal_form,
)
from .genus import (
    GenusModel,
    ManifoldModel,
    adjunction_genus,
    bounded_n_genus,
    divisibility_distinct_check,
    family_divergence_bound,
    nth_largest_adjunction,
    sw_adjunction_lower_bound,
)
from .nicety import Decomposition, NicetyCertificate, infer_certificate, verify_certificate
from .swfamilies import (
    AlexanderPolynomial,
    FamilyDescriptor,
    alexander_degree,
    boundary_connected_sum,
    elliptic_model,
    knot_surgery_family,
    nuclei_capacity,
    stein_model,
)
from .obstruction import (
    embedding_applies,
    mv_rank_check,
    surgery_applies,
    surgery_finiteness_threshold,
    twist_applies,
    twist_finiteness_threshold,
)
