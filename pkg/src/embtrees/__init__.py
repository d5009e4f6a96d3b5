"""Exact enumeration, bijections, and uniform sampling for embedded trees."""

from .core import (
    EPS,
    BigCount,
    CVec,
    EmbTreesError,
    HypothesisViolation,
    InvalidProfile,
    NonIntegerResult,
    IncompatibleDistribution,
    NotInjective,
    NonSurjectiveProfile,
    BudgetExceeded,
    PreconditionViolated,
    ConditionViolated,
    ConditionTViolated,
    InfeasibleProfile,
    StepSet,
    Profile,
    Vertex,
    VertexSet,
    SFunction,
    MarkedSTree,
    EmbeddedCayleyTree,
    SAryTree,
    TypeDistribution,
    validate_profile_for,
    type_distribution_of,
    satisfies_condition_f,
    condition_t,
    condition_t1,
    condition_t2,
    condition_t2_prime,
    condition_t2_dblprime,
    sary_from_injective,
    shape_key,
    equivalent,
    vertex_type,
    canonical_json,
)
from .formulas import (
    TargetTree,
    WeightAssignment,
    count_binary_horizontal,
    count_binary_profile,
    count_cayley_profile,
    count_sary_profile,
    count_cayley_out,
    count_sary_out,
    count_cayley_in,
    count_sary_in,
    count_cayley_complete,
    count_function_family,
    count_cayley_profile_ell1,
    count_cayley_profile_ell2,
    count_tree_in_tree,
    eval_out_gf,
)
from .oracle import (
    EnumerationBudget,
    census_by_type,
    count_tree_in_tree_oracle,
    enumerate_embedded_cayley,
    enumerate_marked_strees,
    enumerate_sary,
    enumerate_sfunctions,
)
from .bijection_nonneg import phi, phi1, phi1_inverse, phi2, phi_inverse, phi_with_trace
from .bijection_general import (
    classify_case,
    psi,
    psi1,
    psi1_inverse,
    psi2,
    psi_inverse,
    psi_with_trace,
)
from .algebra import (
    CycleGraph,
    LaplacianSystem,
    bareiss_determinant,
    cayley_from_spanning,
    closed_P,
    closed_P_out,
    closed_P_refined,
    enumerate_cycle_configurations,
    eval_P,
    eval_P_out,
    eval_P_refined,
    laplacian_minor_det,
    spanning_product_formula,
    spanning_trees_direct,
    tree_in_tree_det,
)
from .sampler import (
    ProfileLaw,
    enumerate_profiles,
    occupation_marginal,
    profile_law,
    sample_embedded_cayley,
    sample_sary,
    sample_sfunction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
