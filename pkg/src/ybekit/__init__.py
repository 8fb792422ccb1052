"""Finite braces, set-theoretic Yang-Baxter solutions and monomial R-matrices."""

from ybekit.algebra import (
    BraceSubset,
    ChainReport,
    FiniteBrace,
    FiniteRing,
    brace_from_exact_factorization,
    brace_from_nilpotent_ring,
    check_sum_formula,
    generated_subbrace,
    is_ideal,
    make_truncated_polynomial_ring,
    nilpotency_chains,
    quotient_brace,
    socle,
    star_product,
    verify_brace,
    verify_skew_brace,
)
from ybekit.solutions import (
    PartitionedSet,
    SetSolution,
    SolutionProperties,
    check_theorem_567,
    invariant_partition,
    builtin_solution,
    i_retraction,
    multipermutation_level,
    one_generator_solution,
    orbits,
    restrict_solution,
    retraction,
    solution_properties,
    verify_set_ybe,
    yb_map_from_brace,
)
from ybekit.weights import (
    TrivialityWitness,
    WeightSystem,
    builtin_weights,
    construct_nontrivial_bvst,
    is_trivial,
    triviality_witness,
    lift_weights,
    orbit_weights,
    verify_cocycle,
)
from ybekit.rmatrix import (
    MonomialPattern,
    NotMonomialError,
    build_example,
    classify_involutive_matrix,
    conjugate_similarity,
    decode_monomial,
    is_r_matrix,
    kron,
    monomial_from_bvst,
    qybe_check,
)
from ybekit.linalg import pinv, singular_values

__version__ = "0.1.0"
