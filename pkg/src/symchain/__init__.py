"""Exact-arithmetic constraint-chain analysis for first-order Lagrangians.

The symplectic (Faddeev-Jackiw style) procedure with the truncation
rule generates second-class constraint chains from left null vectors of
extended symplectic matrices; an independent Dirac-Bergmann consistency
oracle validates every run.  All computation is over exact rationals.
"""

from .chain import (
    Candidate,
    ChainError,
    ChainOptions,
    ChainReport,
    Constraint,
    ExtendedSymplecticMatrix,
    Termination,
    assemble_extended_matrix,
    assemble_rhs,
    build_base_tensor,
    find_new_constraints,
    run_chain,
    span_fingerprint,
)
from .dirac import (
    CanonicalPairing,
    ConstraintMatrix,
    OracleResult,
    SpanVerdict,
    classify,
    compare_spans,
    consistency_algorithm,
    derive_pairing,
    poisson_bracket,
)
from .expressions import (
    Expression,
    ParseError,
    UnknownVariableError,
    VarTable,
    linear_expression,
    parse_expression,
    reduce_modulo_linear,
)
from .lattice import (
    FieldSet,
    LatticeSpec,
    SiteStencil,
    build_schwinger,
    difference_matrix,
    map_constraint_to_sites,
)
from .linalg import (
    NullBasis,
    PolyMatrix,
    RationalMatrix,
    determinant,
    generic_rank,
    left_null_space,
    rank,
    rref,
)
from .model import (
    FirstOrderModel,
    ModelFormatError,
    PhaseSpace,
    SecondOrderLagrangian,
    legendre_transform,
    load_model,
    save_model,
)

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "CanonicalPairing",
    "ChainError",
    "ChainOptions",
    "ChainReport",
    "Constraint",
    "ConstraintMatrix",
    "Expression",
    "ExtendedSymplecticMatrix",
    "FieldSet",
    "FirstOrderModel",
    "LatticeSpec",
    "ModelFormatError",
    "NullBasis",
    "OracleResult",
    "ParseError",
    "PhaseSpace",
    "PolyMatrix",
    "RationalMatrix",
    "SecondOrderLagrangian",
    "SiteStencil",
    "SpanVerdict",
    "Termination",
    "UnknownVariableError",
    "VarTable",
    "assemble_extended_matrix",
    "assemble_rhs",
    "build_base_tensor",
    "build_schwinger",
    "classify",
    "compare_spans",
    "consistency_algorithm",
    "derive_pairing",
    "determinant",
    "difference_matrix",
    "find_new_constraints",
    "generic_rank",
    "left_null_space",
    "legendre_transform",
    "linear_expression",
    "load_model",
    "map_constraint_to_sites",
    "parse_expression",
    "poisson_bracket",
    "rank",
    "reduce_modulo_linear",
    "rref",
    "run_chain",
    "save_model",
    "span_fingerprint",
]
