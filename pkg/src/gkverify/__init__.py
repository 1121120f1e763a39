"""Exact verification toolkit for a family of small unitary-like modules.

The package computes, with exact Gaussian-rational arithmetic throughout:

* polynomial differential operators on two pseudo-orthogonal blocks of
  variables (``poly``, ``weyl``),
* the indefinite orthogonal Lie algebra, its oscillator realization, and
  its universal enveloping algebra in PBW normal form (``liealg``),
* truncated expansions of the distinguished vectors of each module family,
  Casimir and symmetric-square eigenvalue checks, the four-layer mixed
  generator action, and the obstruction solver that decides whether a
  degree-two annihilator element with the required eigenvalue exists
  (``gkmodule``),
* the symmetric square of the adjoint representation, its invariant
  decomposition, and the combined annihilator-ideal criterion (``symsq``),
* a named check registry and command line runner (``checks``, ``cli``).

All arithmetic is exact; every reported equality of truncated series states
agreement up to an explicitly tracked validity degree.
"""

from .exact_arith import I, MINUS_I, ONE, ZERO, GaussianRational, gr
from .poly import (
    DegenerateDaggerError,
    HarmonicBasis,
    MultiPoly,
    NonHomogeneousError,
    RadialSeries,
    TruncationError,
    VariableSpace,
    dagger,
    euler,
    harmonic_basis,
    harmonic_dim,
    laplacian,
    rho,
    rsq,
)
from .weyl import WeylOperator, euler_op, laplacian_op, rsq_op
from .liealg import (
    EnvelopingElement,
    Generator,
    LieElement,
    bracket,
    casimir,
    casimir_operator_closed,
    degree2_symbol,
    dual_sign,
    form_B,
    gamma2,
    generator_matrix,
    generators,
    pbw_normal_form,
    phi,
    phi_inv,
    pi_casimir,
    pi_env,
    pi_generator,
    pi_lie,
    sl2_casimir_op,
    sl2_triple,
)
from .gkmodule import (
    DegenerateDenominatorError,
    KType,
    ModuleParams,
    ObstructionResult,
    PsiPoleError,
    TruncatedElement,
    apply_operator,
    casimir_apply,
    casimir_eigenvalue_check,
    default_samples,
    garfinkle_obstruction,
    ktype_enumeration,
    p_action_check,
    psi_series,
    sl2_apply,
    typical_element,
    verify_membership,
    xi_apply,
    xi_eigenvalue_check,
)
from .symsq import (
    DecompositionReport,
    SymSquareTensor,
    TheoremReport,
    adjoint_action,
    build_Q,
    build_S2,
    build_S4,
    build_Xi,
    decompose_S2,
    gamma2_q_identity,
    gamma2_xi_identity,
    pairing,
    s4_vanishing,
    theorem_ingredients,
    transport,
    transport_inv,
    xi_closed_form,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "gr",
    "ZERO",
    "ONE",
    "I",
    "MINUS_I",
    "VariableSpace",
    "MultiPoly",
    "RadialSeries",
    "HarmonicBasis",
    "harmonic_basis",
    "harmonic_dim",
    "dagger",
    "euler",
    "laplacian",
    "rsq",
    "rho",
    "NonHomogeneousError",
    "DegenerateDaggerError",
    "TruncationError",
    "WeylOperator",
    "euler_op",
    "laplacian_op",
    "rsq_op",
    "Generator",
    "LieElement",
    "EnvelopingElement",
    "generators",
    "generator_matrix",
    "dual_sign",
    "bracket",
    "form_B",
    "phi",
    "phi_inv",
    "pbw_normal_form",
    "degree2_symbol",
    "gamma2",
    "casimir",
    "pi_generator",
    "pi_lie",
    "pi_env",
    "pi_casimir",
    "sl2_triple",
    "sl2_casimir_op",
    "casimir_operator_closed",
    "KType",
    "ModuleParams",
    "TruncatedElement",
    "PsiPoleError",
    "DegenerateDenominatorError",
    "psi_series",
    "typical_element",
    "apply_operator",
    "sl2_apply",
    "casimir_apply",
    "xi_apply",
    "verify_membership",
    "casimir_eigenvalue_check",
    "xi_eigenvalue_check",
    "p_action_check",
    "ktype_enumeration",
    "default_samples",
    "garfinkle_obstruction",
    "ObstructionResult",
    "SymSquareTensor",
    "build_Q",
    "build_S4",
    "build_S2",
    "build_Xi",
    "xi_closed_form",
    "transport",
    "transport_inv",
    "pairing",
    "adjoint_action",
    "gamma2_q_identity",
    "gamma2_xi_identity",
    "s4_vanishing",
    "decompose_S2",
    "DecompositionReport",
    "theorem_ingredients",
    "TheoremReport",
    "__version__",
]
