"""Finite-scale Iwasawa (KAN) decompositions for the classical matrix groups
over Schatten ideals: spectral frames, triadic projections, the ten family
structures, group factorization, and the triangular-truncation experiment.
"""

from .errors import (
    BadDimension,
    ConstraintViolation,
    ConvergenceFailure,
    DimensionMismatch,
    FrameMismatch,
    IwasawaError,
    NotHermitian,
    NotPositive,
    NotSquare,
    Singular,
    SingularCompression,
)
from .families import (
    FamilyTag,
    MembershipReport,
    StructureContext,
    algebra_membership,
    coefficient_count,
    context_invariant_residuals,
    default_coefficients,
    group_membership,
    parse_family,
    regular_element,
    sample_algebra,
    sample_group,
    sign_rule_pairing,
    structure_context,
    verify_sign_rule,
)
from .frame import (
    RegularityClass,
    SpectralFrame,
    build_frame,
    classify,
    from_frame,
    to_frame,
)
from .kan import (
    ClosureSummary,
    ConvergenceRow,
    KanFactors,
    NestFactors,
    closure_study,
    kan_factor,
    nest_factor,
    truncation_convergence,
    verify_kan,
)
from .linalg import (
    adjoint,
    derive_seed,
    hermitian_eig,
    matrix_exp,
    random_ginibre,
    schatten_norm,
    solve,
)
from .triangular import (
    GrowthRow,
    TriadicParts,
    diag_expectation,
    hilbert_witness,
    triadic_decompose,
    triangular_projection,
    truncation_growth,
)

__version__ = "0.1.0"
