"""Exact computational toolkit for cohomological Laplacians over group rings.

The package computes spectra, kernel projections, and normalized Betti
numbers of the Laplacians Delta_n = d_n* d_n + d_{n-1} d_{n-1}* attached
to a group presentation, exactly where possible: group-ring arithmetic,
Fox derivatives, and coset enumeration are rational/integer, and floats
only enter immediately before eigenvalue computations.
"""

from .certificates import (
    Certificate,
    CertificateReport,
    GapClaim,
    IdealWitness,
    SoundnessCheck,
    certificate_gap_claim,
    check_claim_soundness,
    verify_certificate,
)
from .complexes import (
    CochainComplexSpec,
    LaplacianBundle,
    build_complex,
    build_laplacian,
    cyclic_group_complex,
    cyclic_presentation,
    free_group_complex,
    free_presentation,
    presentation_differentials,
    surface_genus2_complex,
    surface_genus2_presentation,
    validate_chain_identity,
)
from .cosets import (
    ChainOrderError,
    CosetTable,
    QuotientChain,
    Representation,
    SeparationReport,
    SeparationWarning,
    permutation_rep,
    quotient_chain,
    todd_coxeter,
)
from .errors import (
    ChainIdentityError,
    CoholapError,
    EnumerationOverflowError,
    IncompleteComplexError,
    MalformedInputError,
    NotPositiveSemidefiniteError,
    ShapeMismatchError,
    TraceBackendError,
    UnknownGeneratorError,
    UnresolvedGapError,
)
from .groupring import (
    GroupRingElement,
    GroupRingMatrix,
    MalformedPresentation,
    Presentation,
    Word,
    augmentation,
    fox_derivative,
    generator_word,
    involution,
    matrix_adjoint,
    matrix_mul,
    ring_mul,
    trace_e,
    trace_matrix,
    word_reduce,
)
from .pipeline import (
    BetaRef,
    EulerReport,
    GhostReport,
    KazhdanProjections,
    LuckReport,
    ObstructionReport,
    UpperBoundReport,
    betti_finite_quotient,
    betti_report,
    box_obstruction_report,
    euler_class_trace,
    ghost_diagnostic,
    higher_kazhdan_projection,
    l2_betti_upper_bounds,
    lambda_ring_membership,
    laplacian_operator,
    luck_approximation,
)
from .spectral import (
    EvaluatedOperator,
    GapReport,
    ProjectionMatrix,
    evaluate,
    heat_projection,
    kernel_projection,
    lanczos_lowest,
    spectral_gap,
    spectrum_low,
)
from .textform import format_element, format_word, parse_element, parse_word

__version__ = "0.1.0"

__all__ = [
    "BetaRef",
    "Certificate",
    "CertificateReport",
    "ChainIdentityError",
    "ChainOrderError",
    "CochainComplexSpec",
    "CoholapError",
    "CosetTable",
    "EnumerationOverflowError",
    "EulerReport",
    "EvaluatedOperator",
    "GapClaim",
    "GapReport",
    "GhostReport",
    "GroupRingElement",
    "GroupRingMatrix",
    "IdealWitness",
    "IncompleteComplexError",
    "KazhdanProjections",
    "LaplacianBundle",
    "LuckReport",
    "MalformedInputError",
    "MalformedPresentation",
    "NotPositiveSemidefiniteError",
    "ObstructionReport",
    "Presentation",
    "ProjectionMatrix",
    "QuotientChain",
    "Representation",
    "SeparationReport",
    "SeparationWarning",
    "ShapeMismatchError",
    "SoundnessCheck",
    "TraceBackendError",
    "UnknownGeneratorError",
    "UnresolvedGapError",
    "UpperBoundReport",
    "Word",
    "augmentation",
    "betti_finite_quotient",
    "betti_report",
    "box_obstruction_report",
    "build_complex",
    "build_laplacian",
    "certificate_gap_claim",
    "check_claim_soundness",
    "cyclic_group_complex",
    "cyclic_presentation",
    "euler_class_trace",
    "evaluate",
    "format_element",
    "format_word",
    "fox_derivative",
    "free_group_complex",
    "free_presentation",
    "generator_word",
    "ghost_diagnostic",
    "heat_projection",
    "higher_kazhdan_projection",
    "involution",
    "kernel_projection",
    "lanczos_lowest",
    "l2_betti_upper_bounds",
    "lambda_ring_membership",
    "laplacian_operator",
    "luck_approximation",
    "matrix_adjoint",
    "matrix_mul",
    "parse_element",
    "parse_word",
    "permutation_rep",
    "presentation_differentials",
    "quotient_chain",
    "ring_mul",
    "spectral_gap",
    "spectrum_low",
    "surface_genus2_complex",
    "surface_genus2_presentation",
    "todd_coxeter",
    "trace_e",
    "trace_matrix",
    "validate_chain_identity",
    "verify_certificate",
    "word_reduce",
]
