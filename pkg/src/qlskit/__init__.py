"""Quantum Latin squares, isometry squares, and the codes built from them."""

from .codes import (
    EncoderTensor,
    KLReport,
    NotOrthogonalError,
    NotUEBError,
    UEBReport,
    UnitaryFamily,
    build_encoder,
    build_encoder_from_sppm,
    check_kl_generic,
    check_kl_paper,
    is_ueb,
    pauli_family,
    qlis_to_ueb,
    shift_clock_family,
    ueb_to_qlis,
)
from .formats import FormatError, load, save
from .numlin import DEFAULT_TOL, DimensionError, ValidationReport, classify_operator, is_unitary
from .qlis import (
    CompositionError,
    IsometrySquare,
    SkewPPM,
    check_mutually_orthogonal_qlis,
    check_orthogonal_qlis,
    check_orthogonal_sppm,
    compose_skew_ppm,
    embed_qls_as_qlis,
    identity_square,
    validate_qlis,
    validate_skew_ppm,
)
from .qls import (
    QuantumLatinSquare,
    apply_equivalence,
    canonicalize_first_row,
    check_mutually_orthogonal,
    check_orthogonal,
    classicality_obstruction,
    conjugate,
    generate_cyclic_mols,
    validate_qls,
)

__version__ = "0.1.0"
