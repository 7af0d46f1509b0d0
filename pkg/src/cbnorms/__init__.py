"""Factorization norms of complex matrices and their optimal factorizations.

Six norms (F, B and their completely bounded / factorization counterparts
cbF, cbB, S, T), the norm-optimal factorizations attaining them, trace-
pairing duality witnesses, and a uniqueness verifier.
"""

from .duality import (
    DUALITY_PAIRS,
    ShapeMismatch,
    WitnessCertificate,
    ZeroMatrix,
    find_witness,
    pairing,
    polar_membership,
)
from .elementary import b_norm as b_norm_search
from .elementary import f_norm as f_norm_search
from .elementary import col_norm, hs_norm, op_norm
from .factorizations import (
    BilinearSchurFactorization,
    CbBilinearFactorization,
    CbOperatorFactorization,
    ElementarySchurFactorization,
    NotSelfAdjoint,
    SchurFactorization,
    SelfAdjointSchurFactorization,
    UniquenessVerdict,
    align_ranges,
    bilinear_schur_factorization,
    cb_bilinear_factorization,
    cb_operator_factorization,
    elementary_schur,
    normalized_fcg,
    schur_factorization,
    selfadjoint_schur,
    verify_uniqueness,
)
from .io import read_matrix, write_matrix
from .norms import (
    NormReport,
    SolverFailure,
    b_norm,
    cbb_norm,
    cbb_norm_positive_lp,
    cbf_norm,
    f_norm,
    grothendieck_ratios,
    norm,
    schur_norm,
    t_norm,
)

__all__ = [
    "DUALITY_PAIRS",
    "BilinearSchurFactorization",
    "CbBilinearFactorization",
    "CbOperatorFactorization",
    "ElementarySchurFactorization",
    "NormReport",
    "NotSelfAdjoint",
    "SchurFactorization",
    "SelfAdjointSchurFactorization",
    "ShapeMismatch",
    "SolverFailure",
    "UniquenessVerdict",
    "WitnessCertificate",
    "ZeroMatrix",
    "align_ranges",
    "b_norm",
    "b_norm_search",
    "bilinear_schur_factorization",
    "cb_bilinear_factorization",
    "cb_operator_factorization",
    "cbb_norm",
    "cbb_norm_positive_lp",
    "cbf_norm",
    "col_norm",
    "elementary_schur",
    "f_norm",
    "f_norm_search",
    "find_witness",
    "grothendieck_ratios",
    "hs_norm",
    "norm",
    "normalized_fcg",
    "op_norm",
    "pairing",
    "polar_membership",
    "read_matrix",
    "schur_factorization",
    "schur_norm",
    "selfadjoint_schur",
    "t_norm",
    "verify_uniqueness",
    "write_matrix",
]

__version__ = "0.1.0"
