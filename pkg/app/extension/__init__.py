from app.extension.spec import BasisTransform, ExtensionSpec, ShiftParams, build_L
from app.extension.residuals import ResidualReport, residuals_4, residuals_all, residuals_sigma
from app.extension.checks import (
    NilradicalCertificate,
    certify_nilradical,
    commutators,
    nilindependent,
    off_diagonal_violations,
    shape_check,
    shape_violations,
    support_positions,
)
from app.extension.transforms import (
    G1_SLOTS_4,
    apply_basis_transform,
    apply_chain,
    apply_shift,
    check_G_preserves_tri,
    g1_matrix,
    g2_matrix,
    invert_chain,
    recombine_X,
    shift_pivots,
)
from app.extension.normalize import (
    eliminate_inner,
    eliminate_sigma,
    eliminate_support,
    normalize_4,
    scale_support,
    zero_pattern,
)
from app.extension.theorem import TheoremReport, theorem_report
from app.extension.instances import maximal_diagonal_spec, random_chain

__all__ = [
    "BasisTransform",
    "ExtensionSpec",
    "ShiftParams",
    "build_L",
    "ResidualReport",
    "residuals_4",
    "residuals_all",
    "residuals_sigma",
    "NilradicalCertificate",
    "certify_nilradical",
    "commutators",
    "nilindependent",
    "off_diagonal_violations",
    "shape_check",
    "shape_violations",
    "support_positions",
    "G1_SLOTS_4",
    "apply_basis_transform",
    "apply_chain",
    "apply_shift",
    "check_G_preserves_tri",
    "g1_matrix",
    "g2_matrix",
    "invert_chain",
    "recombine_X",
    "shift_pivots",
    "eliminate_inner",
    "eliminate_sigma",
    "eliminate_support",
    "normalize_4",
    "scale_support",
    "zero_pattern",
    "TheoremReport",
    "theorem_report",
    "maximal_diagonal_spec",
    "random_chain",
]
