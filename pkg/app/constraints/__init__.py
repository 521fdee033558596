from app.constraints.generator import (
    ConstraintPoly,
    ConstraintSet,
    GenericExtension,
    all_vanish,
    check_bilinear_on,
    generate_constraints,
)
from app.constraints.reduce import LinearPattern, Pairing, reduce_linear

__all__ = [
    "ConstraintPoly",
    "ConstraintSet",
    "GenericExtension",
    "all_vanish",
    "check_bilinear_on",
    "generate_constraints",
    "LinearPattern",
    "Pairing",
    "reduce_linear",
]
