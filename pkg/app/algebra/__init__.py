from app.algebra.structure import (
    Element,
    LeibnizViolation,
    StructureConstants,
    bracket,
    check_leibniz,
    is_lie,
)
from app.algebra.subspace import Subspace
from app.algebra.series import (
    derived_series,
    is_ideal,
    is_nilpotent,
    is_nilpotent_element,
    is_solvable,
    left_annihilator,
    lower_central_series,
    product_space,
)

__all__ = [
    "Element",
    "LeibnizViolation",
    "StructureConstants",
    "bracket",
    "check_leibniz",
    "is_lie",
    "Subspace",
    "derived_series",
    "is_ideal",
    "is_nilpotent",
    "is_nilpotent_element",
    "is_solvable",
    "left_annihilator",
    "lower_central_series",
    "product_space",
]
