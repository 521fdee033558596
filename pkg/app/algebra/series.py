import logging
from fractions import Fraction
from typing import List, Sequence

from app.algebra.structure import Element, StructureConstants
from app.algebra.subspace import Subspace
from app.linalg.matrix import RatMatrix, mat_is_nilpotent, null_space

logger = logging.getLogger(__name__)


def product_space(L: StructureConstants, left: Subspace, right: Subspace) -> Subspace:
    """Span of [x, y] for x in left, y in right."""
    products = []
    for x in left.vectors():
        for y in right.vectors():
            z = L.bracket_vectors(x, y)
            if any(z):
                products.append(z)
    return Subspace.span(products, L.dim)


def _iterate(L: StructureConstants, step) -> List[Subspace]:
    whole = Subspace.whole(L.dim)
    current = product_space(L, whole, whole)
    series = [current]
    while current.dim > 0:
        following = step(current)
        if following == current:
            break
        series.append(following)
        current = following
    return series


def derived_series(L: StructureConstants) -> List[Subspace]:
    """
    L^(1) = [L, L], L^(k+1) = [L^(k), L^(k)]

    Ends at the zero subspace, or at the first term equal to its predecessor.
    """
    return _iterate(L, lambda s: product_space(L, s, s))


def lower_central_series(L: StructureConstants) -> List[Subspace]:
    """
    L^2 = [L, L], L^(k+1) = [L, L^k]

    Ends at the zero subspace, or at the first term equal to its predecessor.
    """
    whole = Subspace.whole(L.dim)
    return _iterate(L, lambda s: product_space(L, whole, s))


def is_solvable(L: StructureConstants) -> bool:
    return derived_series(L)[-1].dim == 0


def is_nilpotent(L: StructureConstants) -> bool:
    return lower_central_series(L)[-1].dim == 0


def left_annihilator(L: StructureConstants) -> Subspace:
    """
    {x : [x, e_j] = 0 for every basis vector e_j}

    Null space of the map x -> ([x, e_1], ..., [x, e_d]) stacked into a
    d^2 x d system.
    """
    # One equation per output coordinate k of [x, e_j]
    rows = []
    for j in range(L.dim):
        for k in range(L.dim):
            row = [L.tensor[i][j][k] for i in range(L.dim)]
            if any(row):
                rows.append(row)
    if not rows:
        return Subspace.whole(L.dim)
    return Subspace.span(null_space(RatMatrix.from_rows(rows, L.dim)), L.dim)


def is_nilpotent_element(L: StructureConstants, x: Element) -> bool:
    """True iff both L_x and R_x are nilpotent."""
    if x.is_zero():
        return True
    return mat_is_nilpotent(L.left_matrix(x.coords)) and mat_is_nilpotent(L.right_matrix(x.coords))


def is_ideal(L: StructureConstants, S: Subspace) -> bool:
    """True iff [L, S] and [S, L] both lie in S."""
    for s in S.vectors():
        for j in range(L.dim):
            e = tuple(Fraction(1) if t == j else Fraction(0) for t in range(L.dim))
            if not S.contains(L.bracket_vectors(e, s)) or not S.contains(L.bracket_vectors(s, e)):
                return False
    return True


def dims(series: Sequence[Subspace]) -> List[int]:
    return [s.dim for s in series]
