import itertools
import logging
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Tuple

from app.core.exceptions import ConstraintViolationError, DimensionMismatchError, ShapeError
from app.extension.checks import support_positions
from app.extension.residuals import residuals_all
from app.extension.spec import ExtensionSpec, ShiftParams
from app.extension.transforms import (
    apply_basis_transform,
    apply_shift,
    g1_matrix,
    g2_matrix,
    recombine_X,
    shift_pivots,
)
from app.linalg.matrix import RatMatrix, rref
from app.triangular.basis import tri_basis

logger = logging.getLogger(__name__)

Pattern = FrozenSet[Tuple]

_SCALE_RANGE = (-2, -1, 0, 1, 2)


def canonical_recombination(spec: ExtensionSpec) -> ExtensionSpec:
    """
    Recombine the X's so the diagonal generators of A^1..A^f are in RREF

    Row a of the generator matrix is (A^a_{12,12}, ..., A^a_{n-1n,n-1n}).
    Specs that differ by a recombination land on the same X's. Dependent
    generator rows leave the spec unchanged.
    """
    basis = tri_basis(spec.n)
    generators = [basis.offset(j, j + 1) for j in range(1, spec.n)]
    width = len(generators)
    # [D | I] reduces to [RREF(D) | M] with M D = RREF(D)
    augmented = RatMatrix.from_rows(
        [
            [a[g, g] for g in generators] + [int(alpha == beta) for beta in range(spec.f)]
            for alpha, a in enumerate(spec.A)
        ]
    )
    reduced, _, pivots = rref(augmented)
    if any(p >= width for p in pivots):
        logger.debug("Diagonal generators are dependent; keeping the X's")
        return spec
    M = RatMatrix.from_rows([row[width:] for row in reduced.entries])
    if M == RatMatrix.identity(spec.f):
        return spec
    return recombine_X(spec, M)


def eliminate_inner(spec: ExtensionSpec) -> ExtensionSpec:
    """
    Shift every X so that A vanishes at the pivot of each shift component

    For n = 4 this zeroes A at (12,13), (12,14), (23,13), (23,24), (34,14).
    """
    mu = [[Fraction(0)] * spec.r for _ in range(spec.f)]
    for pq, (row, col), coefficient in shift_pivots(spec.n):
        for alpha in range(spec.f):
            mu[alpha][pq] = -spec.A[alpha][row, col] / coefficient
    if not any(v for row in mu for v in row):
        return spec
    return apply_shift(spec, ShiftParams(tuple(tuple(row) for row in mu)))


def eliminate_support(spec: ExtensionSpec) -> ExtensionSpec:
    """
    Remove A support entries at (ik, ab) by unit triangular basis changes

    Only entries where some A^a has A^a_{ab,ab} != A^a_{ik,ik} can be removed;
    the others are left in place.
    """
    current = spec
    for row, col in sorted(support_positions(spec.n, "A")):
        if not any(a[row, col] for a in current.A):
            continue
        pivot = next(
            (a for a in current.A if a[col, col] != a[row, row]),
            None,
        )
        if pivot is None:
            logger.debug(f"Keeping support entry at ({row},{col}): equal diagonals")
            continue
        g = -pivot[row, col] / (pivot[col, col] - pivot[row, row])
        current = apply_basis_transform(current, g1_matrix(spec.n, {(_idx(spec.n, row), _idx(spec.n, col)): g}))
    return current


def _idx(n: int, offset: int) -> Tuple[int, int]:
    t = tri_basis(n).order[offset]
    return (t.i, t.k)


def _scaling_exponents(n: int, row: int, col: int) -> Tuple[int, ...]:
    """Exponents of g_1..g_(n-1) in the factor g_ik / g_ab picked up at (ik, ab)."""
    basis = tri_basis(n)
    ik, ab = basis.order[row], basis.order[col]
    return tuple(
        int(ik.i <= j < ik.k) - int(ab.i <= j < ab.k) for j in range(1, n)
    )


def scale_support(spec: ExtensionSpec) -> ExtensionSpec:
    """
    Scale off-diagonal entries to 1 with diagonal basis changes

    Entries are visited in row-major order; each one is normalised with a
    scaling that leaves every previously normalised entry fixed, when such a
    scaling exists.
    """
    current = spec
    fixed: List[Tuple[int, ...]] = []
    candidates = sorted(
        itertools.product(_SCALE_RANGE, repeat=spec.n - 1),
        key=lambda u: (sum(abs(x) for x in u), u),
    )
    for row in range(spec.r):
        for col in range(row + 1, spec.r):
            values = [m[row, col] for pair in zip(current.A, current.B) for m in pair if m[row, col]]
            if not values:
                continue
            exponents = _scaling_exponents(spec.n, row, col)
            direction = _find_direction(exponents, fixed, candidates)
            if direction is None:
                logger.debug(f"No free scaling left for ({row},{col})")
                continue
            fixed.append(exponents)
            value = values[0]
            if value == 1:
                continue
            pairing = sum(e * u for e, u in zip(exponents, direction))
            lam = 1 / value if pairing == 1 else value
            scales = [lam ** u for u in direction]
            current = apply_basis_transform(current, g2_matrix(spec.n, scales))
    return current


def _find_direction(
    exponents: Sequence[int],
    fixed: Sequence[Sequence[int]],
    candidates: Sequence[Tuple[int, ...]],
) -> Optional[Tuple[int, ...]]:
    if not any(exponents):
        return None
    for u in candidates:
        pairing = sum(e * x for e, x in zip(exponents, u))
        if pairing not in (1, -1):
            continue
        if all(sum(e * x for e, x in zip(c, u)) == 0 for c in fixed):
            return u
    return None


def eliminate_sigma(spec: ExtensionSpec) -> ExtensionSpec:
    """
    Remove sigma^{gb}_{1n} using a central shift, when some A^g_{1n,1n} != 0

    With gamma the first such index, mu^b_{1n} = -sigma^{gb}_{1n} / A^g_{1n,1n}
    for every b != gamma.
    """
    center = spec.r - 1
    gamma = next((g for g in range(spec.f) if spec.A[g][center, center] != 0), None)
    if gamma is None:
        return spec
    mu = [[Fraction(0)] * spec.r for _ in range(spec.f)]
    for beta in range(spec.f):
        if beta != gamma:
            mu[beta][center] = -spec.sigma[gamma][beta][center] / spec.A[gamma][center, center]
    if not any(row[center] for row in mu):
        return spec
    logger.debug(f"Eliminating sigma through X{gamma + 1}")
    return apply_shift(spec, ShiftParams(tuple(tuple(row) for row in mu)))


def normalize_4(spec: ExtensionSpec) -> ExtensionSpec:
    """
    Canonical representative of an n = 4 extension

    Runs the X recombination, inner shift elimination, unit triangular
    elimination of the support entries, diagonal scaling, then sigma
    elimination.

    Raises:
        DimensionMismatchError: If n != 4
        ShapeError: If some A^a is not upper-triangular
        ConstraintViolationError: If the spec fails the residual checks
    """
    if spec.n != 4:
        raise DimensionMismatchError(f"normalize_4 needs n=4, got n={spec.n}")
    for alpha, a in enumerate(spec.A, start=1):
        if not a.is_upper_triangular():
            raise ShapeError(f"A{alpha} is not upper-triangular")
    report = residuals_all(spec)
    if not report.ok:
        failing = ", ".join(report.failing_families())
        raise ConstraintViolationError("residuals", f"spec fails residual families {failing}")
    current = canonical_recombination(spec)
    current = eliminate_inner(current)
    current = eliminate_support(current)
    current = scale_support(current)
    current = eliminate_sigma(current)
    logger.info(f"Normalized n=4, f={spec.f} spec")
    return current


def zero_pattern(spec: ExtensionSpec) -> Pattern:
    """Positions of every nonzero entry of A, B and sigma."""
    cells = set()
    for kind, mats in (("A", spec.A), ("B", spec.B)):
        for alpha, m in enumerate(mats, start=1):
            for row in range(spec.r):
                for col in range(spec.r):
                    if m[row, col]:
                        cells.add((kind, alpha, row, col))
    for alpha in range(spec.f):
        for beta in range(spec.f):
            for t, v in enumerate(spec.sigma[alpha][beta]):
                if v:
                    cells.add(("sigma", alpha + 1, beta + 1, t))
    return frozenset(cells)
