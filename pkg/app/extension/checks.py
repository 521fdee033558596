import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Set, Tuple

from app.algebra.series import is_ideal, is_nilpotent
from app.algebra.structure import check_leibniz
from app.algebra.subspace import Subspace
from app.core.exceptions import ShapeError
from app.extension.spec import ExtensionSpec, build_L
from app.linalg.matrix import RatMatrix
from app.triangular.basis import tri_basis

logger = logging.getLogger(__name__)

Position = Tuple[int, int]


def support_positions(n: int, kind: str) -> Set[Position]:
    """
    Off-diagonal positions (0-based row, col) allowed in canonical A or B

    A: (12, 2n), (j(j+1), 1n) for 2 <= j <= n-2, ((n-1)n, 1(n-1)).
    B: the same with 1 <= j <= n-1. Positions that are not strictly upper
    triangular for small n are dropped.
    """
    basis = tri_basis(n)
    pairs = [((1, 2), (2, n)), ((n - 1, n), (1, n - 1))]
    low, high = (2, n - 2) if kind == "A" else (1, n - 1)
    pairs += [((j, j + 1), (1, n)) for j in range(low, high + 1)]
    positions = set()
    for (i, k), (a, b) in pairs:
        if not (1 <= i < k <= n and 1 <= a < b <= n):
            continue
        row, col = basis.offset(i, k), basis.offset(a, b)
        if col > row:
            positions.add((row, col))
    return positions


def _diagonal_sum_violations(matrix: RatMatrix, n: int) -> List[str]:
    basis = tri_basis(n)
    problems = []
    for t in basis.order:
        if t.width < 2:
            continue
        expected = sum(
            (matrix[basis.offset(j, j + 1), basis.offset(j, j + 1)] for j in range(t.i, t.k)),
            Fraction(0),
        )
        pos = basis.offset(t.i, t.k)
        if matrix[pos, pos] != expected:
            problems.append(f"diagonal at {t.label(n)} is not the sum of its generators")
    return problems


def shape_violations(spec: ExtensionSpec) -> List[str]:
    """Every way the spec departs from the canonical shape; empty iff shape_check passes."""
    basis = spec.basis
    problems: List[str] = []
    center = spec.r - 1
    for kind, mats in (("A", spec.A), ("B", spec.B)):
        allowed = support_positions(spec.n, kind)
        for alpha, m in enumerate(mats, start=1):
            if not m.is_upper_triangular():
                problems.append(f"{kind}{alpha} is not upper-triangular")
            for row in range(spec.r):
                for col in range(row + 1, spec.r):
                    if m[row, col] and (row, col) not in allowed:
                        problems.append(
                            f"{kind}{alpha} has entry outside the support at "
                            f"({basis.label(row + 1)},{basis.label(col + 1)})"
                        )
            problems += [f"{kind}{alpha}: {p}" for p in _diagonal_sum_violations(m, spec.n)]
    for alpha in range(spec.f):
        if spec.A[alpha][center, center] != -spec.B[alpha][center, center]:
            problems.append(f"A{alpha + 1} and B{alpha + 1} disagree at the centre diagonal")
    return problems


def shape_check(spec: ExtensionSpec) -> bool:
    return not shape_violations(spec)


def _require_triangular(matrices: Sequence[RatMatrix]) -> None:
    for alpha, m in enumerate(matrices, start=1):
        if not m.is_upper_triangular():
            raise ShapeError(f"A{alpha} is not upper-triangular in the off-diagonal ordering")


def nilindependent(matrices: Sequence[RatMatrix]) -> bool:
    """
    True iff no nonzero combination of the matrices is nilpotent

    For upper-triangular matrices this is linear independence of the
    diagonals.

    Raises:
        ShapeError: If any matrix is not upper-triangular
    """
    _require_triangular(matrices)
    if not matrices:
        return True
    diagonals = RatMatrix.from_rows([m.diagonal_values() for m in matrices])
    return diagonals.rank() == len(matrices)


@dataclass
class NilradicalCertificate:
    leibniz: bool
    ideal: bool
    nilpotent: bool
    nilindependent: bool
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.leibniz and self.ideal and self.nilpotent and self.nilindependent

    @property
    def failed_check(self) -> str:
        for name in ("leibniz", "ideal", "nilpotent", "nilindependent"):
            if not getattr(self, name):
                return name
        return ""


def certify_nilradical(spec: ExtensionSpec, notes: Sequence[str] = ()) -> NilradicalCertificate:
    """
    Certify that the N-span is the nilradical of build_L(spec)

    Checks that the N-span is a nilpotent ideal and that the A-matrices are
    nilindependent, so no larger nilpotent ideal exists.

    Raises:
        ShapeError: If an A-matrix is not triangular
    """
    L = build_L(spec)
    leibniz = not check_leibniz(L)
    nil_span = list(range(spec.r))
    ideal = is_ideal(L, Subspace.coordinate(nil_span, L.dim))
    nilpotent = is_nilpotent(L.restrict(nil_span))
    independent = nilindependent(spec.A)
    certificate = NilradicalCertificate(leibniz, ideal, nilpotent, independent, list(notes))
    if not leibniz:
        certificate.notes.append("build_L(spec) is not a Leibniz algebra")
    if not certificate.passed:
        logger.info(f"Nilradical certificate fails at {certificate.failed_check}")
    return certificate


@dataclass(frozen=True)
class CommutatorDefect:
    kind: str
    alpha: int
    beta: int
    matrix: RatMatrix


def commutators(spec: ExtensionSpec) -> List[CommutatorDefect]:
    """Nonzero [A^a, A^b] (a < b) and [A^a, B^b] (all a, b)."""
    defects = []
    for a in range(spec.f):
        for b in range(spec.f):
            if a < b:
                c = spec.A[a].commutator(spec.A[b])
                if not c.is_zero():
                    defects.append(CommutatorDefect("AA", a + 1, b + 1, c))
            c = spec.A[a].commutator(spec.B[b])
            if not c.is_zero():
                defects.append(CommutatorDefect("AB", a + 1, b + 1, c))
    return defects


def off_diagonal_violations(spec: ExtensionSpec) -> List[str]:
    """
    Off-diagonal entries at (ik, ab) of some A^a or B^a although some A^b has
    different diagonal values at ik and ab
    """
    basis = spec.basis
    problems = []
    for kind, mats in (("A", spec.A), ("B", spec.B)):
        for alpha, m in enumerate(mats, start=1):
            for row in range(spec.r):
                for col in range(spec.r):
                    if row == col or not m[row, col]:
                        continue
                    if any(a[row, row] != a[col, col] for a in spec.A):
                        problems.append(
                            f"{kind}{alpha} at ({basis.label(row + 1)},{basis.label(col + 1)})"
                        )
    return problems
