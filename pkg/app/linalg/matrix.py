import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from app.core.exceptions import DimensionMismatchError, SingularMatrixError
from app.linalg.rational import RationalLike, to_rational

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class RatMatrix:
    """
    Immutable rows x cols matrix of Fractions

    Entries are stored row-major as a tuple of row tuples; indices are 0-based.
    """

    rows: int
    cols: int
    entries: Tuple[Vector, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError(f"negative matrix size {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatchError(
                f"entries do not form a {self.rows}x{self.cols} grid"
            )

    # Construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]], cols: int = None) -> "RatMatrix":
        grid = tuple(tuple(to_rational(v) for v in row) for row in rows)
        width = cols if cols is not None else (len(grid[0]) if grid else 0)
        return cls(len(grid), width, grid)

    @classmethod
    def zeros(cls, rows: int, cols: int = None) -> "RatMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, tuple((_ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, size: int) -> "RatMatrix":
        return cls.diagonal([_ONE] * size)

    @classmethod
    def diagonal(cls, values: Sequence[RationalLike]) -> "RatMatrix":
        size = len(values)
        vals = [to_rational(v) for v in values]
        return cls(
            size,
            size,
            tuple(tuple(vals[i] if i == j else _ZERO for j in range(size)) for i in range(size)),
        )

    @classmethod
    def from_entries(cls, size: int, entries: Iterable[Tuple[int, int, RationalLike]]) -> "RatMatrix":
        """Square matrix with the given (row, col, value) entries, zero elsewhere."""
        grid = [[_ZERO] * size for _ in range(size)]
        for i, j, v in entries:
            grid[i][j] = to_rational(v)
        return cls(size, size, tuple(tuple(row) for row in grid))

    @classmethod
    def from_domain_matrix(cls, dm: DomainMatrix) -> "RatMatrix":
        rows, cols = dm.shape
        grid = [[_ZERO] * cols for _ in range(rows)]
        for i, row in dm.to_sparse().rep.items():
            for j, v in row.items():
                grid[i][j] = Fraction(int(v.numerator), int(v.denominator))
        return cls(rows, cols, tuple(tuple(row) for row in grid))

    # Access

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def diagonal_values(self) -> Vector:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def is_upper_triangular(self) -> bool:
        return all(
            self.entries[i][j] == 0 for i in range(self.rows) for j in range(min(i, self.cols))
        )

    def with_entry(self, i: int, j: int, value: RationalLike) -> "RatMatrix":
        grid = [list(row) for row in self.entries]
        grid[i][j] = to_rational(value)
        return RatMatrix(self.rows, self.cols, tuple(tuple(row) for row in grid))

    def to_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]

    def to_domain_matrix(self) -> DomainMatrix:
        """Sparse DomainMatrix over QQ with the same entries."""
        rep = {}
        for i, row in enumerate(self.entries):
            nonzero = {j: QQ(v.numerator, v.denominator) for j, v in enumerate(row) if v}
            if nonzero:
                rep[i] = nonzero
        return DomainMatrix(rep, (self.rows, self.cols), QQ)

    # Arithmetic

    def _check_same_shape(self, other: "RatMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(
                f"shape {self.rows}x{self.cols} does not match {other.rows}x{other.cols}"
            )

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(tuple(-a for a in row) for row in self.entries))

    def scale(self, factor: RationalLike) -> "RatMatrix":
        c = to_rational(factor)
        return RatMatrix(self.rows, self.cols, tuple(tuple(c * a for a in row) for row in self.entries))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        other_cols = [other.col(j) for j in range(other.cols)]
        grid = []
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if a]
            grid.append(tuple(sum((a * col[k] for k, a in nz), _ZERO) for col in other_cols))
        return RatMatrix(self.rows, other.cols, tuple(grid))

    def vecmul(self, vector: Sequence[Fraction]) -> Vector:
        """Row vector times matrix: v * M."""
        if len(vector) != self.rows:
            raise DimensionMismatchError(f"vector of length {len(vector)} against {self.rows} rows")
        out = [_ZERO] * self.cols
        for k, a in enumerate(vector):
            if a:
                for j, b in enumerate(self.entries[k]):
                    if b:
                        out[j] += a * b
        return tuple(out)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, tuple(self.col(j) for j in range(self.cols)))

    def power(self, exponent: int) -> "RatMatrix":
        if not self.is_square:
            raise DimensionMismatchError("power of a non-square matrix")
        result = RatMatrix.identity(self.rows)
        for _ in range(exponent):
            result = result @ self
        return result

    def commutator(self, other: "RatMatrix") -> "RatMatrix":
        return self @ other - other @ self

    def rank(self) -> int:
        if not self.rows or not self.cols:
            return 0
        return self.to_domain_matrix().rank()

    def inverse(self) -> "RatMatrix":
        """
        Exact inverse over QQ

        Raises:
            DimensionMismatchError: If the matrix is not square
            SingularMatrixError: If the matrix is singular
        """
        if not self.is_square:
            raise DimensionMismatchError("inverse of a non-square matrix")
        if self.rows == 0:
            return self
        try:
            inverse = self.to_domain_matrix().inv()
        except (DMNonInvertibleMatrixError, ZeroDivisionError):
            raise SingularMatrixError(f"{self.rows}x{self.cols} matrix is singular")
        return RatMatrix.from_domain_matrix(inverse)


def rref(m: RatMatrix) -> Tuple[RatMatrix, int, List[int]]:
    """
    Reduced row-echelon form

    Args:
        m: Matrix to reduce

    Returns:
        Tuple of (reduced matrix, rank, pivot column indices)
    """
    if not m.rows or not m.cols:
        return m, 0, []
    reduced, pivots = m.to_domain_matrix().rref()
    return RatMatrix.from_domain_matrix(reduced), len(pivots), list(pivots)


def null_space(m: RatMatrix) -> List[Vector]:
    """Basis of {v : M v = 0}, one vector per free column of the RREF."""
    reduced, rank, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [_ZERO] * m.cols
        vec[fc] = _ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r, fc]
        basis.append(tuple(vec))
    return basis


def mat_is_nilpotent(m: Union[RatMatrix, Sequence[Sequence[Fraction]]]) -> bool:
    """
    True iff m^d = 0 for a square d x d matrix

    Raises:
        DimensionMismatchError: If the matrix is not square
    """
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_rows(m)
    if not m.is_square:
        raise DimensionMismatchError(f"nilpotency of a non-square {m.rows}x{m.cols} matrix")
    current = m
    for _ in range(m.rows):
        if current.is_zero():
            return True
        current = current @ m
    return current.is_zero()
