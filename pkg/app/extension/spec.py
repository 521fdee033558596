"""Extension data (A, B, sigma) and the algebra L(n, f) it defines."""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from app.algebra.structure import StructureConstants
from app.core.exceptions import DimensionMismatchError
from app.linalg.matrix import RatMatrix, Vector
from app.linalg.rational import RationalLike, to_rational
from app.triangular.basis import TriBasis, build_T, tri_basis

logger = logging.getLogger(__name__)

# A basis element of the nilradical: a label such as "14", or an (i, k) pair.
NIndex = Union[str, Tuple[int, int]]

SigmaTensor = Tuple[Tuple[Vector, ...], ...]


def _offset(basis: TriBasis, index: NIndex) -> int:
    if isinstance(index, str):
        return basis.parse_label(index)
    return basis.offset(*index)


@dataclass(frozen=True)
class ExtensionSpec:
    """
    Solvable extension of T(n) by f elements X^1..X^f

    [X^a, N_ik] = sum A^a_{ik,pq} N_pq, [N_ik, X^a] = sum B^a_{ik,pq} N_pq and
    [X^a, X^b] = sum sigma^{ab}_pq N_pq. Matrices use the TriBasis ordering,
    row ik holding the image of N_ik; alpha/beta are 1-based in the public
    helpers and 0-based in the stored tuples.
    """

    n: int
    f: int
    A: Tuple[RatMatrix, ...]
    B: Tuple[RatMatrix, ...]
    sigma: SigmaTensor

    def __post_init__(self):
        if self.n < 2:
            raise DimensionMismatchError(f"T(n) needs n >= 2, got {self.n}")
        if not 1 <= self.f <= self.n - 1:
            raise DimensionMismatchError(f"extension degree f={self.f} outside 1..{self.n - 1}")
        r = self.r
        for name, mats in (("A", self.A), ("B", self.B)):
            if len(mats) != self.f:
                raise DimensionMismatchError(f"{len(mats)} {name} matrices for f={self.f}")
            for m in mats:
                if (m.rows, m.cols) != (r, r):
                    raise DimensionMismatchError(f"{name} matrix is {m.rows}x{m.cols}, expected {r}x{r}")
        if len(self.sigma) != self.f or any(len(row) != self.f for row in self.sigma):
            raise DimensionMismatchError(f"sigma is not {self.f}x{self.f}")
        if any(len(vec) != r for row in self.sigma for vec in row):
            raise DimensionMismatchError(f"sigma vectors must have length {r}")

    @property
    def r(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def basis(self) -> TriBasis:
        return tri_basis(self.n)

    @classmethod
    def zero(cls, n: int, f: int) -> "ExtensionSpec":
        r = n * (n - 1) // 2
        zero_vec = (Fraction(0),) * r
        return cls(
            n,
            f,
            tuple(RatMatrix.zeros(r) for _ in range(f)),
            tuple(RatMatrix.zeros(r) for _ in range(f)),
            tuple(tuple(zero_vec for _ in range(f)) for _ in range(f)),
        )

    @classmethod
    def from_parts(
        cls,
        n: int,
        A: Sequence[RatMatrix],
        B: Sequence[RatMatrix],
        sigma: Dict[Tuple[int, int], Dict[NIndex, RationalLike]] = None,
    ) -> "ExtensionSpec":
        """
        Build from matrices and sparse sigma

        Args:
            n: Size of T(n)
            A: f matrices
            B: f matrices
            sigma: Map (alpha, beta) 1-based -> {basis index: value}
        """
        spec = cls.zero(n, len(A))
        spec = replace(spec, A=tuple(A), B=tuple(B))
        for (alpha, beta), comps in (sigma or {}).items():
            for index, value in comps.items():
                spec = spec.with_sigma(alpha, beta, index, value)
        return spec

    def entry(self, kind: str, alpha: int, row: NIndex, col: NIndex) -> Fraction:
        mats = self._matrices(kind)
        return mats[alpha - 1][_offset(self.basis, row), _offset(self.basis, col)]

    def with_entry(self, kind: str, alpha: int, row: NIndex, col: NIndex, value: RationalLike) -> "ExtensionSpec":
        mats = list(self._matrices(kind))
        mats[alpha - 1] = mats[alpha - 1].with_entry(
            _offset(self.basis, row), _offset(self.basis, col), value
        )
        return replace(self, **{kind: tuple(mats)})

    def sigma_vector(self, alpha: int, beta: int) -> Vector:
        return self.sigma[alpha - 1][beta - 1]

    def with_sigma(self, alpha: int, beta: int, index: NIndex, value: RationalLike) -> "ExtensionSpec":
        grid = [list(row) for row in self.sigma]
        vec = list(grid[alpha - 1][beta - 1])
        vec[_offset(self.basis, index)] = to_rational(value)
        grid[alpha - 1][beta - 1] = tuple(vec)
        return replace(self, sigma=tuple(tuple(row) for row in grid))

    def _matrices(self, kind: str) -> Tuple[RatMatrix, ...]:
        if kind == "A":
            return self.A
        if kind == "B":
            return self.B
        raise ValueError(f"Unknown matrix kind: {kind}")

    def names(self) -> List[str]:
        return self.basis.names() + [f"X{a}" for a in range(1, self.f + 1)]


@dataclass(frozen=True)
class ShiftParams:
    """Shift X^a -> X^a + sum mu^a_pq N_pq; mu is f rows of length r."""

    mu: Tuple[Vector, ...]

    @classmethod
    def zero(cls, n: int, f: int) -> "ShiftParams":
        r = n * (n - 1) // 2
        return cls(tuple((Fraction(0),) * r for _ in range(f)))

    @classmethod
    def from_entries(cls, n: int, f: int, entries: Dict[int, Dict[NIndex, RationalLike]]) -> "ShiftParams":
        basis = tri_basis(n)
        rows = [list(v) for v in cls.zero(n, f).mu]
        for alpha, comps in entries.items():
            for index, value in comps.items():
                rows[alpha - 1][_offset(basis, index)] = to_rational(value)
        return cls(tuple(tuple(row) for row in rows))

    @property
    def f(self) -> int:
        return len(self.mu)

    def negated(self) -> "ShiftParams":
        return ShiftParams(tuple(tuple(-v for v in row) for row in self.mu))


@dataclass(frozen=True)
class BasisTransform:
    """
    Change of nilradical basis N -> G N

    Raises:
        SingularMatrixError: If G is not invertible
    """

    G: RatMatrix
    _inverse: RatMatrix = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.G.is_square:
            raise DimensionMismatchError(f"G must be square, got {self.G.rows}x{self.G.cols}")
        object.__setattr__(self, "_inverse", self.G.inverse())

    @property
    def inverse(self) -> RatMatrix:
        return self._inverse

    def inverted(self) -> "BasisTransform":
        return BasisTransform(self._inverse)


def build_L(spec: ExtensionSpec) -> StructureConstants:
    """
    Structure constants of L(n, f)

    The nilradical basis comes first in TriBasis order, then X1..Xf. Products
    of two X's only have N components.
    """
    T = build_T(spec.n)
    r = spec.r
    products: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for (i, j), out in T.products().items():
        products[(i, j)] = dict(out)
    for alpha in range(spec.f):
        x = r + alpha
        for row in range(r):
            left = {col: v for col, v in enumerate(spec.A[alpha].row(row)) if v}
            if left:
                products[(x, row)] = left
            right = {col: v for col, v in enumerate(spec.B[alpha].row(row)) if v}
            if right:
                products[(row, x)] = right
        for beta in range(spec.f):
            comps = {col: v for col, v in enumerate(spec.sigma[alpha][beta]) if v}
            if comps:
                products[(x, r + beta)] = comps
    return StructureConstants.from_products(r + spec.f, spec.names(), products)
