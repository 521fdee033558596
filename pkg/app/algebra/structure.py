import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.core.exceptions import DimensionMismatchError
from app.linalg.matrix import RatMatrix, Vector
from app.linalg.rational import RationalLike, to_rational

logger = logging.getLogger(__name__)

_ZERO = Fraction(0)

# Sparse products: (i, j) -> ((k, c_ij^k), ...), 0-based, nonzero only.
SparseProducts = Dict[Tuple[int, int], Tuple[Tuple[int, Fraction], ...]]


@dataclass(frozen=True)
class StructureConstants:
    """
    Bilinear bracket [e_i, e_j] = sum_k c_ij^k e_k on a d-dimensional space

    The dense tensor is the canonical data; a sparse view of the nonzero
    products is derived on construction and used by every evaluation.
    """

    dim: int
    basis_names: Tuple[str, ...]
    tensor: Tuple[Tuple[Vector, ...], ...] = field(repr=False)
    _products: SparseProducts = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.basis_names) != self.dim:
            raise DimensionMismatchError(
                f"{len(self.basis_names)} basis names for dimension {self.dim}"
            )
        if len(self.tensor) != self.dim or any(
            len(row) != self.dim or any(len(v) != self.dim for v in row) for row in self.tensor
        ):
            raise DimensionMismatchError(f"tensor is not {self.dim}x{self.dim}x{self.dim}")
        sparse: SparseProducts = {}
        for i, row in enumerate(self.tensor):
            for j, vec in enumerate(row):
                nz = tuple((k, c) for k, c in enumerate(vec) if c)
                if nz:
                    sparse[(i, j)] = nz
        object.__setattr__(self, "_products", sparse)

    @classmethod
    def from_products(
        cls,
        dim: int,
        basis_names: Sequence[str],
        products: Mapping[Tuple[int, int], Mapping[int, RationalLike]],
    ) -> "StructureConstants":
        """
        Build from sparse products

        Args:
            dim: Dimension d
            basis_names: d labels
            products: Map (i, j) -> {k: c_ij^k}, 0-based indices
        """
        grid = [[[_ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), out in products.items():
            for k, c in out.items():
                if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                    raise DimensionMismatchError(f"product index ({i},{j},{k}) outside dimension {dim}")
                grid[i][j][k] = to_rational(c)
        tensor = tuple(tuple(tuple(vec) for vec in row) for row in grid)
        return cls(dim, tuple(basis_names), tensor)

    @classmethod
    def abelian(cls, dim: int, basis_names: Optional[Sequence[str]] = None) -> "StructureConstants":
        names = basis_names or [f"e{i}" for i in range(1, dim + 1)]
        return cls.from_products(dim, names, {})

    def product(self, i: int, j: int) -> Tuple[Tuple[int, Fraction], ...]:
        """Nonzero coefficients of [e_i, e_j] as (k, c) pairs, 0-based."""
        return self._products.get((i, j), ())

    def products(self) -> SparseProducts:
        return dict(self._products)

    def bracket_vectors(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatchError(
                f"vectors of length {len(x)}, {len(y)} in a {self.dim}-dimensional algebra"
            )
        out = [_ZERO] * self.dim
        x_nz = [(i, a) for i, a in enumerate(x) if a]
        y_nz = [(j, b) for j, b in enumerate(y) if b]
        for i, a in x_nz:
            for j, b in y_nz:
                for k, c in self._products.get((i, j), ()):
                    out[k] += a * b * c
        return tuple(out)

    def left_matrix(self, x: Sequence[Fraction]) -> RatMatrix:
        """Matrix of L_x in row convention: row j is [x, e_j]."""
        return RatMatrix.from_rows([self.bracket_vectors(x, _unit(self.dim, j)) for j in range(self.dim)])

    def right_matrix(self, x: Sequence[Fraction]) -> RatMatrix:
        """Matrix of R_x in row convention: row j is [e_j, x]."""
        return RatMatrix.from_rows([self.bracket_vectors(_unit(self.dim, j), x) for j in range(self.dim)])

    def restrict(self, indices: Sequence[int]) -> "StructureConstants":
        """
        Subalgebra spanned by a subset of basis vectors

        Raises:
            DimensionMismatchError: If a product leaves the span
        """
        position = {old: new for new, old in enumerate(indices)}
        products: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for i in indices:
            for j in indices:
                for k, c in self.product(i, j):
                    if k not in position:
                        raise DimensionMismatchError(
                            f"[{self.basis_names[i]}, {self.basis_names[j]}] leaves the subalgebra"
                        )
                    products.setdefault((position[i], position[j]), {})[position[k]] = c
        return StructureConstants.from_products(
            len(indices), [self.basis_names[i] for i in indices], products
        )

    def index_of(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise DimensionMismatchError(f"no basis element named {name}")


def _unit(dim: int, index: int) -> Vector:
    return tuple(Fraction(1) if i == index else _ZERO for i in range(dim))


@dataclass(frozen=True)
class Element:
    """Coordinates of an algebra element relative to the basis."""

    coords: Vector

    @classmethod
    def of(cls, values: Sequence[RationalLike]) -> "Element":
        return cls(tuple(to_rational(v) for v in values))

    @classmethod
    def zero(cls, dim: int) -> "Element":
        return cls((_ZERO,) * dim)

    @classmethod
    def basis(cls, dim: int, index: int) -> "Element":
        """Basis vector e_index, 0-based."""
        return cls(_unit(dim, index))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "Element") -> "Element":
        if self.dim != other.dim:
            raise DimensionMismatchError(f"adding elements of dims {self.dim} and {other.dim}")
        return Element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        return self + other.scale(-1)

    def scale(self, factor: RationalLike) -> "Element":
        c = to_rational(factor)
        return Element(tuple(c * a for a in self.coords))


def bracket(L: StructureConstants, x: Element, y: Element) -> Element:
    """
    Evaluate [x, y]

    Raises:
        DimensionMismatchError: If x or y has the wrong length
    """
    return Element(L.bracket_vectors(x.coords, y.coords))


@dataclass(frozen=True)
class LeibnizViolation:
    """A basis triple (1-based) where the Leibniz identity fails, with its residual."""

    i: int
    j: int
    k: int
    residual: Element


def leibniz_residual(L: StructureConstants, i: int, j: int, k: int) -> Vector:
    """
    [e_i,[e_j,e_k]] - [[e_i,e_j],e_k] - [e_j,[e_i,e_k]] for 0-based indices
    """
    out: Dict[int, Fraction] = {}
    for m, c in L.product(j, k):
        for t, v in L.product(i, m):
            out[t] = out.get(t, 0) + c * v
    for m, c in L.product(i, j):
        for t, v in L.product(m, k):
            out[t] = out.get(t, 0) - c * v
    for m, c in L.product(i, k):
        for t, v in L.product(j, m):
            out[t] = out.get(t, 0) - c * v
    vec = [_ZERO] * L.dim
    for t, v in out.items():
        vec[t] = Fraction(v)
    return tuple(vec)


def check_leibniz(L: StructureConstants) -> List[LeibnizViolation]:
    """
    Check the Leibniz identity on every basis triple

    Args:
        L: Algebra to check

    Returns:
        Violations in (i, j, k) order; empty iff L is a Leibniz algebra
    """
    violations: List[LeibnizViolation] = []
    for i in range(L.dim):
        for j in range(L.dim):
            for k in range(L.dim):
                residual = leibniz_residual(L, i, j, k)
                if any(residual):
                    violations.append(LeibnizViolation(i + 1, j + 1, k + 1, Element(residual)))
    if violations:
        logger.debug(f"Leibniz identity fails on {len(violations)} triples")
    return violations


def is_antisymmetric(L: StructureConstants) -> bool:
    for i in range(L.dim):
        for j in range(i, L.dim):
            if L.tensor[i][j] != tuple(-c for c in L.tensor[j][i]):
                return False
    return True


def is_lie(L: StructureConstants) -> bool:
    """True iff the bracket is antisymmetric and satisfies the Leibniz identity."""
    return is_antisymmetric(L) and not check_leibniz(L)
