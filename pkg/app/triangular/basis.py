import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

from app.algebra.structure import StructureConstants
from app.core.exceptions import DimensionMismatchError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class TriIndex:
    """Index pair (i, k) of N_ik, 1 <= i < k."""

    i: int
    k: int

    def __post_init__(self):
        if not (1 <= self.i < self.k):
            raise DimensionMismatchError(f"invalid triangular index ({self.i},{self.k})")

    @property
    def width(self) -> int:
        return self.k - self.i

    def label(self, n: int) -> str:
        """Index part of the label: "12", or "1_10" when n >= 10."""
        if n >= 10:
            return f"{self.i}_{self.k}"
        return f"{self.i}{self.k}"


@dataclass(frozen=True)
class TriBasis:
    """
    Basis {N_ik : 1 <= i < k <= n} ordered along consecutive off-diagonals

    All pairs with k - i = 1 come first by increasing i, then k - i = 2, and
    so on, ending with (1, n). Positions are 1-based.
    """

    n: int
    order: Tuple[TriIndex, ...] = field(repr=False)
    _positions: Dict[Tuple[int, int], int] = field(repr=False, compare=False)

    @property
    def r(self) -> int:
        return len(self.order)

    def position(self, i: int, k: int) -> int:
        """1-based position of N_ik."""
        try:
            return self._positions[(i, k)]
        except KeyError:
            raise DimensionMismatchError(f"({i},{k}) is not a basis index for n={self.n}")

    def offset(self, i: int, k: int) -> int:
        """0-based position of N_ik, for matrix and vector indexing."""
        return self.position(i, k) - 1

    def index_at(self, position: int) -> TriIndex:
        if not 1 <= position <= self.r:
            raise DimensionMismatchError(f"position {position} outside 1..{self.r}")
        return self.order[position - 1]

    def label(self, position: int) -> str:
        """Index label of the basis element at a 1-based position."""
        return self.order[position - 1].label(self.n)

    def names(self) -> List[str]:
        if self.n >= 10:
            return [f"N_{t.i}_{t.k}" for t in self.order]
        return [f"N{t.i}{t.k}" for t in self.order]

    def parse_label(self, text: str) -> int:
        """
        0-based offset of a label like "14", "N14", "1_10" or "N_1_10"

        Raises:
            InputError: If the label names no basis element
        """
        body = text[1:] if text.startswith("N") else text
        body = body.lstrip("_")
        if "_" in body:
            parts = body.split("_")
        elif len(body) == 2 and body.isdigit():
            parts = [body[0], body[1]]
        else:
            raise InputError(f"unrecognised basis label {text!r}")
        try:
            i, k = int(parts[0]), int(parts[1])
            return self.offset(i, k)
        except (ValueError, IndexError, DimensionMismatchError):
            raise InputError(f"unrecognised basis label {text!r} for n={self.n}")


@lru_cache(maxsize=None)
def tri_basis(n: int) -> TriBasis:
    if n < 2:
        raise DimensionMismatchError(f"T(n) needs n >= 2, got {n}")
    order = tuple(TriIndex(i, i + d) for d in range(1, n) for i in range(1, n - d + 1))
    positions = {(t.i, t.k): p for p, t in enumerate(order, start=1)}
    return TriBasis(n, order, positions)


def flat_index(i: int, k: int, n: int) -> int:
    """
    Position of N_ik in the off-diagonal ordering

    Equals sum_{e=1}^{d-1} (n - e) + i with d = k - i.

    Raises:
        DimensionMismatchError: Unless 1 <= i < k <= n
    """
    if not (1 <= i < k <= n):
        raise DimensionMismatchError(f"({i},{k}) out of range for n={n}")
    d = k - i
    return sum(n - e for e in range(1, d)) + i


def unflat_index(position: int, n: int) -> TriIndex:
    """Inverse of flat_index."""
    return tri_basis(n).index_at(position)


@lru_cache(maxsize=None)
def build_T(n: int) -> StructureConstants:
    """
    Structure constants of T(n)

    [N_ik, N_ab] = delta_ka N_ib - delta_bi N_ak on the ordered basis.

    Raises:
        DimensionMismatchError: If n < 2
    """
    basis = tri_basis(n)
    products: Dict[Tuple[int, int], Dict[int, int]] = {}
    for x, left in enumerate(basis.order):
        for y, right in enumerate(basis.order):
            out: Dict[int, int] = {}
            if left.k == right.i:
                z = basis.offset(left.i, right.k)
                out[z] = out.get(z, 0) + 1
            if right.k == left.i:
                z = basis.offset(right.i, left.k)
                out[z] = out.get(z, 0) - 1
            if out:
                products[(x, y)] = out
    logger.debug(f"Built T({n}) with {len(products)} nonzero products")
    return StructureConstants.from_products(basis.r, basis.names(), products)
