from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence

from app.core.exceptions import DimensionMismatchError
from app.linalg.matrix import RatMatrix, Vector, rref


@dataclass(frozen=True)
class Subspace:
    """
    Subspace of F^d given by the nonzero rows of an RREF matrix

    The basis is canonical, so two subspaces are equal iff their bases are.
    """

    ambient: int
    basis: RatMatrix

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Fraction]], ambient: int) -> "Subspace":
        rows = [tuple(v) for v in vectors]
        if any(len(v) != ambient for v in rows):
            raise DimensionMismatchError(f"vector length differs from ambient dimension {ambient}")
        if not rows:
            return cls.zero(ambient)
        reduced, rank, _ = rref(RatMatrix.from_rows(rows, ambient))
        return cls(ambient, RatMatrix(rank, ambient, reduced.entries[:rank]))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, RatMatrix(0, ambient, ()))

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls(ambient, RatMatrix.identity(ambient))

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient: int) -> "Subspace":
        """Span of the basis vectors with the given 0-based indices."""
        vectors = []
        for idx in indices:
            vec = [Fraction(0)] * ambient
            vec[idx] = Fraction(1)
            vectors.append(vec)
        return cls.span(vectors, ambient)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> List[Vector]:
        return list(self.basis.entries)

    def _pivots(self) -> List[int]:
        return [next(c for c, v in enumerate(row) if v) for row in self.basis.entries]

    def contains(self, vector: Sequence[Fraction]) -> bool:
        if len(vector) != self.ambient:
            raise DimensionMismatchError(f"vector of length {len(vector)} in F^{self.ambient}")
        # Weight each RREF row by the vector's own entry at its pivot
        weights = [vector[p] for p in self._pivots()]
        return self.basis.vecmul(weights) == tuple(vector)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis.entries)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.vectors() + other.vectors(), self.ambient)
