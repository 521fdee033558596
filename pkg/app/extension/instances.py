import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from app.extension.spec import BasisTransform, ExtensionSpec, ShiftParams
from app.extension.transforms import G1_SLOTS_4, g1_matrix, g2_matrix
from app.linalg.matrix import RatMatrix
from app.linalg.rational import RationalLike, to_rational
from app.triangular.basis import tri_basis

_NONZERO_SCALES = (Fraction(-2), Fraction(-1), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3))
_SMALL = (Fraction(-2), Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))


def diagonal_matrix(n: int, generators: Sequence[RationalLike]) -> RatMatrix:
    """Diagonal A with A_{j(j+1)} = generators[j-1] and A_ik the sum of its generators."""
    weights = [to_rational(v) for v in generators]
    values = [sum(weights[t.i - 1:t.k - 1], Fraction(0)) for t in tri_basis(n).order]
    return RatMatrix.diagonal(values)


def diagonal_spec(n: int, generator_rows: Sequence[Sequence[RationalLike]]) -> ExtensionSpec:
    """Commuting diagonal extension with B = -A and sigma = 0."""
    A = [diagonal_matrix(n, row) for row in generator_rows]
    return ExtensionSpec.from_parts(n, A, [-a for a in A])


def maximal_diagonal_spec(n: int) -> ExtensionSpec:
    """The f = n-1 extension where X^a scales only the generator N_a(a+1)."""
    rows = [[1 if j == alpha else 0 for j in range(n - 1)] for alpha in range(n - 1)]
    return diagonal_spec(n, rows)


def random_chain(rng: random.Random, n: int, f: int, kinds: Optional[Sequence[str]] = None) -> List[Dict]:
    """
    Random admissible chain of transformations

    Args:
        rng: Seeded random source
        n: Size of T(n)
        f: Extension degree
        kinds: Steps to include, from "shift", "g1", "g2", "recombine"

    Returns:
        Operations in the format accepted by apply_chain
    """
    kinds = kinds or ("shift", "g1", "g2", "recombine")
    r = tri_basis(n).r
    ops: List[Dict] = []
    for kind in kinds:
        if kind == "shift":
            mu = tuple(tuple(rng.choice(_SMALL) for _ in range(r)) for _ in range(f))
            ops.append({"type": "shift", "params": ShiftParams(mu)})
        elif kind == "g1" and n == 4:
            slots = {slot: rng.choice(_SMALL) for slot in G1_SLOTS_4}
            ops.append({"type": "basis", "params": BasisTransform(g1_matrix(n, slots))})
        elif kind == "g2":
            scales = [rng.choice(_NONZERO_SCALES) for _ in range(n - 1)]
            ops.append({"type": "basis", "params": BasisTransform(g2_matrix(n, scales))})
        elif kind == "recombine":
            lower = RatMatrix.from_entries(
                f,
                [(i, i, 1) for i in range(f)]
                + [(i, j, rng.choice(_SMALL)) for i in range(f) for j in range(i)],
            )
            diag = RatMatrix.diagonal([rng.choice(_NONZERO_SCALES) for _ in range(f)])
            ops.append({"type": "recombine", "params": lower @ diag})
    return ops
