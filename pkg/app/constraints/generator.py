import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from app.core.exceptions import DimensionMismatchError
from app.extension.residuals import FAMILY_TRIPLES, SIGMA_FAMILIES
from app.extension.spec import ExtensionSpec
from app.linalg.poly import MultiPoly
from app.triangular.basis import build_T, tri_basis

logger = logging.getLogger(__name__)

_FAMILY_BY_PATTERN = {pattern: family for family, pattern in FAMILY_TRIPLES.items()}


@dataclass(frozen=True)
class GenericExtension:
    """
    L(n, f) with every A, B and sigma entry an indeterminate

    Symbols are ordered A (by alpha, row, col), then B, then sigma (by alpha,
    beta, component) and named "A1_12_24", "B1_23_14", "s11_14".
    """

    n: int
    f: int
    symbols: Tuple[str, ...] = field(repr=False)

    @classmethod
    def create(cls, n: int, f: int) -> "GenericExtension":
        if n < 2 or not 1 <= f <= n - 1:
            raise DimensionMismatchError(f"need n >= 2 and 1 <= f <= n-1, got n={n}, f={f}")
        basis = tri_basis(n)
        labels = [basis.label(p) for p in range(1, basis.r + 1)]
        names = []
        for kind in ("A", "B"):
            for alpha in range(1, f + 1):
                names += [f"{kind}{alpha}_{row}_{col}" for row in labels for col in labels]
        for alpha in range(1, f + 1):
            for beta in range(1, f + 1):
                names += [f"s{alpha}{beta}_{pq}" for pq in labels]
        return cls(n, f, tuple(names))

    @property
    def r(self) -> int:
        return self.n * (self.n - 1) // 2

    def symbol(self, index: int) -> MultiPoly:
        return MultiPoly.monomial(self.symbols, index)

    def constant(self, value) -> MultiPoly:
        return MultiPoly.constant(value, self.symbols)

    def matrix_index(self, kind: str, alpha: int, row: int, col: int) -> int:
        """Symbol index of A^alpha or B^alpha at 0-based (row, col); alpha 1-based."""
        block = 0 if kind == "A" else self.f
        return ((block + alpha - 1) * self.r + row) * self.r + col

    def sigma_index(self, alpha: int, beta: int, component: int) -> int:
        base = 2 * self.f * self.r * self.r
        return base + ((alpha - 1) * self.f + (beta - 1)) * self.r + component

    def locate(self, index: int) -> Tuple[str, int, int, int]:
        """
        Inverse of matrix_index / sigma_index

        Returns:
            (kind, alpha, row, col) for matrix symbols, ("s", alpha, beta, component) for sigma
        """
        r, f = self.r, self.f
        matrix_block = r * r
        if index < 2 * f * matrix_block:
            block, rest = divmod(index, matrix_block)
            kind = "A" if block < f else "B"
            alpha = block % f + 1
            return kind, alpha, rest // r, rest % r
        rest = index - 2 * f * matrix_block
        pair, component = divmod(rest, r)
        return "s", pair // f + 1, pair % f + 1, component

    def assignment(self, spec: ExtensionSpec) -> List[Fraction]:
        """Values of every symbol at a concrete spec, aligned with self.symbols."""
        if (spec.n, spec.f) != (self.n, self.f):
            raise DimensionMismatchError(
                f"spec has n={spec.n}, f={spec.f}; symbols were made for n={self.n}, f={self.f}"
            )
        values: List[Fraction] = []
        for mats in (spec.A, spec.B):
            for m in mats:
                for row in m.entries:
                    values.extend(row)
        for row in spec.sigma:
            for vec in row:
                values.extend(vec)
        return values


@dataclass(frozen=True)
class ConstraintPoly:
    """Coefficient of one basis element in the Leibniz residual of one basis triple."""

    family: str
    triple: Tuple[str, str, str]
    component: str
    poly: MultiPoly


@dataclass(frozen=True)
class ConstraintSet:
    generic: GenericExtension
    linear: Tuple[ConstraintPoly, ...]
    bilinear: Tuple[ConstraintPoly, ...]

    @classmethod
    def empty(cls, n: int, f: int) -> "ConstraintSet":
        return cls(GenericExtension.create(n, f), (), ())

    def all(self) -> Tuple[ConstraintPoly, ...]:
        return self.linear + self.bilinear

    def counts_by_family(self) -> Dict[str, int]:
        counts = {family: 0 for family in FAMILY_TRIPLES}
        for c in self.all():
            counts[c.family] += 1
        return counts

    def linear_polys(self) -> List[MultiPoly]:
        return [c.poly for c in self.linear]

    def bilinear_polys(self) -> List[MultiPoly]:
        return [c.poly for c in self.bilinear]


# Bracket of two basis elements: component index -> coefficient polynomial.
Bracket = Dict[int, MultiPoly]


def _symbolic_products(generic: GenericExtension) -> Dict[Tuple[int, int], Bracket]:
    r, f = generic.r, generic.f
    products: Dict[Tuple[int, int], Bracket] = {}
    # T(n) itself has constant structure constants
    for (i, j), out in build_T(generic.n).products().items():
        products[(i, j)] = {k: generic.constant(c) for k, c in out}
    for alpha in range(1, f + 1):
        x = r + alpha - 1
        for row in range(r):
            products[(x, row)] = {col: generic.symbol(generic.matrix_index("A", alpha, row, col)) for col in range(r)}
            products[(row, x)] = {col: generic.symbol(generic.matrix_index("B", alpha, row, col)) for col in range(r)}
        for beta in range(1, f + 1):
            products[(x, r + beta - 1)] = {
                pq: generic.symbol(generic.sigma_index(alpha, beta, pq)) for pq in range(r)
            }
    return products


@lru_cache(maxsize=16)
def generate_constraints(n: int, f: int) -> ConstraintSet:
    """
    Expand the Leibniz identity on every basis triple of L(n, f)

    Triples of three nilradical elements are skipped (T(n) is Lie). Each
    nonzero coefficient polynomial is classified by the family of its triple
    and split by total degree into the linear and bilinear lists.

    Args:
        n: Size of T(n), at least 3
        f: Extension degree, 1 <= f <= n-1

    Returns:
        The constraint set over GenericExtension.create(n, f).symbols
    """
    if n < 3:
        raise DimensionMismatchError(f"constraint generation needs n >= 3, got {n}")
    generic = GenericExtension.create(n, f)
    r, d = generic.r, generic.r + f
    names = tri_basis(n).names() + [f"X{a}" for a in range(1, f + 1)]
    products = _symbolic_products(generic)
    empty: Bracket = {}
    zero = generic.constant(0)
    linear: List[ConstraintPoly] = []
    bilinear: List[ConstraintPoly] = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                pattern = tuple("X" if t >= r else "N" for t in (i, j, k))
                family = _FAMILY_BY_PATTERN.get(pattern)
                if family is None:
                    continue
                # [i, [j, k]] - [[i, j], k] - [j, [i, k]]
                acc: Bracket = {}
                for m, c in products.get((j, k), empty).items():
                    for l, v in products.get((i, m), empty).items():
                        acc[l] = acc.get(l, zero) + c * v
                for m, c in products.get((i, j), empty).items():
                    for l, v in products.get((m, k), empty).items():
                        acc[l] = acc.get(l, zero) - c * v
                for m, c in products.get((i, k), empty).items():
                    for l, v in products.get((j, m), empty).items():
                        acc[l] = acc.get(l, zero) - c * v
                triple = (names[i], names[j], names[k])
                for l in sorted(acc):
                    poly = acc[l]
                    if poly.is_zero():
                        continue
                    constraint = ConstraintPoly(family, triple, names[l], poly)
                    if poly.degree() <= 1:
                        linear.append(constraint)
                    else:
                        bilinear.append(constraint)
    logger.info(
        f"Generated {len(linear)} linear and {len(bilinear)} bilinear constraints for n={n}, f={f}"
    )
    return ConstraintSet(generic, tuple(linear), tuple(bilinear))


def check_bilinear_on(cs: ConstraintSet, spec: ExtensionSpec) -> bool:
    """
    True iff every polynomial of the two- and three-X families vanishes at spec

    Agrees with residuals_sigma(spec).ok.

    Raises:
        DimensionMismatchError: If the spec's n, f differ from the constraint set's
    """
    values = cs.generic.assignment(spec)
    return all(c.poly.evaluate(values) == 0 for c in cs.all() if c.family in SIGMA_FAMILIES)


def all_vanish(cs: ConstraintSet, spec: ExtensionSpec) -> bool:
    """True iff every generated polynomial vanishes at spec."""
    values = cs.generic.assignment(spec)
    return all(c.poly.evaluate(values) == 0 for c in cs.all())
