import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app.constraints.generator import ConstraintSet, GenericExtension
from app.extension.transforms import shift_pivots
from app.linalg.poly import MultiPoly, from_qq, qq
from app.linalg.rational import format_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Pairing:
    """symbol = factor * other"""

    symbol: str
    other: str
    factor: Fraction

    @property
    def kind(self) -> str:
        if self.factor == 1:
            return "equal"
        if self.factor == -1:
            return "negated"
        return "proportional"


@dataclass
class LinearPattern:
    """
    Solved form of the linear constraints

    Attributes:
        forced_zero: Symbols that vanish on every solution
        pairings: Two-term relations symbol = factor * other
        relations: Remaining pivot relations, rendered as text
        free: Symbols that parametrise the solution space
        rank: Number of independent linear constraints
        family_counts: Polynomial counts per family of the source set
    """

    generic: GenericExtension
    forced_zero: List[str]
    pairings: List[Pairing]
    relations: List[str]
    free: List[str]
    rank: int
    family_counts: Dict[str, int]
    gauge: bool = False
    _basis: Optional[DomainMatrix] = field(default=None, repr=False)
    _pivots: Tuple[int, ...] = field(default=(), repr=False)
    _columns: Dict[int, int] = field(default=None, repr=False)

    def implies(self, poly: MultiPoly) -> bool:
        """True iff the linear relation poly = 0 follows from the constraints."""
        aligned = poly.with_variables(self.generic.symbols)
        if aligned.degree() > 1 or aligned.constant_term():
            return False
        target = {self._columns[i]: qq(c) for i, c in aligned.linear_part().items()}
        if not target:
            return True
        # A row-space vector is the combination of the RREF rows weighted by its own pivot entries
        weights = {k: target[p] for k, p in enumerate(self._pivots) if p in target}
        if not weights:
            return False
        combination = DomainMatrix({0: weights}, (1, self.rank), QQ) * self._basis
        row = combination.to_sparse().rep.get(0, {})
        return {c: v for c, v in row.items() if v} == target

    def is_forced_zero(self, symbol: str) -> bool:
        return symbol in set(self.forced_zero)

    def forced_zero_positions(self, kind: str, alpha: int = 1) -> Set[Tuple[int, int]]:
        """0-based (row, col) positions of A^alpha or B^alpha that are forced to zero."""
        positions = set()
        for symbol in self.forced_zero:
            loc = self.generic.locate(self.generic.symbols.index(symbol))
            if loc[0] == kind and loc[1] == alpha:
                positions.add((loc[2], loc[3]))
        return positions

    def unforced_offdiagonal(self, kind: str, alpha: int = 1) -> Set[Tuple[int, int]]:
        zero = self.forced_zero_positions(kind, alpha)
        r = self.generic.r
        return {(i, j) for i in range(r) for j in range(r) if i != j and (i, j) not in zero}

    def unpaired_b_symbols(self, alpha: int = 1) -> List[str]:
        """B^alpha symbols for which B = -A is not implied."""
        g = self.generic
        unpaired = []
        for row in range(g.r):
            for col in range(g.r):
                b = g.matrix_index("B", alpha, row, col)
                a = g.matrix_index("A", alpha, row, col)
                relation = MultiPoly.monomial(g.symbols, b) + MultiPoly.monomial(g.symbols, a)
                if not self.implies(relation):
                    unpaired.append(g.symbols[b])
        return unpaired


def column_order(generic: GenericExtension) -> List[int]:
    """
    Symbol indices in pivot priority order

    B symbols first, then sigma, then off-diagonal A entries, then the A
    diagonal from 1n back to the generators, so the generators stay free.
    """
    r, f = generic.r, generic.f
    order = []
    for alpha in range(1, f + 1):
        order += [generic.matrix_index("B", alpha, i, j) for i in range(r) for j in range(r)]
    for alpha in range(1, f + 1):
        for beta in range(1, f + 1):
            order += [generic.sigma_index(alpha, beta, pq) for pq in range(r)]
    for alpha in range(1, f + 1):
        order += [generic.matrix_index("A", alpha, i, j) for i in range(r) for j in range(r) if i != j]
    for alpha in range(1, f + 1):
        order += [generic.matrix_index("A", alpha, i, i) for i in reversed(range(r))]
    return order


def reduce_linear(cs: ConstraintSet, gauge: bool = False) -> LinearPattern:
    """
    Row-reduce the linear constraints

    The coefficient matrix is brought to reduced row-echelon form over QQ
    with columns in column_order priority.

    Args:
        cs: Constraint set
        gauge: Also impose A^a = 0 at every shift pivot, i.e. reduce modulo
            the redefinitions X -> X + mu

    Returns:
        The solved pattern
    """
    generic = cs.generic
    order = column_order(generic)
    columns = {symbol: col for col, symbol in enumerate(order)}
    width = len(order)
    rows = []
    for c in cs.linear:
        if c.poly.constant_term():
            logger.warning(f"Inconsistent constant in constraint {c.family} {c.triple}")
        rows.append({columns[i]: qq(v) for i, v in c.poly.linear_part().items()})
    if gauge:
        for pq, (row, col), _ in shift_pivots(generic.n):
            for alpha in range(1, generic.f + 1):
                rows.append({columns[generic.matrix_index("A", alpha, row, col)]: QQ.one})

    system = DomainMatrix({i: row for i, row in enumerate(rows) if row}, (len(rows), width), QQ)
    if rows:
        reduced, pivots = system.rref()
    else:
        reduced, pivots = system, ()
    echelon = reduced.to_sparse().rep
    rank = len(pivots)
    basis = DomainMatrix({k: dict(echelon[k]) for k in range(rank)}, (rank, width), QQ)

    def name(col: int) -> str:
        return generic.symbols[order[col]]

    forced_zero, pairings, relations = [], [], []
    for k, pivot in enumerate(pivots):
        others = sorted((c, from_qq(v)) for c, v in echelon[k].items() if c != pivot)
        if not others:
            forced_zero.append(name(pivot))
        elif len(others) == 1:
            col, v = others[0]
            pairings.append(Pairing(name(pivot), name(col), -v))
        else:
            terms = " ".join(
                f"{'-' if -v < 0 else '+'} {format_rational(abs(v))}*{name(col)}" for col, v in others
            )
            relations.append(f"{name(pivot)} = {terms}")
    pivot_set = set(pivots)
    free = [name(col) for col in range(width) if col not in pivot_set]
    logger.info(
        f"Linear reduction n={generic.n}, f={generic.f}: rank {rank}, "
        f"{len(forced_zero)} forced zeros, {len(free)} free"
    )
    return LinearPattern(
        generic=generic,
        forced_zero=forced_zero,
        pairings=pairings,
        relations=relations,
        free=free,
        rank=rank,
        family_counts=cs.counts_by_family(),
        gauge=gauge,
        _basis=basis,
        _pivots=tuple(pivots),
        _columns=columns,
    )
