"""Constraint families of the Leibniz identity for L(n, f), evaluated on a spec."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from app.extension.spec import ExtensionSpec
from app.linalg.matrix import Vector
from app.linalg.rational import format_rational
from app.triangular.basis import build_T

logger = logging.getLogger(__name__)

LINEAR_FAMILIES = ("4a", "4b", "4c", "5")
SIGMA_FAMILIES = ("6a", "6b", "6c", "7")

# Leibniz triple type for each family (N = nilradical element, X = extension element).
FAMILY_TRIPLES = {
    "4a": ("X", "N", "N"),
    "4b": ("N", "N", "X"),
    "4c": ("N", "X", "N"),
    "6a": ("X", "X", "N"),
    "6b": ("X", "N", "X"),
    "6c": ("N", "X", "X"),
    "7": ("X", "X", "X"),
}


@dataclass(frozen=True)
class ResidualFailure:
    """A nonzero residual: family, the basis labels involved, and the offending vector."""

    family: str
    where: Tuple[str, ...]
    residual: Vector

    def describe(self, names: Sequence[str]) -> str:
        comps = ", ".join(
            f"{names[t]}: {format_rational(v)}" for t, v in enumerate(self.residual) if v
        )
        return f"({self.family}) at ({', '.join(self.where)}) -> {{{comps}}}"


@dataclass
class ResidualReport:
    families: Dict[str, List[ResidualFailure]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.families.values())

    def failing_families(self) -> List[str]:
        return [name for name, fails in self.families.items() if fails]

    def counts(self) -> Dict[str, int]:
        return {name: len(fails) for name, fails in self.families.items()}

    def merge(self, other: "ResidualReport") -> "ResidualReport":
        return ResidualReport({**self.families, **other.families})


class _Ops:
    """Row-vector actions of X^a on the nilradical for one spec."""

    def __init__(self, spec: ExtensionSpec):
        self.spec = spec
        self.T = build_T(spec.n)
        self.r = spec.r
        self.labels = spec.basis.names()

    def unit(self, x: int) -> Vector:
        return tuple(Fraction(1) if t == x else Fraction(0) for t in range(self.r))

    def br(self, u: Vector, v: Vector) -> Vector:
        return self.T.bracket_vectors(u, v)

    def left(self, alpha: int, u: Vector) -> Vector:
        return self.spec.A[alpha].vecmul(u)

    def right(self, alpha: int, u: Vector) -> Vector:
        return self.spec.B[alpha].vecmul(u)

    def sigma(self, alpha: int, beta: int) -> Vector:
        return self.spec.sigma[alpha][beta]

    @staticmethod
    def combine(*terms: Tuple[int, Vector]) -> Vector:
        size = len(terms[0][1])
        out = [Fraction(0)] * size
        for sign, vec in terms:
            for t, v in enumerate(vec):
                if v:
                    out[t] += sign * v
        return tuple(out)


def residuals_4(spec: ExtensionSpec) -> ResidualReport:
    """
    Families with one extension element, plus the A = -B relation

    4a: X^a(N_x N_y), 4b: (N_x N_y) X^a, 4c: N_x X^a N_y as Leibniz triples;
    5: (A^a + B^a)_{ab,ik} = 0 for every column ik other than 1n.

    Returns:
        Report keyed "4a", "4b", "4c", "5"
    """
    ops = _Ops(spec)
    report = ResidualReport({name: [] for name in LINEAR_FAMILIES})
    units = [ops.unit(x) for x in range(ops.r)]
    for alpha in range(spec.f):
        xa = f"X{alpha + 1}"
        lefts = [ops.left(alpha, u) for u in units]
        rights = [ops.right(alpha, u) for u in units]
        for x in range(ops.r):
            for y in range(ops.r):
                nxy = ops.br(units[x], units[y])
                where = (xa, ops.labels[x], ops.labels[y])
                res_a = ops.combine(
                    (1, ops.left(alpha, nxy)),
                    (-1, ops.br(lefts[x], units[y])),
                    (-1, ops.br(units[x], lefts[y])),
                )
                if any(res_a):
                    report.families["4a"].append(ResidualFailure("4a", where, res_a))
                res_b = ops.combine(
                    (1, ops.br(units[x], rights[y])),
                    (-1, ops.right(alpha, nxy)),
                    (-1, ops.br(units[y], rights[x])),
                )
                if any(res_b):
                    report.families["4b"].append(ResidualFailure("4b", where, res_b))
                res_c = ops.combine(
                    (1, ops.br(units[x], lefts[y])),
                    (-1, ops.br(rights[x], units[y])),
                    (-1, ops.left(alpha, nxy)),
                )
                if any(res_c):
                    report.families["4c"].append(ResidualFailure("4c", where, res_c))
        center = ops.r - 1
        total = spec.A[alpha] + spec.B[alpha]
        for x in range(ops.r):
            off_center = tuple(v if t != center else Fraction(0) for t, v in enumerate(total.row(x)))
            if any(off_center):
                report.families["5"].append(ResidualFailure("5", (xa, ops.labels[x]), off_center))
    failing = report.failing_families()
    if failing:
        logger.debug(f"Linear residual families failing: {failing}")
    return report


def residuals_sigma(spec: ExtensionSpec) -> ResidualReport:
    """
    Families with two or three extension elements

    6a: X^a X^b N, 6b: X^a N X^b, 6c: N X^a X^b and 7: X^a X^b X^c, over all
    index combinations including repeats.

    Returns:
        Report keyed "6a", "6b", "6c", "7"
    """
    ops = _Ops(spec)
    report = ResidualReport({name: [] for name in SIGMA_FAMILIES})
    units = [ops.unit(x) for x in range(ops.r)]
    f = spec.f
    for a in range(f):
        for b in range(f):
            s_ab = ops.sigma(a, b)
            for y in range(ops.r):
                u = units[y]
                ny = ops.labels[y]
                res_6a = ops.combine(
                    (1, ops.left(a, ops.left(b, u))),
                    (-1, ops.br(s_ab, u)),
                    (-1, ops.left(b, ops.left(a, u))),
                )
                if any(res_6a):
                    report.families["6a"].append(ResidualFailure("6a", (f"X{a + 1}", f"X{b + 1}", ny), res_6a))
                res_6b = ops.combine(
                    (1, ops.left(a, ops.right(b, u))),
                    (-1, ops.right(b, ops.left(a, u))),
                    (-1, ops.br(u, s_ab)),
                )
                if any(res_6b):
                    report.families["6b"].append(ResidualFailure("6b", (f"X{a + 1}", ny, f"X{b + 1}"), res_6b))
                res_6c = ops.combine(
                    (1, ops.br(u, s_ab)),
                    (-1, ops.right(b, ops.right(a, u))),
                    (-1, ops.left(a, ops.right(b, u))),
                )
                if any(res_6c):
                    report.families["6c"].append(ResidualFailure("6c", (ny, f"X{a + 1}", f"X{b + 1}"), res_6c))
            for c in range(f):
                res_7 = ops.combine(
                    (1, ops.left(a, ops.sigma(b, c))),
                    (-1, ops.right(c, s_ab)),
                    (-1, ops.left(b, ops.sigma(a, c))),
                )
                if any(res_7):
                    report.families["7"].append(
                        ResidualFailure("7", (f"X{a + 1}", f"X{b + 1}", f"X{c + 1}"), res_7)
                    )
    failing = report.failing_families()
    if failing:
        logger.debug(f"Sigma residual families failing: {failing}")
    return report


def residuals_all(spec: ExtensionSpec) -> ResidualReport:
    return residuals_4(spec).merge(residuals_sigma(spec))
