from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from tokenize import TokenError
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Expr, Float, Integer, Rational, Symbol
from sympy.core.sympify import SympifyError
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import GeneratorsError
from sympy.polys.rings import PolyElement, PolyRing, ring

from app.core.exceptions import DimensionMismatchError, InputError
from app.linalg.rational import RationalLike, to_rational

# Sparse view of a monomial: sorted (variable index, exponent) pairs, exponents > 0.
Monomial = Tuple[Tuple[int, int], ...]


@lru_cache(maxsize=128)
def poly_ring(variables: Tuple[str, ...]) -> PolyRing:
    """Polynomial ring over QQ in graded-lex order, one per variable universe."""
    R, *_ = ring([Symbol(name) for name in variables], QQ, grlex)
    return R


def qq(value: RationalLike):
    """Exact value as an element of QQ."""
    v = to_rational(value)
    return QQ(v.numerator, v.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _sparse(exponents: Tuple[int, ...]) -> Monomial:
    return tuple((i, e) for i, e in enumerate(exponents) if e)


@dataclass(frozen=True, eq=False)
class MultiPoly:
    """
    Polynomial over an ordered variable universe

    Wraps an element of poly_ring(variables); operands over different
    universes are moved into the ring of their union first.
    """

    variables: Tuple[str, ...]
    element: PolyElement

    @classmethod
    def from_element(cls, variables: Sequence[str], element: PolyElement) -> "MultiPoly":
        return cls(tuple(variables), element)

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "MultiPoly":
        universe = tuple(variables)
        return cls(universe, poly_ring(universe).zero)

    @classmethod
    def constant(cls, value: RationalLike, variables: Sequence[str] = ()) -> "MultiPoly":
        universe = tuple(variables)
        return cls(universe, poly_ring(universe).ground_new(qq(value)))

    @classmethod
    def variable(cls, name: str, variables: Optional[Sequence[str]] = None) -> "MultiPoly":
        universe = tuple(variables) if variables is not None else (name,)
        if name not in universe:
            raise DimensionMismatchError(f"variable {name} not in universe")
        return cls(universe, poly_ring(universe).gens[universe.index(name)])

    @classmethod
    def monomial(cls, variables: Sequence[str], index: int, coefficient: RationalLike = 1) -> "MultiPoly":
        """Degree-one term coefficient * variables[index], without a name lookup."""
        universe = tuple(variables)
        return cls(universe, poly_ring(universe).gens[index].mul_ground(qq(coefficient)))

    @property
    def ring(self) -> PolyRing:
        return self.element.ring

    @cached_property
    def terms(self) -> Tuple[Tuple[Monomial, Fraction], ...]:
        """(monomial, coefficient) pairs in descending graded-lex order."""
        return tuple((_sparse(m), from_qq(c)) for m, c in self.element.terms())

    # Inspection

    def is_zero(self) -> bool:
        return not self.element

    def degree(self) -> int:
        if not self.element:
            return -1
        return max(sum(m) for m in self.element.itermonoms())

    def term_dict(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    def used_variables(self) -> List[str]:
        used = sorted({i for m, _ in self.terms for i, _ in m})
        return [self.variables[i] for i in used]

    def constant_term(self) -> Fraction:
        return from_qq(self.element.get(self.ring.zero_monom, QQ.zero))

    def linear_part(self) -> Dict[int, Fraction]:
        """Coefficients of the degree-one monomials, keyed by variable index."""
        return {m[0][0]: c for m, c in self.terms if len(m) == 1 and m[0][1] == 1}

    # Universe alignment

    def _aligned(self, other: "MultiPoly") -> Tuple[Tuple[str, ...], PolyElement, PolyElement]:
        if self.variables == other.variables:
            return self.variables, self.element, other.element
        universe = self.variables + tuple(v for v in other.variables if v not in self.variables)
        R = poly_ring(universe)
        return universe, self.element.set_ring(R), other.element.set_ring(R)

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over a universe that contains every used variable."""
        universe = tuple(variables)
        try:
            return MultiPoly(universe, self.element.set_ring(poly_ring(universe)))
        except GeneratorsError:
            raise DimensionMismatchError("target universe is missing a used variable")

    def _coerce(self, other: Union["MultiPoly", RationalLike]) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.constant(other, self.variables)

    # Arithmetic

    def __add__(self, other: Union["MultiPoly", RationalLike]) -> "MultiPoly":
        universe, mine, theirs = self._aligned(self._coerce(other))
        return MultiPoly(universe, mine + theirs)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, -self.element)

    def __sub__(self, other: Union["MultiPoly", RationalLike]) -> "MultiPoly":
        universe, mine, theirs = self._aligned(self._coerce(other))
        return MultiPoly(universe, mine - theirs)

    def __rsub__(self, other: RationalLike) -> "MultiPoly":
        return (-self) + other

    def scale(self, factor: RationalLike) -> "MultiPoly":
        return MultiPoly(self.variables, self.element.mul_ground(qq(factor)))

    def __mul__(self, other: Union["MultiPoly", RationalLike]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        universe, mine, theirs = self._aligned(other)
        return MultiPoly(universe, mine * theirs)

    def __rmul__(self, other: RationalLike) -> "MultiPoly":
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.variables)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        _, mine, theirs = self._aligned(other)
        return mine == theirs

    def __hash__(self) -> int:
        return hash(self._named_terms())

    def _named_terms(self) -> Tuple:
        return tuple(
            sorted(
                (tuple(sorted((self.variables[i], e) for i, e in m)), c) for m, c in self.terms
            )
        )

    # Evaluation

    def evaluate(self, values: Union[Mapping[str, RationalLike], Sequence[Fraction]]) -> Fraction:
        """
        Evaluate at a point

        Args:
            values: Either a mapping from variable name to value, or a sequence
                aligned with self.variables

        Returns:
            The exact value
        """
        if isinstance(values, Mapping):
            lookup = [to_rational(values[v]) if v in values else None for v in self.variables]
        else:
            if len(values) != len(self.variables):
                raise DimensionMismatchError(
                    f"{len(values)} values for {len(self.variables)} variables"
                )
            lookup = values
        total = Fraction(0)
        for m, c in self.terms:
            term = c
            for i, e in m:
                v = lookup[i]
                if v is None:
                    raise DimensionMismatchError(f"no value for variable {self.variables[i]}")
                term *= v ** e
                if not term:
                    break
            total += term
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            names = "*".join(
                self.variables[i] if e == 1 else f"{self.variables[i]}^{e}" for i, e in m
            )
            if not names:
                body = str(abs(c))
            elif abs(c) == 1:
                body = names
            else:
                body = f"{abs(c)}*{names}"
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def poly_arith(p: MultiPoly, q: Union[MultiPoly, RationalLike], op: str) -> MultiPoly:
    """
    Apply one arithmetic operation

    Args:
        p: Left operand
        q: Right operand (a scalar for "scale")
        op: One of "add", "sub", "mul", "scale"

    Returns:
        The canonical result over the union of both universes
    """
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        if isinstance(q, MultiPoly):
            if q.degree() > 0:
                raise ValueError("scale needs a constant factor")
            q = q.constant_term()
        return p.scale(q)
    raise ValueError(f"Unsupported operation: {op}")


def parse_linear_expr(text: str, variables: Sequence[str]) -> MultiPoly:
    """
    Parse an affine expression like "-1-a", "1+a", "2*b" or "1/2"

    Args:
        text: Expression with rational coefficients and variable names
        variables: Universe of allowed variable names

    Returns:
        The polynomial over the given universe

    Raises:
        InputError: On empty or malformed text, unknown names, floats or
            terms of degree above one
    """
    universe = tuple(variables)
    if not text.strip():
        raise InputError(f"empty expression {text!r}")
    R = poly_ring(universe)
    names = {name: symbol for name, symbol in zip(universe, R.symbols)}
    # Only number and symbol constructors are visible; any other name becomes a Symbol
    scope = {"Integer": Integer, "Rational": Rational, "Float": Float, "Symbol": Symbol}
    try:
        expr = parse_expr(text, local_dict=names, global_dict=scope)
    except (SyntaxError, TokenError, SympifyError, TypeError, ValueError):
        raise InputError(f"malformed expression {text!r}")
    if not isinstance(expr, Expr):
        raise InputError(f"malformed expression {text!r}")

    unknown = sorted(s.name for s in expr.free_symbols if s.name not in names)
    if unknown:
        raise InputError(f"unknown parameter {unknown[0]!r} in {text!r}")
    if expr.atoms(Float):
        raise InputError(f"coefficients must be exact rationals in {text!r}")
    try:
        element = R.from_expr(expr)
    except ValueError:
        raise InputError(f"not a polynomial in the parameters: {text!r}")
    poly = MultiPoly(universe, element)
    if poly.degree() > 1:
        raise InputError(f"expression {text!r} is not linear")
    return poly
