from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

from app.core.exceptions import DimensionMismatchError, InputError
from app.linalg import MultiPoly, parse_linear_expr, poly_arith
from app.linalg.poly import poly_ring

VARS = ("x", "y", "z")
coefficients = st.integers(min_value=-5, max_value=5).map(Fraction)


@st.composite
def polys(draw):
    """Random polynomial of degree <= 2 over x, y, z."""
    p = MultiPoly.constant(draw(coefficients), VARS)
    for name in VARS:
        p = p + MultiPoly.variable(name, VARS).scale(draw(coefficients))
    p = p + MultiPoly.variable("x", VARS) * MultiPoly.variable("y", VARS).scale(draw(coefficients))
    return p


def test_poly_arith_examples():
    """Test cancellation and the difference of squares."""
    x = MultiPoly.variable("x", VARS)
    y = MultiPoly.variable("y", VARS)
    assert poly_arith(x, -x, "add").is_zero()
    assert poly_arith(x + y, x - y, "mul") == x * x - y * y
    assert poly_arith(x, 3, "scale") == x.scale(3)
    with pytest.raises(ValueError):
        poly_arith(x, y, "div")


def test_like_terms_cancel_across_universes():
    """Test that sigma*A - sigma*A cancels when the operands use different universes."""
    s = MultiPoly.variable("s11")
    a = MultiPoly.variable("A1")
    first = s * a
    second = a * s
    assert (first - second).is_zero()


def test_terms_are_graded_lex():
    """Test that higher-degree terms come first."""
    x = MultiPoly.variable("x", VARS)
    y = MultiPoly.variable("y", VARS)
    p = 1 + y + x * x
    degrees = [sum(e for _, e in m) for m, _ in p.terms]
    assert degrees == [2, 1, 0]
    assert str(p) == "x^2 + y + 1"


@given(polys(), polys(), polys())
def test_ring_laws(p, q, r):
    """Test distributivity, commutativity and additive inverses."""
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert (p - p).is_zero()


@given(polys(), polys(), st.tuples(coefficients, coefficients, coefficients))
def test_evaluation_is_a_homomorphism(p, q, point):
    """Test that evaluation commutes with addition and multiplication."""
    values = dict(zip(VARS, point))
    assert (p + q).evaluate(values) == p.evaluate(values) + q.evaluate(values)
    assert (p * q).evaluate(values) == p.evaluate(values) * q.evaluate(values)


def test_parse_linear_expr():
    """Test parsing of catalog parameter expressions."""
    params = ("a", "b", "s11")
    assert parse_linear_expr("-1-a", params).evaluate({"a": 2}) == -3
    assert parse_linear_expr("1+a", params).evaluate({"a": Fraction(1, 2)}) == Fraction(3, 2)
    assert parse_linear_expr("2*b", params).evaluate({"b": 3}) == 6
    assert parse_linear_expr("1/2", params).constant_term() == Fraction(1, 2)
    assert parse_linear_expr("s11", params).linear_part() == {2: 1}
    for bad in ["c", "1+", "a b", "", "a*b", "1/a", "0.5", "N", "True"]:
        with pytest.raises(InputError):
            parse_linear_expr(bad, params)


def test_polys_live_in_a_sympy_ring():
    """Test that arithmetic agrees with sympy's QQ[x, y, z] in graded-lex order."""
    R, gx, gy, gz = ring("x,y,z", QQ, grlex)
    x = MultiPoly.variable("x", VARS)
    y = MultiPoly.variable("y", VARS)
    z = MultiPoly.variable("z", VARS)
    p = (x + y.scale(Fraction(1, 2))) * (x - z) + 3
    expected = (gx + gy * QQ(1, 2)) * (gx - gz) + 3
    assert p.ring is poly_ring(VARS)
    assert p.element.as_expr() == expected.as_expr()
    assert [c for _, c in p.terms] == [Fraction(int(c.numerator), int(c.denominator)) for c in expected.coeffs()]


def test_with_variables():
    """Test moving a polynomial into a larger universe and rejecting a smaller one."""
    p = MultiPoly.variable("y", ("x", "y")) * 2 + 1
    moved = p.with_variables(("w", "x", "y"))
    assert moved.variables == ("w", "x", "y")
    assert moved.linear_part() == {2: 2}
    assert moved == p
    with pytest.raises(DimensionMismatchError):
        p.with_variables(("x",))
