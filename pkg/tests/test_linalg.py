import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, Rational

from app.core.exceptions import DimensionMismatchError, InputError, SingularMatrixError
from app.linalg import RatMatrix, format_rational, mat_is_nilpotent, null_space, parse_rational, rref

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)


def test_parse_and_format_rational():
    """Test the "p/q" string form of rationals."""
    assert parse_rational("3") == 3
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(Fraction(4, 2)) == "2"
    for bad in ["", "1.5", "a", "1/0", "2/"]:
        with pytest.raises(InputError):
            parse_rational(bad)


@given(rationals, rationals)
def test_addition_is_exact(p, q):
    """Test that (p + q) - q == p with no rounding."""
    assert (p + q) - q == p


def test_rref_examples():
    """Test rref on the identity, a zero matrix and a rank-one matrix."""
    identity = RatMatrix.identity(3)
    assert rref(identity) == (identity, 3, [0, 1, 2])

    zero = RatMatrix.zeros(2, 4)
    reduced, rank, pivots = rref(zero)
    assert reduced == zero
    assert rank == 0
    assert pivots == []

    reduced, rank, pivots = rref(RatMatrix.from_rows([[1, 2], [2, 4]]))
    assert reduced == RatMatrix.from_rows([[1, 2], [0, 0]])
    assert rank == 1


@given(st.lists(st.lists(rationals, min_size=4, max_size=4), min_size=1, max_size=4))
def test_rref_is_idempotent(rows):
    """Test that reducing a reduced matrix changes nothing."""
    reduced, rank, pivots = rref(RatMatrix.from_rows(rows))
    again, rank_again, pivots_again = rref(reduced)
    assert again == reduced
    assert (rank_again, pivots_again) == (rank, pivots)


def test_null_space_vectors_are_annihilated():
    """Test that every null-space vector is mapped to zero."""
    m = RatMatrix.from_rows([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]])
    basis = null_space(m)
    assert len(basis) == 4 - m.rank()
    for v in basis:
        assert m.transpose().vecmul(v) == (0, 0, 0)


def test_inverse():
    """Test exact inversion and rejection of singular matrices."""
    m = RatMatrix.from_rows([[2, 1], [1, 1]])
    assert m @ m.inverse() == RatMatrix.identity(2)
    with pytest.raises(SingularMatrixError):
        RatMatrix.from_rows([[1, 2], [2, 4]]).inverse()


def test_mat_is_nilpotent_examples():
    """Test nilpotency on strict triangular, identity and a table diagonal."""
    strict = RatMatrix.from_rows([[0, 1, 1], [0, 0, 1], [0, 0, 0]])
    assert mat_is_nilpotent(strict)
    assert not mat_is_nilpotent(RatMatrix.identity(2))
    assert not mat_is_nilpotent(RatMatrix.diagonal([1, 0, -1, 1, -1, 0]))
    with pytest.raises(DimensionMismatchError):
        mat_is_nilpotent(RatMatrix.zeros(2, 3))


def test_nilpotency_matches_diagonal_on_random_triangular():
    """Test that 200 random triangular matrices are nilpotent iff their diagonal vanishes."""
    rng = random.Random(7)
    values = [Fraction(0)] * 4 + [Fraction(1), Fraction(-2), Fraction(1, 3)]
    for _ in range(200):
        size = rng.randint(1, 5)
        m = RatMatrix.from_entries(
            size, [(i, j, rng.choice(values)) for i in range(size) for j in range(i, size)]
        )
        assert mat_is_nilpotent(m) == (not any(m.diagonal_values()))



def test_inverse_of_empty_matrix():
    """Test that the 0x0 matrix is its own inverse."""
    empty = RatMatrix.zeros(0)
    assert empty.inverse() == empty
    assert empty.rank() == 0


def test_inverse_matches_sympy():
    """Test an exact inverse with fractional entries against sympy's Matrix.inv."""
    rows = [[2, 1, 0], [Fraction(1, 3), -1, 4], [0, 5, Fraction(-1, 2)]]
    expected = Matrix([[Rational(v) for v in row] for row in rows]).inv()
    inverse = RatMatrix.from_rows(rows).inverse()
    for i in range(3):
        for j in range(3):
            assert inverse[i, j] == Fraction(int(expected[i, j].p), int(expected[i, j].q))


def test_domain_matrix_round_trip():
    """Test conversion to and from a sparse DomainMatrix."""
    m = RatMatrix.from_rows([[0, Fraction(1, 2)], [3, 0], [0, 0]])
    dm = m.to_domain_matrix()
    assert dm.shape == (3, 2)
    assert RatMatrix.from_domain_matrix(dm) == m
