from fractions import Fraction

import pytest

from app.algebra import check_leibniz, is_lie
from app.catalog.random_specs import random_spec
from app.catalog.signature import invariant_signature
from app.core.exceptions import SingularMatrixError, TransformError
from app.extension.checks import certify_nilradical, shape_check
from app.extension.instances import diagonal_spec, maximal_diagonal_spec, random_chain
from app.extension.normalize import eliminate_inner, eliminate_sigma
from app.extension.residuals import residuals_all
from app.extension.spec import BasisTransform, ShiftParams, build_L
from app.extension.theorem import theorem_report
from app.extension.transforms import (
    G1_SLOTS_4,
    apply_basis_transform,
    apply_chain,
    apply_shift,
    check_G_preserves_tri,
    g1_matrix,
    g2_matrix,
    invert_chain,
    recombine_X,
    shift_pivots,
)
from app.linalg.matrix import RatMatrix
from app.triangular import tri_basis


def _swap_12_23():
    return RatMatrix.from_entries(6, [(0, 1, 1), (1, 0, 1)] + [(x, x, 1) for x in range(2, 6)])


def test_zero_shift_is_identity(entry_spec):
    """Test that mu = 0 leaves the spec unchanged."""
    spec = entry_spec("T1-7", s11=2)
    assert apply_shift(spec, ShiftParams.zero(4, 1)) == spec


def test_shift_pivots_n4():
    """Test the A positions each shift component controls for n = 4."""
    basis = tri_basis(4)
    pivots = {
        basis.label(pq + 1): (basis.label(row + 1), basis.label(col + 1), c)
        for pq, (row, col), c in shift_pivots(4)
    }
    assert pivots == {
        "12": ("23", "13", 1),
        "23": ("12", "13", -1),
        "34": ("23", "24", -1),
        "13": ("34", "14", 1),
        "24": ("12", "14", -1),
    }


def test_shift_zeroes_inner_entries(entry_spec):
    """Test the shift that removes A at the five pivot positions."""
    spec = entry_spec("T1-1", a=2, s11=1)
    mu = ShiftParams.from_entries(4, 1, {1: {"12": 1, "23": 2, "34": 3, "13": Fraction(1, 2), "24": -1}})
    scrambled = apply_shift(spec, mu)

    def a(row, col):
        return scrambled.entry("A", 1, row, col)

    assert a("12", "14") != 0
    fix = ShiftParams.from_entries(
        4,
        1,
        {1: {"12": -a("23", "13"), "23": a("12", "13"), "34": a("23", "24"), "13": -a("34", "14"), "24": a("12", "14")}},
    )
    shifted = apply_shift(scrambled, fix)
    for row, col in (("23", "13"), ("12", "13"), ("23", "24"), ("34", "14"), ("12", "14")):
        assert shifted.entry("A", 1, row, col) == 0
    assert eliminate_inner(scrambled).A == shifted.A


def test_shift_round_trip(entry_spec):
    """Test that shifting by mu then -mu restores the spec exactly."""
    spec = entry_spec("T2-11", s11=1, s12=2, s21=-1, s22=3)
    mu = ShiftParams.from_entries(4, 2, {1: {"12": 1, "34": 2}, 2: {"23": -1, "14": 5}})
    assert apply_shift(apply_shift(spec, mu), mu.negated()) == spec


def test_shift_preserves_leibniz(entry_spec):
    """Test that a shifted catalog instance still satisfies the identity."""
    spec = entry_spec("T1-3", s11=1)
    mu = ShiftParams.from_entries(4, 1, {1: {"12": 2, "23": -1, "24": Fraction(1, 2), "14": 3}})
    assert not check_leibniz(build_L(apply_shift(spec, mu)))


def test_g1_and_g2_preserve_T():
    """Test that the unit triangular and diagonal basis changes preserve T(4)."""
    slots = {slot: value for slot, value in zip(G1_SLOTS_4, (2, -1, Fraction(1, 3), 5, 1))}
    assert check_G_preserves_tri(g1_matrix(4, slots), 4)
    assert check_G_preserves_tri(g2_matrix(4, [2, -1, Fraction(3, 2)]), 4)
    assert check_G_preserves_tri(RatMatrix.identity(6), 4)


def test_permutation_does_not_preserve_T(entry_spec):
    """Test that swapping N12 and N23 is rejected."""
    assert not check_G_preserves_tri(_swap_12_23(), 4)
    with pytest.raises(TransformError):
        apply_basis_transform(entry_spec("T1-2", s11=1), _swap_12_23())


def test_singular_basis_change_rejected():
    """Test that a singular G or zero scale is rejected."""
    with pytest.raises(SingularMatrixError):
        BasisTransform(RatMatrix.zeros(6))
    with pytest.raises(SingularMatrixError):
        g2_matrix(4, [1, 0, 2])


def test_g2_scaling_law(entry_spec):
    """Test that a diagonal change scales A_{ik,ab} by g_ik / g_ab."""
    spec = entry_spec("T1-6", s11=1)
    scaled = apply_basis_transform(spec, g2_matrix(4, [2, -1, Fraction(3, 2)]))
    # g_12 = 2, g_24 = -3/2
    assert scaled.entry("A", 1, "12", "24") == Fraction(-4, 3)
    assert scaled.A[0].diagonal_values() == spec.A[0].diagonal_values()


def test_basis_change_round_trip(entry_spec):
    """Test identity and G then G^-1 on a catalog instance."""
    spec = entry_spec("T1-10", s11=2)
    assert apply_basis_transform(spec, RatMatrix.identity(6)) == spec
    G = BasisTransform(g1_matrix(4, {("12", "24"): 3, ("34", "14"): -2}))
    assert apply_basis_transform(apply_basis_transform(spec, G), G.inverted()) == spec


def test_recombine_swap(entry_spec):
    """Test that the swap matrix exchanges the two X's."""
    spec = entry_spec("T2-11", s11=1, s12=2, s21=3, s22=4)
    swapped = recombine_X(spec, RatMatrix.from_rows([[0, 1], [1, 0]]))
    assert swapped.A == (spec.A[1], spec.A[0])
    assert swapped.B == (spec.B[1], spec.B[0])
    assert swapped.sigma_vector(1, 1) == spec.sigma_vector(2, 2)
    assert swapped.sigma_vector(1, 2) == spec.sigma_vector(2, 1)
    assert recombine_X(spec, RatMatrix.identity(2)) == spec


def test_recombine_scaling(entry_spec):
    """Test that diag(2, 1) doubles A1 and keeps the identity."""
    spec = entry_spec("T2-11", s11=0, s12=1, s21=0, s22=0)
    scaled = recombine_X(spec, RatMatrix.diagonal([2, 1]))
    assert scaled.A[0] == spec.A[0].scale(2)
    assert scaled.A[1] == spec.A[1]
    assert not check_leibniz(build_L(scaled))


def test_recombine_singular_rejected(entry_spec):
    """Test that a singular recombination is rejected."""
    with pytest.raises(SingularMatrixError):
        recombine_X(entry_spec("T2-11", s11=1, s12=0, s21=0, s22=0), RatMatrix.from_rows([[1, 1], [1, 1]]))


def test_chain_skips_invalid_operations(entry_spec):
    """Test that malformed chain steps are skipped and unknown types rejected."""
    spec = entry_spec("T1-4", s11=1)
    assert apply_chain(spec, [None, {"params": 1}, {"type": "shift"}]) == spec
    with pytest.raises(ValueError):
        apply_chain(spec, [{"type": "rotate", "params": 1}])


@pytest.mark.parametrize("f", [1, 2])
def test_random_chains_preserve_algebra(rng, f):
    """Test that random admissible chains keep every invariant and invert exactly."""
    for _ in range(25):
        spec = random_spec(rng, n=4, f=f)
        chain = random_chain(rng, 4, f)
        moved = apply_chain(spec, chain)
        assert not check_leibniz(build_L(moved))
        assert residuals_all(moved).ok
        assert certify_nilradical(moved).passed == certify_nilradical(spec).passed
        assert invariant_signature(build_L(moved)) == invariant_signature(build_L(spec))
        assert apply_chain(moved, invert_chain(chain)) == spec


def test_random_chains_preserve_failure(rng):
    """Test that a chain never repairs a broken spec."""
    for _ in range(20):
        spec = random_spec(rng, n=4, f=1, valid=False)
        broken = bool(check_leibniz(build_L(spec)))
        moved = apply_chain(spec, random_chain(rng, 4, 1))
        assert bool(check_leibniz(build_L(moved))) == broken


@pytest.mark.parametrize("n", [4, 5, 6])
def test_canonical_statements_on_maximal_extension(n):
    """Test the canonical-form statements on the maximal diagonal extension."""
    spec = maximal_diagonal_spec(n)
    assert spec.f == n - 1
    assert shape_check(spec)
    report = theorem_report(spec)
    assert report.ok, report.items


def test_sigma_on_maximal_extension_fails():
    """Test that a square bracket of X2 with A2 nonzero at 1n is rejected."""
    spec = maximal_diagonal_spec(5).with_sigma(2, 2, "15", 1)
    assert "7" in residuals_all(spec).failing_families()
    assert check_leibniz(build_L(spec))


def test_lie_type_sigma_elimination():
    """Test that a central shift removes sigma when A1 is nonzero at 14."""
    spec = diagonal_spec(4, [[1, 0, 0], [0, 1, 0]]).with_sigma(1, 2, "14", 3).with_sigma(2, 1, "14", -3)
    assert residuals_all(spec).ok
    assert any(spec.sigma_vector(1, 2))
    reduced = eliminate_sigma(spec)
    assert all(not any(vec) for row in reduced.sigma for vec in row)
    assert is_lie(build_L(reduced))
    assert theorem_report(spec).items["lie_type_rule"]
