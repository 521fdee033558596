import pytest

from app.algebra import is_lie
from app.catalog import default_samples, instantiate
from app.catalog.signature import invariant_signature
from app.core.exceptions import ConstraintViolationError, DimensionMismatchError, ShapeError
from app.extension.checks import shape_check
from app.extension.instances import diagonal_spec, maximal_diagonal_spec, random_chain
from app.extension.normalize import canonical_recombination, normalize_4, zero_pattern
from app.extension.spec import build_L
from app.extension.transforms import apply_chain, recombine_X
from app.linalg.matrix import RatMatrix


@pytest.mark.parametrize(
    "entry_id, params",
    [
        ("T1-1", {"a": 2, "s11": 1}),
        ("T1-1", {"a": 0, "s11": 3}),
        ("T1-5", {"s11": 1}),
        ("T1-6", {"s11": 2}),
        ("T1-9", {"s11": -1}),
    ],
)
def test_scrambled_entries_return_to_their_pattern(entry_spec, rng, entry_id, params):
    """Test that normalizing a scrambled instance recovers the entry's zero pattern."""
    spec = entry_spec(entry_id, **params)
    for _ in range(5):
        scrambled = apply_chain(spec, random_chain(rng, 4, 1))
        normal = normalize_4(scrambled)
        assert zero_pattern(normal) == zero_pattern(spec)


def test_normalize_keeps_shape_and_signature(catalog, rng):
    """Test that every tabulated entry normalizes to a canonical-shape isomorphic spec."""
    for entry in catalog.tabulated():
        spec = instantiate(entry, default_samples(entry)[0])
        scrambled = apply_chain(spec, random_chain(rng, 4, entry.f))
        normal = normalize_4(scrambled)
        assert shape_check(normal), entry.id
        assert invariant_signature(build_L(normal)) == invariant_signature(build_L(spec)), entry.id


def test_canonical_entry_is_fixed(entry_spec):
    """Test that an already canonical instance is left unchanged."""
    spec = entry_spec("T1-7", s11=1)
    assert normalize_4(spec) == spec
    assert zero_pattern(normalize_4(spec)) == zero_pattern(spec)


def test_lie_type_sigma_removed():
    """Test that sigma is removed when A1 is nonzero at 14."""
    spec = diagonal_spec(4, [[1, 0, 0], [0, 1, 0]]).with_sigma(1, 2, "14", 3).with_sigma(2, 1, "14", -3)
    normal = normalize_4(spec)
    assert all(not any(vec) for row in normal.sigma for vec in row)
    assert is_lie(build_L(normal))


def test_lie_type_square_rejected():
    """Test that [X, X] != 0 with A nonzero at 14 fails before normalizing."""
    spec = diagonal_spec(4, [[1, 0, 0]]).with_sigma(1, 1, "14", 1)
    with pytest.raises(ConstraintViolationError) as exc:
        normalize_4(spec)
    assert exc.value.check == "residuals"
    assert normalize_4(diagonal_spec(4, [[1, 0, 0]])).sigma == diagonal_spec(4, [[1, 0, 0]]).sigma


def test_normalize_rejects_other_n(zero_extension):
    """Test that only n = 4 specs are accepted."""
    with pytest.raises(DimensionMismatchError):
        normalize_4(maximal_diagonal_spec(5))
    with pytest.raises(ShapeError):
        normalize_4(zero_extension.with_entry("A", 1, "13", "12", 1))


def test_zero_pattern(entry_spec):
    """Test the cells recorded by zero_pattern."""
    pattern = zero_pattern(entry_spec("T1-9", s11=1))
    assert ("A", 1, 2, 3) in pattern
    assert ("B", 1, 2, 3) in pattern
    assert ("sigma", 1, 1, 5) in pattern
    assert ("A", 1, 5, 5) not in pattern


def test_scrambled_f2_entry_returns_to_its_diagonals(entry_spec, rng):
    """Test that a random recombination of the X's is undone for T2-11."""
    spec = entry_spec("T2-11", s11=1, s12=2, s21=3, s22=-1)
    for _ in range(5):
        normal = normalize_4(apply_chain(spec, random_chain(rng, 4, 2)))
        assert zero_pattern(normal) == zero_pattern(spec)
        assert [a.diagonal_values() for a in normal.A] == [a.diagonal_values() for a in spec.A]


def test_canonical_recombination(entry_spec):
    """Test that recombined X's are brought back to RREF diagonal generators."""
    spec = entry_spec("T2-11", s11=1, s12=0, s21=0, s22=1)
    assert canonical_recombination(spec) is spec
    mixed = recombine_X(spec, RatMatrix.from_rows([[2, 1], [-1, 3]]))
    assert mixed.A != spec.A
    assert canonical_recombination(mixed).A == spec.A

    dependent = diagonal_spec(4, [[1, 0, 0], [2, 0, 0]])
    assert canonical_recombination(dependent) is dependent
