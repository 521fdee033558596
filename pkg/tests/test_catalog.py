from dataclasses import replace
from fractions import Fraction

import pytest

from app.algebra import StructureConstants
from app.catalog import (
    bind_parameters,
    default_samples,
    distinctness_report,
    instantiate,
    invariant_signature,
    load_catalog,
    probe_boundaries,
    template_shape_violations,
    verify_catalog,
    verify_entry,
)
from app.catalog.signature import ALWAYS, UNDETERMINED
from app.core.exceptions import ConstraintViolationError, EntryVerificationError, InputError
from app.extension.spec import build_L


def test_catalog_contents(catalog):
    """Test the shipped catalog lists every classified family."""
    assert catalog.ids() == [f"T1-{i}" for i in range(1, 11)] + ["T2-11", "L(c)"]
    assert len(catalog.tabulated()) == 11
    assert catalog.get("T2-11").f == 2
    assert catalog.get("L(c)").kind == "tensor"
    assert catalog.get("L(c)").nilradical_dim == 1
    assert catalog.get("T1-1").dim == 7


def test_unknown_entry(catalog):
    """Test that an unknown entry id names the option."""
    with pytest.raises(InputError) as exc:
        catalog.get("T9-9")
    assert exc.value.location == "--entry"


def test_instantiate_T1_1(entry_spec):
    """Test the A, B and sigma of T1-1 at a = 2."""
    spec = entry_spec("T1-1", a=2, s11=1)
    expected = tuple(Fraction(v) for v in (1, 2, -3, 3, -1, 0))
    assert spec.A[0].diagonal_values() == expected
    assert spec.B[0] == -spec.A[0]
    assert spec.sigma_vector(1, 1) == (0, 0, 0, 0, 0, 1)


def test_instantiate_rejects_excluded_parameter(catalog):
    """Test that a = -1 is rejected by name."""
    with pytest.raises(ConstraintViolationError) as exc:
        instantiate(catalog.get("T1-1"), {"a": -1, "s11": 1})
    assert exc.value.check == "a != -1"
    assert "a != -1" in str(exc.value)


def test_instantiate_joint_constraint(catalog):
    """Test the 'not both zero' constraint of T1-8."""
    entry = catalog.get("T1-8")
    with pytest.raises(ConstraintViolationError):
        instantiate(entry, {"b": -1, "s11": 0})
    instantiate(entry, {"b": -1, "s11": 1})
    instantiate(entry, {"b": 0, "s11": 0})


def test_instantiate_L_c(entry_spec):
    """Test [b, a] = c a and [b, b] = a with every other product zero."""
    L = entry_spec("L(c)", c=3)
    assert isinstance(L, StructureConstants)
    assert L.products() == {(1, 0): ((0, Fraction(3)),), (1, 1): ((0, Fraction(1)),)}


def test_bind_parameters(catalog):
    """Test that parameters must match the entry's list exactly."""
    entry = catalog.get("T1-1")
    assert bind_parameters(entry, {"a": "1/2", "s11": 1}) == {"a": Fraction(1, 2), "s11": Fraction(1)}
    with pytest.raises(InputError):
        bind_parameters(entry, {"a": 1})
    with pytest.raises(InputError):
        bind_parameters(entry, {"a": 1, "s11": 1, "c": 2})


def test_templates_have_canonical_shape(catalog):
    """Test that every template satisfies the shape rules identically."""
    for entry in catalog.entries:
        assert template_shape_violations(entry) == [], entry.id


def test_default_samples(catalog):
    """Test sample selection, ordering and widening of the pool."""
    samples = default_samples(catalog.get("T1-2"))
    assert [s["s11"] for s in samples] == [Fraction(v) for v in ("-2", "-1", "0", "1/2", "3")]
    samples = default_samples(catalog.get("T1-5"))
    assert len(samples) == 5
    assert all(s["s11"] != 0 for s in samples)
    assert Fraction(2) in [s["s11"] for s in samples]
    assert len(default_samples(catalog.get("L(c)"))) == 5
    first = default_samples(catalog.get("T1-1"))[0]
    assert first == {"a": Fraction(-2), "s11": Fraction(-2)}


@pytest.mark.parametrize("entry_id", [f"T1-{i}" for i in range(1, 11)] + ["L(c)"])
def test_verify_entry(catalog, entry_id):
    """Test every check at the default samples."""
    report = verify_entry(catalog.get(entry_id))
    assert report.passed
    assert len(report.samples) == 5


def test_verify_T2_11_covers_each_constraint_branch(catalog):
    """Test T2-11 with each of s11, s22, s12 + s21 nonzero on its own."""
    samples = [
        {"s11": 1, "s12": 0, "s21": 0, "s22": 0},
        {"s11": 0, "s12": 0, "s21": 0, "s22": 2},
        {"s11": 0, "s12": 1, "s21": 1, "s22": 0},
        {"s11": 0, "s12": 3, "s21": 0, "s22": 0},
    ]
    samples = [{k: Fraction(v) for k, v in s.items()} for s in samples]
    report = verify_entry(catalog.get("T2-11"), samples)
    assert report.passed
    assert all(c["nilradical"] and c["not_lie"] for c in report.checks)


def test_verify_entry_reports_failing_sample(catalog):
    """Test that an unsound entry halts at its first failing check."""
    entry = catalog.get("T1-5")
    broken = replace(entry, sigma={})
    with pytest.raises(EntryVerificationError) as exc:
        verify_entry(broken, [{"s11": Fraction(1)}])
    assert exc.value.check == "not_lie"
    assert exc.value.entry_id == "T1-5"
    assert exc.value.sample == {"s11": "1"}


def test_verify_catalog(catalog):
    """Test the whole catalog at default samples."""
    result = verify_catalog(catalog, max_workers=2)
    assert result.passed
    assert [o.entry_id for o in result.outcomes] == catalog.ids()
    assert result.summary == "11/11 entries pass, 0 Lie leakage"
    assert result.supplementary == "supplementary families: 1/1 pass (L(c))"


def test_verify_catalog_single_entry(catalog):
    """Test restricting verification to one entry."""
    result = verify_catalog(catalog, entry_ids=["T1-3"], max_workers=1)
    assert [o.entry_id for o in result.outcomes] == ["T1-3"]
    assert result.summary == "1/1 entries pass, 0 Lie leakage"
    assert result.supplementary == ""


def test_boundaries(catalog):
    """Test behaviour at the excluded parameter points."""
    (probe,) = probe_boundaries(catalog.get("T1-8"))
    assert probe.leibniz
    assert probe.lie
    probes = probe_boundaries(catalog.get("T1-1"))
    assert probes[0].params == {"a": Fraction(-1), "s11": Fraction(1)}
    assert probes[0].nilradical
    assert not probes[0].lie
    (probe,) = probe_boundaries(catalog.get("L(c)"))
    assert probe.leibniz
    assert not probe.nilradical


def test_signature_of_T4(t4):
    """Test the signature of the Lie algebra T(4)."""
    sig = invariant_signature(t4)
    assert sig.derived == (3, 0)
    assert sig.lower_central == (3, 1, 0)
    assert sig.ann_left_dim == 1
    assert sig.derived_algebra_dim == 3
    assert sig.lie
    assert sig.square_span_dim == 0
    assert sig.symmetric_span_dim == 0


def test_signature_of_abelian():
    """Test the signature of a three-dimensional abelian algebra."""
    sig = invariant_signature(StructureConstants.abelian(3))
    assert sig.derived == (0,)
    assert sig.lower_central == (0,)
    assert sig.ann_left_dim == 3
    assert sig.to_dict()["lie"] is True


def test_signature_separates_T1_2_and_T1_5(entry_spec):
    """Test that squares and anticommutators tell T1-2 and T1-5 apart."""
    first = invariant_signature(build_L(entry_spec("T1-2", s11=0)))
    second = invariant_signature(build_L(entry_spec("T1-5", s11=1)))
    assert (first.square_span_dim, first.anticommutator_span_dim) == (0, 1)
    assert (second.square_span_dim, second.anticommutator_span_dim) == (1, 0)
    assert first.differences(second) == ["square_span_dim", "anticommutator_span_dim"]


def test_signature_of_L_c(entry_spec):
    """Test the derived series of L(c)."""
    sig = invariant_signature(entry_spec("L(c)", c=3))
    assert sig.derived == (1, 0)
    assert not sig.lie
    assert sig.square_span_dim == 1


def test_distinctness_pairs(catalog):
    """Test an always-distinguished pair and a self comparison."""
    entries = [catalog.get("T1-1"), catalog.get("T1-2")]
    report = distinctness_report(entries)
    assert report.verdict("T1-1", "T1-2") == ALWAYS
    assert report.verdict("T1-2", "T1-1") == ALWAYS
    assert report.verdict("T1-1", "T1-1") == UNDETERMINED
    assert "anticommutator_span_dim" in report.differing_fields[("T1-1", "T1-2")]
    assert report.undetermined_pairs() == []


def test_full_distinctness_report(catalog):
    """Test that the report covers every pair of the catalog."""
    report = distinctness_report(catalog.entries)
    ids = catalog.ids()
    assert report.entries == ids
    assert len(report.verdicts) == len(ids) ** 2
    assert all(report.verdict(a, "L(c)") == ALWAYS for a in ids if a != "L(c)")
    for a, b in report.undetermined_pairs():
        assert not report.differing_fields[(a, b)]


def test_load_catalog_errors(write_json):
    """Test that malformed and invalid catalogs are rejected with a location."""
    path = write_json("bad.json", {"version": "1.0", "entries": [{"id": "X", "n": 4, "f": 1}]})
    with pytest.raises(InputError) as exc:
        load_catalog(path)
    assert exc.value.location.startswith(path)
    with pytest.raises(InputError):
        load_catalog(path + ".missing")


def test_template_shape_violation_detected(write_json):
    """Test that a diagonal that is not a sum of generators is reported."""
    document = {
        "version": "test",
        "entries": [
            {
                "id": "bad",
                "table": 1,
                "n": 4,
                "f": 1,
                "params": ["a"],
                "constraints": [],
                "A": [{"diagonal": ["1", "a", "0", "1+a", "-1", "0"]}],
                "B": [{"negate_A": True}],
                "sigma": {},
            }
        ],
    }
    catalog = load_catalog(write_json("custom.json", document))
    problems = template_shape_violations(catalog.get("bad"))
    assert any("24" in p for p in problems)
    assert any("14" in p for p in problems)
