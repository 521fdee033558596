import json

import pytest

from app.api.schemas import ExtensionSpecPayload
from app.main import run


def _json(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.fixture
def spec_file(entry_spec, write_json):
    """T1-1 at a = 2, s11 = 1 written as a spec document."""
    spec = entry_spec("T1-1", a=2, s11=1)
    return write_json("t1-1.json", ExtensionSpecPayload.from_spec(spec).model_dump())


def _swap_12_23():
    rows = [["1" if i == j else "0" for j in range(6)] for i in range(6)]
    rows[0][0], rows[0][1], rows[1][0], rows[1][1] = "0", "1", "1", "0"
    return rows


def test_build_t_then_verify(tmp_path, capsys):
    """Test that a written T(4) verifies as a Lie algebra."""
    target = tmp_path / "t4.json"
    assert run(["build-t", "--n", "4", "--out", str(target)]) == 0
    assert "T(4): dimension 6" in capsys.readouterr().out
    assert target.exists()

    assert run(["verify", str(target)]) == 0
    out = capsys.readouterr().out
    assert "leibniz: pass" in out
    assert "lie: True" in out


def test_series_json(tmp_path, capsys):
    """Test the series report of T(3) in JSON form."""
    target = tmp_path / "t3.json"
    assert run(["build-t", "--n", "3", "--out", str(target)]) == 0
    capsys.readouterr()
    assert run(["--format", "json", "series", str(target)]) == 0
    report = _json(capsys)
    assert report["derived"] == [1, 0]
    assert report["lower_central"] == [1, 0]
    assert report["nilpotent"] is True


def test_verify_non_leibniz_algebra(write_json, capsys):
    """Test that [x, x] = x fails verification with exit code 1."""
    path = write_json("bad.json", {"dim": 1, "basis": ["x"], "brackets": [[1, 1, 1, "1"]]})
    assert run(["verify", path]) == 1
    out = capsys.readouterr().out
    assert "leibniz: FAIL" in out
    assert "overall: FAIL" in out


def test_verify_extension_spec(spec_file, capsys):
    """Test that a catalog instance passes, certificate included."""
    assert run(["--format", "json", "verify", spec_file]) == 0
    report = _json(capsys)
    assert report["kind"] == "extension"
    assert report["lie"] is False
    assert report["nilradical"]["nilindependent"] is True


def test_malformed_json_is_input_error(tmp_path, capsys):
    """Test that unparsable input exits with 2 and a location."""
    path = tmp_path / "broken.json"
    path.write_text("{\n  \"dim\": \n}")
    assert run(["--format", "json", "verify", str(path)]) == 2
    report = _json(capsys)
    assert report["location"].startswith(str(path) + ":")


def test_missing_file_is_input_error(tmp_path, capsys):
    """Test that a missing file exits with 2."""
    assert run(["series", str(tmp_path / "nope.json")]) == 2
    assert capsys.readouterr().out.startswith("error:")


def test_catalog_verify_single_entry(capsys):
    """Test the text report for one entry at default samples."""
    assert run(["catalog", "verify", "--entry", "T1-1"]) == 0
    out = capsys.readouterr().out
    assert "T1-1: pass (5 samples)" in out
    assert "1/1 entries pass, 0 Lie leakage" in out
    assert "boundary T1-1" in out


def test_catalog_verify_explicit_samples(capsys):
    """Test that explicit admissible samples are used as given."""
    assert run(["--format", "json", "catalog", "verify", "--entry", "T1-1", "--samples", "a=2,s11=1", "a=0,s11=3"]) == 0
    report = _json(capsys)
    assert report["entries"][0]["samples"] == 2
    assert report["passed"] is True


def test_catalog_verify_rejects_constraint_violation(capsys):
    """Test that a sample breaking a constraint exits with 1 and names it."""
    assert run(["--format", "json", "catalog", "verify", "--entry", "T1-1", "--samples", "a=-1,s11=1"]) == 1
    assert _json(capsys)["check"] == "a != -1"


def test_catalog_verify_unknown_entry(capsys):
    """Test that an unknown entry id is an input error."""
    assert run(["--format", "json", "catalog", "verify", "--entry", "T9-9"]) == 2
    assert _json(capsys)["location"] == "--entry"


def test_catalog_verify_malformed_sample(capsys):
    """Test that a sample without '=' is rejected."""
    assert run(["--format", "json", "catalog", "verify", "--entry", "T1-1", "--samples", "a2"]) == 2
    assert _json(capsys)["location"] == "--samples"


def test_catalog_list(capsys):
    """Test the catalog listing header and supplementary marker."""
    assert run(["catalog", "list"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("catalog 1.0: 12 entries")
    assert "supplementary" in out


def test_catalog_distinctness_pair(capsys):
    """Test that T1-1 and T1-2 are always told apart."""
    assert run(["--format", "json", "catalog", "distinctness", "--entries", "T1-1", "T1-2"]) == 0
    report = _json(capsys)
    assert report["verdicts"]["T1-1"]["T1-2"] == "always"
    assert report["verdicts"]["T1-1"]["T1-1"] == "undetermined"


def test_constraints_derive(capsys):
    """Test that the n = 4, f = 1 derivation lists the known forced zero."""
    assert run(["constraints", "derive", "--n", "4", "--f", "1"]) == 0
    out = capsys.readouterr().out
    assert "A1_34_23 = 0" in out
    assert "families:" in out


def test_constraints_derive_bad_f(capsys):
    """Test that f outside 1..n-1 is an input error."""
    assert run(["constraints", "derive", "--n", "4", "--f", "4"]) == 2


def test_transform_shift(spec_file, write_json, tmp_path, capsys):
    """Test a shift read from a file and written out."""
    shift = write_json("mu.json", {"mu": {"1": {"12": "1"}}})
    target = tmp_path / "shifted.json"
    assert run(["transform", spec_file, "--shift", shift, "--out", str(target)]) == 0
    assert "applied shift transformation" in capsys.readouterr().out

    assert run(["verify", str(target)]) == 0
    capsys.readouterr()
    assert json.loads(target.read_text()) != json.loads(open(spec_file).read())


def test_transform_bad_shift_index(spec_file, write_json, capsys):
    """Test that a shift for a non-existent X is rejected."""
    shift = write_json("mu.json", {"mu": {"2": {"12": "1"}}})
    assert run(["--format", "json", "transform", spec_file, "--shift", shift]) == 2
    assert _json(capsys)["location"] == "mu"


def test_transform_rejects_non_preserving_basis(spec_file, write_json, capsys):
    """Test that swapping N12 and N23 fails the preservation check."""
    basis = write_json("g.json", {"G": _swap_12_23()})
    assert run(["--format", "json", "transform", spec_file, "--basis", basis]) == 1
    assert _json(capsys)["check"] == "check_G_preserves_tri"


def test_transform_singular_basis(spec_file, write_json, capsys):
    """Test that a singular G is an input error."""
    basis = write_json("g.json", {"G": [["0"] * 6 for _ in range(6)]})
    assert run(["transform", spec_file, "--basis", basis]) == 2


def test_normalize_round_trip(spec_file, tmp_path, capsys):
    """Test that normalizing a catalog instance keeps it valid."""
    target = tmp_path / "normal.json"
    assert run(["normalize", spec_file, "--out", str(target)]) == 0
    capsys.readouterr()
    assert run(["--format", "json", "verify", str(target)]) == 0
    assert _json(capsys)["shape"] is True


def test_normalize_rejects_other_n(tmp_path, capsys):
    """Test that normalize only accepts n = 4."""
    target = tmp_path / "t5.json"
    assert run(["random-spec", "--seed", "3", "--n", "5", "--out", str(target)]) == 0
    capsys.readouterr()
    assert run(["normalize", str(target)]) == 2


def test_invariants(spec_file, capsys):
    """Test the signature report of a catalog instance."""
    assert run(["--format", "json", "invariants", spec_file]) == 0
    report = _json(capsys)
    assert report["lie"] is False
    assert report["ann_left_dim"] >= 1


def test_random_spec(tmp_path, capsys):
    """Test that random-spec is reproducible and verifies."""
    assert run(["random-spec", "--seed", "7"]) == 0
    assert capsys.readouterr().out.startswith("seed 7: random valid spec n=4, f=1")

    assert run(["--format", "json", "random-spec", "--seed", "7"]) == 0
    first = _json(capsys)
    assert run(["--format", "json", "random-spec", "--seed", "7"]) == 0
    assert _json(capsys) == first
    assert first["seed"] == 7

    target = tmp_path / "r.json"
    assert run(["random-spec", "--seed", "7", "--out", str(target)]) == 0
    capsys.readouterr()
    assert run(["--format", "json", "verify", str(target)]) in (0, 1)
    assert _json(capsys)["leibniz"] is True


def test_random_spec_invalid(capsys):
    """Test that --invalid is reported in the text."""
    assert run(["random-spec", "--seed", "7", "--invalid"]) == 0
    assert "random perturbed spec" in capsys.readouterr().out


def test_bad_log_level(capsys):
    """Test that an unknown log level exits with 2."""
    assert run(["--log-level", "bogus", "catalog", "list"]) == 2


def test_bad_arguments():
    """Test that argparse errors map to exit code 2."""
    assert run(["frobnicate"]) == 2
    assert run(["build-t"]) == 2
