"""
Command handlers behind the CLI

Each handler takes already-parsed options and returns a CommandResult
holding the exit code, a JSON-ready report and its text rendering.
Failures are mapped to exit codes by `execute`.
"""
import logging
import random
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from app.algebra.series import derived_series, dims, is_nilpotent, is_solvable, lower_central_series
from app.algebra.structure import check_leibniz, is_lie
from app.api import schemas
from app.catalog.entries import Catalog, bind_parameters, default_catalog, load_catalog
from app.catalog.random_specs import random_spec
from app.catalog.signature import distinctness_report, invariant_signature
from app.catalog.verify import render_sample, verify_catalog
from app.constraints.generator import generate_constraints
from app.constraints.reduce import reduce_linear
from app.core.exceptions import (
    ConstraintViolationError,
    DimensionMismatchError,
    InputError,
    ShapeError,
    SingularMatrixError,
    TransformError,
)
from app.extension.checks import certify_nilradical, shape_violations
from app.extension.normalize import normalize_4
from app.extension.residuals import residuals_all
from app.extension.spec import ExtensionSpec, build_L
from app.extension.transforms import apply_basis_transform, apply_shift, recombine_X
from app.storage.local_storage import storage
from app.triangular.basis import build_T

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

_MAX_LISTED_VIOLATIONS = 10


@dataclass
class CommandResult:
    exit_code: int
    report: Dict[str, Any]
    text: str


def execute(handler: Callable[..., CommandResult], *args, **kwargs) -> CommandResult:
    """Run a handler and map domain errors to exit codes."""
    try:
        return handler(*args, **kwargs)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "payload"
        logger.error(f"Invalid payload at {location}: {first['msg']}")
        return _error(EXIT_INPUT, f"{location}: {first['msg']}")
    except InputError as e:
        logger.error(f"Input error: {e}")
        return _error(EXIT_INPUT, str(e), e.location)
    except (TransformError, ConstraintViolationError) as e:
        check = getattr(e, "check", "check_G_preserves_tri")
        logger.warning(f"Check failed ({check}): {e}")
        return _error(EXIT_FAILED, str(e), check=check)
    except (DimensionMismatchError, ShapeError, SingularMatrixError) as e:
        logger.error(f"Rejected input: {e}")
        return _error(EXIT_INPUT, str(e))


def _error(code: int, message: str, location: Optional[str] = None, check: Optional[str] = None) -> CommandResult:
    report: Dict[str, Any] = {"error": message}
    if location:
        report["location"] = location
    if check:
        report["check"] = check
    return CommandResult(code, report, f"error: {message}")


def _flag(ok: bool) -> str:
    return "pass" if ok else "FAIL"


# Loading

def load_algebra(path: str):
    """
    Read an algebra file

    Returns:
        (StructureConstants, ExtensionSpec or None); extension files are
        recognised by their "A" key
    """
    document = storage.read_json(path)
    if not isinstance(document, dict):
        raise InputError("expected a JSON object", path)
    if "A" in document:
        spec = schemas.ExtensionSpecPayload.model_validate(document).to_spec()
        return build_L(spec), spec
    return schemas.AlgebraPayload.model_validate(document).to_structure(), None


def load_spec(path: str) -> ExtensionSpec:
    L, spec = load_algebra(path)
    if spec is None:
        raise InputError("expected an extension spec with A, B and sigma", path)
    return spec


def _emit_spec(spec: ExtensionSpec, out: Optional[str]) -> Dict[str, Any]:
    payload = schemas.ExtensionSpecPayload.from_spec(spec).model_dump()
    if out:
        storage.write_json(payload, out)
    return payload


# Handlers

def verify_file(path: str) -> CommandResult:
    L, spec = load_algebra(path)
    violations = check_leibniz(L)
    report = schemas.VerifyReport(
        kind="extension" if spec else "algebra",
        dim=L.dim,
        leibniz=not violations,
        violations=[
            f"({v.i},{v.j},{v.k}): {list(map(str, v.residual.coords))}" for v in violations[:_MAX_LISTED_VIOLATIONS]
        ],
        lie=is_lie(L),
        solvable=is_solvable(L),
        nilpotent=is_nilpotent(L),
        passed=not violations,
    )
    if spec is not None:
        report.residual_failures = {k: v for k, v in residuals_all(spec).counts().items() if v}
        report.notes = shape_violations(spec)
        report.shape = not report.notes
        try:
            certificate = certify_nilradical(spec)
            report.nilradical = {
                "leibniz": certificate.leibniz,
                "ideal": certificate.ideal,
                "nilpotent": certificate.nilpotent,
                "nilindependent": certificate.nilindependent,
            }
            report.notes += certificate.notes
            report.passed = report.passed and certificate.passed
        except ShapeError as e:
            report.notes.append(str(e))
            report.passed = False
    lines = [
        f"dimension {report.dim} ({report.kind})",
        f"leibniz: {_flag(report.leibniz)}" + (f" ({len(violations)} violating triples)" if violations else ""),
        f"lie: {report.lie}",
        f"solvable: {report.solvable}, nilpotent: {report.nilpotent}",
    ]
    if report.nilradical is not None:
        lines.append("nilradical: " + ", ".join(f"{k} {_flag(v)}" for k, v in report.nilradical.items()))
    if report.shape is not None:
        lines.append(f"canonical shape: {_flag(report.shape)}")
    lines += report.violations + report.notes
    lines.append(f"overall: {_flag(report.passed)}")
    return CommandResult(EXIT_OK if report.passed else EXIT_FAILED, report.model_dump(), "\n".join(lines))


def series(path: str) -> CommandResult:
    L, _ = load_algebra(path)
    report = schemas.SeriesReport(
        dim=L.dim,
        derived=dims(derived_series(L)),
        lower_central=dims(lower_central_series(L)),
        solvable=is_solvable(L),
        nilpotent=is_nilpotent(L),
    )
    text = "\n".join([
        f"dimension {report.dim}",
        f"derived series: {tuple(report.derived)}",
        f"lower central series: {tuple(report.lower_central)}",
        f"solvable: {report.solvable}, nilpotent: {report.nilpotent}",
    ])
    return CommandResult(EXIT_OK, report.model_dump(), text)


def invariants(path: str) -> CommandResult:
    L, _ = load_algebra(path)
    signature = invariant_signature(L)
    payload = schemas.SignaturePayload(**signature.to_dict())
    text = "\n".join(f"{k}: {v}" for k, v in payload.model_dump().items())
    return CommandResult(EXIT_OK, payload.model_dump(), text)


def build_t(n: int, out: Optional[str] = None) -> CommandResult:
    if n < 2:
        raise InputError(f"n must be at least 2, got {n}", "--n")
    payload = schemas.AlgebraPayload.from_structure(build_T(n)).model_dump()
    text = f"T({n}): dimension {payload['dim']}, {len(payload['brackets'])} nonzero products"
    if out:
        target = storage.write_json(payload, out)
        text += f"\nwritten to {target}"
    return CommandResult(EXIT_OK, payload, text)


def transform(
    path: str,
    shift: Optional[str] = None,
    basis: Optional[str] = None,
    recombine: Optional[str] = None,
    out: Optional[str] = None,
) -> CommandResult:
    spec = load_spec(path)
    if shift:
        params = schemas.ShiftPayload.model_validate(storage.read_json(shift)).to_shift(spec.n, spec.f)
        spec, step = apply_shift(spec, params), "shift"
    elif basis:
        G = schemas.BasisPayload.model_validate(storage.read_json(basis)).to_transform()
        spec, step = apply_basis_transform(spec, G), "basis"
    elif recombine:
        M = schemas.RecombinePayload.model_validate(storage.read_json(recombine)).to_matrix()
        spec, step = recombine_X(spec, M), "recombine"
    else:
        raise InputError("one of --shift, --basis or --recombine is required")
    payload = _emit_spec(spec, out)
    text = f"applied {step} transformation" + (f", written to {out}" if out else "")
    return CommandResult(EXIT_OK, payload, text)


def normalize(path: str, out: Optional[str] = None) -> CommandResult:
    spec = normalize_4(load_spec(path))
    payload = _emit_spec(spec, out)
    text = "normalized spec" + (f" written to {out}" if out else "")
    return CommandResult(EXIT_OK, payload, text)


def constraints_derive(n: int, f: int, gauge: bool = False) -> CommandResult:
    if n < 2 or not 1 <= f <= n - 1:
        raise InputError(f"need n >= 2 and 1 <= f <= n-1, got n={n}, f={f}", "--n/--f")
    cs = generate_constraints(n, f)
    pattern = reduce_linear(cs, gauge=gauge)
    report = schemas.ConstraintReport(
        n=n,
        f=f,
        gauge=gauge,
        symbols=len(cs.generic.symbols),
        rank=pattern.rank,
        counts=pattern.family_counts,
        forced_zero=pattern.forced_zero,
        pairings=[
            {"symbol": p.symbol, "other": p.other, "factor": str(p.factor), "kind": p.kind}
            for p in pattern.pairings
        ],
        relations=pattern.relations,
        free=pattern.free,
    )
    lines = [
        f"constraints for n={n}, f={f}" + (" modulo shifts" if gauge else ""),
        "families: " + ", ".join(f"{k}={v}" for k, v in sorted(report.counts.items())),
        f"rank {report.rank} over {report.symbols} symbols",
        f"forced zeros ({len(report.forced_zero)}): " + ", ".join(f"{s} = 0" for s in report.forced_zero),
        f"pairings ({len(report.pairings)}): "
        + ", ".join(f"{p['symbol']} = {p['factor']}*{p['other']}" for p in report.pairings),
    ]
    lines += report.relations
    lines.append(f"free ({len(report.free)}): " + ", ".join(report.free))
    return CommandResult(EXIT_OK, report.model_dump(), "\n".join(lines))


def parse_samples(catalog: Catalog, entry_ids: Sequence[str], texts: Sequence[str]) -> Dict[str, List[Dict]]:
    """
    Samples given as "a=2,s11=1" strings, applied to every selected entry

    Raises:
        InputError: On malformed assignments or parameters the entry lacks
    """
    points = []
    for text in texts:
        point = {}
        for part in text.split(","):
            if "=" not in part:
                raise InputError(f"expected name=value, got {part!r}", "--samples")
            name, value = part.split("=", 1)
            point[name.strip()] = value.strip()
        points.append(point)
    return {
        entry_id: [bind_parameters(catalog.get(entry_id), p) for p in points]
        for entry_id in entry_ids
    }


def catalog_verify(
    entry: Optional[str] = None,
    samples: Optional[Sequence[str]] = None,
    catalog_path: Optional[str] = None,
) -> CommandResult:
    catalog = load_catalog(catalog_path) if catalog_path else default_catalog()
    entry_ids = [entry] if entry else catalog.ids()
    explicit = None
    if samples and list(samples) != ["default"]:
        explicit = parse_samples(catalog, entry_ids, samples)
    result = verify_catalog(catalog, entry_ids, explicit)
    report = schemas.CatalogReport(
        version=result.version,
        entries=[
            schemas.EntryResult(
                entry=o.entry_id,
                passed=o.passed,
                samples=o.samples,
                failed_check=o.failed_check,
                failed_sample=o.failed_sample,
                lie_leakage=o.lie_leakage,
            )
            for o in result.outcomes
        ],
        boundaries=[
            {
                "entry": p.entry_id,
                "params": render_sample(p.params),
                "leibniz": p.leibniz,
                "lie": p.lie,
                "nilradical": p.nilradical,
            }
            for p in result.boundaries
        ],
        summary=result.summary,
        supplementary=result.supplementary,
        passed=result.passed,
    )
    lines = []
    for o in report.entries:
        if o.passed:
            lines.append(f"{o.entry}: pass ({o.samples} samples)")
        else:
            lines.append(f"{o.entry}: FAIL at {o.failed_check} with {o.failed_sample}")
    for b in report.boundaries:
        lines.append(f"boundary {b['entry']} {b['params']}: lie={b['lie']}, leibniz={b['leibniz']}")
    lines.append(report.summary)
    if report.supplementary:
        lines.append(report.supplementary)
    return CommandResult(EXIT_OK if report.passed else EXIT_FAILED, report.model_dump(), "\n".join(lines))


def catalog_list(catalog_path: Optional[str] = None) -> CommandResult:
    catalog = load_catalog(catalog_path) if catalog_path else default_catalog()
    entries = [
        {
            "id": e.id,
            "table": e.table,
            "n": e.n,
            "f": e.f,
            "dim": e.dim,
            "params": list(e.params),
            "constraints": [c.label for c in e.constraints],
        }
        for e in catalog.entries
    ]
    lines = [f"catalog {catalog.version}: {len(entries)} entries"]
    for e in entries:
        where = f"table {e['table']}" if e["table"] is not None else "supplementary"
        conditions = "; ".join(e["constraints"]) or "no constraints"
        lines.append(f"{e['id']} ({where}, dim {e['dim']}) params {', '.join(e['params'])}: {conditions}")
    return CommandResult(EXIT_OK, {"version": catalog.version, "entries": entries}, "\n".join(lines))


def catalog_distinctness(entries: Optional[Sequence[str]] = None, catalog_path: Optional[str] = None) -> CommandResult:
    catalog = load_catalog(catalog_path) if catalog_path else default_catalog()
    selected = [catalog.get(i) for i in entries] if entries else list(catalog.entries)
    report = distinctness_report(selected)
    payload = schemas.DistinctnessPayload(
        entries=report.entries,
        verdicts={a: {b: report.verdict(a, b) for b in report.entries} for a in report.entries},
    )
    width = max(len(i) for i in report.entries) + 1
    lines = ["".ljust(width) + " ".join(i[:6].ljust(6) for i in report.entries)]
    for a in report.entries:
        cells = {"always": "yes", "sometimes": "some", "undetermined": "-"}
        lines.append(a.ljust(width) + " ".join(cells[report.verdict(a, b)].ljust(6) for b in report.entries))
    undetermined = report.undetermined_pairs()
    lines.append(f"undetermined pairs: {', '.join(f'{a}/{b}' for a, b in undetermined) or 'none'}")
    return CommandResult(EXIT_OK, payload.model_dump(), "\n".join(lines))


def random_spec_command(seed: int, n: int = 4, f: int = 1, invalid: bool = False, out: Optional[str] = None) -> CommandResult:
    if n < 2 or not 1 <= f <= n - 1:
        raise InputError(f"need n >= 2 and 1 <= f <= n-1, got n={n}, f={f}", "--n/--f")
    spec = random_spec(random.Random(seed), n, f, valid=not invalid)
    payload = _emit_spec(spec, out)
    text = f"seed {seed}: random {'perturbed' if invalid else 'valid'} spec n={n}, f={f}"
    if out:
        text += f", written to {out}"
    return CommandResult(EXIT_OK, {"seed": seed, "spec": payload}, text)
