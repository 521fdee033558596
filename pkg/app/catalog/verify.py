import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from app.algebra.series import is_ideal, is_nilpotent, is_nilpotent_element, is_solvable, left_annihilator, product_space
from app.algebra.structure import Element, StructureConstants, check_leibniz, is_lie
from app.algebra.subspace import Subspace
from app.catalog.entries import Catalog, CatalogEntry, instantiate
from app.core.config import settings
from app.core.exceptions import EntryVerificationError
from app.extension.checks import certify_nilradical, shape_check
from app.extension.spec import build_L
from app.linalg.rational import format_rational, parse_rational

logger = logging.getLogger(__name__)

Sample = Dict[str, Fraction]


def _ordered_candidates(params: Sequence[str], pool: Sequence[Fraction]):
    """Parameter points over the pool, by increasing sum of value indices."""
    grid = itertools.product(range(len(pool)), repeat=len(params))
    for indices in sorted(grid, key=lambda ix: (sum(ix), ix)):
        yield {name: pool[i] for name, i in zip(params, indices)}


def default_samples(entry: CatalogEntry, count: Optional[int] = None) -> List[Sample]:
    """
    Admissible sample points for an entry

    Points come from settings.SAMPLE_VALUES, filtered by the entry's
    constraints; when fewer than count survive, the pool is widened with
    settings.EXTRA_SAMPLE_VALUES.
    """
    count = count or settings.SAMPLES_PER_ENTRY
    if not entry.params:
        return [{}]
    pool = [parse_rational(v) for v in settings.SAMPLE_VALUES]
    extra = [parse_rational(v) for v in settings.EXTRA_SAMPLE_VALUES]
    for values in (pool, pool + extra):
        samples = []
        for candidate in _ordered_candidates(entry.params, values):
            if not entry.violated(candidate):
                samples.append(candidate)
                if len(samples) == count:
                    return samples
    logger.warning(f"{entry.id}: only {len(samples)} admissible samples available")
    return samples


def render_sample(sample: Mapping[str, Fraction]) -> Dict[str, str]:
    return {k: format_rational(v) for k, v in sample.items()}


def _unit(dim: int, index: int) -> List[Fraction]:
    return [Fraction(1) if i == index else Fraction(0) for i in range(dim)]


def extension_checks(entry: CatalogEntry, spec) -> Dict[str, bool]:
    L = build_L(spec)
    r = spec.r
    nil_span = Subspace.coordinate(range(r), L.dim)
    checks = {
        "leibniz": not check_leibniz(L),
        "not_lie": not is_lie(L),
    }
    if entry.n == 4:
        checks["nilradical"] = certify_nilradical(spec).passed
    checks["shape"] = shape_check(spec)
    checks["dimension_bound"] = 2 * r >= L.dim
    checks["solvable"] = is_solvable(L)
    checks["not_nilpotent"] = not is_nilpotent(L)
    checks["derived_in_nilradical"] = product_space(L, Subspace.whole(L.dim), Subspace.whole(L.dim)).is_subspace_of(nil_span)
    checks["n1n_left_annihilator"] = left_annihilator(L).contains(_unit(L.dim, r - 1))
    return checks


def tensor_checks(entry: CatalogEntry, L: StructureConstants) -> Dict[str, bool]:
    nil_span = Subspace.coordinate(entry.nilradical, L.dim)
    outside = [i for i in range(L.dim) if i not in entry.nilradical]
    checks = {
        "leibniz": not check_leibniz(L),
        "not_lie": not is_lie(L),
        "nilradical": (
            is_ideal(L, nil_span)
            and is_nilpotent(L.restrict(list(entry.nilradical)))
            and not any(is_nilpotent_element(L, Element.basis(L.dim, i)) for i in outside)
        ),
        "dimension_bound": 2 * len(entry.nilradical) >= L.dim,
        "solvable": is_solvable(L),
        "not_nilpotent": not is_nilpotent(L),
    }
    return checks


def sample_checks(entry: CatalogEntry, sample: Mapping[str, Fraction]) -> Dict[str, bool]:
    """Every catalog check at one admissible point, by name."""
    instance = instantiate(entry, sample)
    if entry.kind == "tensor":
        return tensor_checks(entry, instance)
    return extension_checks(entry, instance)


@dataclass
class EntryReport:
    entry_id: str
    samples: List[Sample] = field(default_factory=list)
    checks: List[Dict[str, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(all(c.values()) for c in self.checks)


def verify_entry(entry: CatalogEntry, samples: Optional[Sequence[Mapping[str, Fraction]]] = None) -> EntryReport:
    """
    Verify an entry at each sample

    Args:
        entry: Catalog entry
        samples: Admissible parameter points; defaults to default_samples(entry)

    Returns:
        Report with the check results per sample

    Raises:
        ConstraintViolationError: If a sample breaks the entry's constraints
        EntryVerificationError: At the first failing check, naming the sample
    """
    samples = list(samples) if samples is not None else default_samples(entry)
    report = EntryReport(entry.id)
    for sample in samples:
        checks = sample_checks(entry, sample)
        # Stop at the first failing check
        failed = [name for name, ok in checks.items() if not ok]
        if failed:
            logger.warning(f"{entry.id} failed {failed[0]} at {render_sample(sample)}")
            raise EntryVerificationError(entry.id, failed[0], render_sample(sample))
        report.samples.append(dict(sample))
        report.checks.append(checks)
    logger.info(f"{entry.id} passed at {len(samples)} samples")
    return report


@dataclass
class BoundaryProbe:
    """Behaviour at an excluded parameter point; reported, never asserted."""

    entry_id: str
    params: Sample
    leibniz: bool
    lie: bool
    nilradical: Optional[bool]


def probe_boundaries(entry: CatalogEntry) -> List[BoundaryProbe]:
    probes = []
    for point in entry.boundary:
        instance = instantiate(entry, point, enforce_constraints=False)
        if entry.kind == "tensor":
            L = instance
            nilradical = tensor_checks(entry, L)["nilradical"]
        else:
            L = build_L(instance)
            nilradical = certify_nilradical(instance).passed if entry.n == 4 else None
        probe = BoundaryProbe(entry.id, dict(point), not check_leibniz(L), is_lie(L), nilradical)
        logger.debug(f"Boundary {entry.id} {render_sample(point)}: lie={probe.lie}")
        probes.append(probe)
    return probes


@dataclass
class EntryOutcome:
    entry_id: str
    table: Optional[int]
    passed: bool
    samples: int
    failed_check: Optional[str] = None
    failed_sample: Optional[Dict[str, str]] = None

    @property
    def lie_leakage(self) -> int:
        return int(self.failed_check == "not_lie")


@dataclass
class CatalogVerification:
    version: str
    outcomes: List[EntryOutcome]
    boundaries: List[BoundaryProbe] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    @property
    def summary(self) -> str:
        tabulated = [o for o in self.outcomes if o.table is not None]
        passed = sum(o.passed for o in tabulated)
        leakage = sum(o.lie_leakage for o in tabulated)
        return f"{passed}/{len(tabulated)} entries pass, {leakage} Lie leakage"

    @property
    def supplementary(self) -> str:
        extra = [o for o in self.outcomes if o.table is None]
        if not extra:
            return ""
        passed = sum(o.passed for o in extra)
        names = ", ".join(o.entry_id for o in extra)
        return f"supplementary families: {passed}/{len(extra)} pass ({names})"


def _outcome(entry: CatalogEntry, samples: Optional[Sequence[Mapping[str, Fraction]]]) -> EntryOutcome:
    try:
        report = verify_entry(entry, samples)
        return EntryOutcome(entry.id, entry.table, True, len(report.samples))
    except EntryVerificationError as e:
        return EntryOutcome(entry.id, entry.table, False, 0, e.check, e.sample)


def verify_catalog(
    catalog: Catalog,
    entry_ids: Optional[Sequence[str]] = None,
    samples: Optional[Mapping[str, Sequence[Mapping[str, Fraction]]]] = None,
    max_workers: Optional[int] = None,
) -> CatalogVerification:
    """
    Verify several entries and probe their boundary points

    Args:
        catalog: Loaded catalog
        entry_ids: Entries to verify; defaults to all, in catalog order
        samples: Optional per-entry samples keyed by entry id
        max_workers: Worker threads; defaults to settings.MAX_WORKERS

    Returns:
        Outcomes in the order of entry_ids
    """
    entries = [catalog.get(i) for i in entry_ids] if entry_ids else list(catalog.entries)
    samples = samples or {}
    workers = max_workers or settings.MAX_WORKERS
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda e: _outcome(e, samples.get(e.id)), entries))
    else:
        outcomes = [_outcome(e, samples.get(e.id)) for e in entries]
    boundaries = [probe for e in entries for probe in probe_boundaries(e)]
    result = CatalogVerification(catalog.version, outcomes, boundaries)
    logger.info(result.summary)
    return result
