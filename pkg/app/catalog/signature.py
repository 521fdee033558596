import logging
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.algebra.series import derived_series, dims, left_annihilator, lower_central_series, product_space
from app.algebra.structure import StructureConstants, is_lie
from app.algebra.subspace import Subspace
from app.catalog.entries import CatalogEntry, instantiate
from app.catalog.verify import default_samples
from app.extension.spec import build_L

logger = logging.getLogger(__name__)

ALWAYS = "always"
SOMETIMES = "sometimes"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class InvariantSignature:
    """
    Dimensions that do not depend on the chosen basis, plus the Lie flag

    square_span_dim is taken over the basis vectors only; symmetric_span_dim
    is dim span{[x, x] : x in L}, which also counts the anticommutators.
    """

    derived: Tuple[int, ...]
    lower_central: Tuple[int, ...]
    ann_left_dim: int
    derived_algebra_dim: int
    lie: bool
    square_span_dim: int
    anticommutator_span_dim: int
    symmetric_span_dim: int

    def differences(self, other: "InvariantSignature") -> List[str]:
        return [f.name for f in fields(self) if getattr(self, f.name) != getattr(other, f.name)]

    def to_dict(self) -> Dict:
        return asdict(self)


def invariant_signature(L: StructureConstants) -> InvariantSignature:
    d = L.dim
    unit = [tuple(Fraction(1) if t == i else Fraction(0) for t in range(d)) for i in range(d)]
    # Squares and anticommutators vanish identically for Lie algebras
    squares = Subspace.span([L.bracket_vectors(e, e) for e in unit], d)
    anticommutators = Subspace.span(
        [
            tuple(a + b for a, b in zip(L.bracket_vectors(unit[i], unit[j]), L.bracket_vectors(unit[j], unit[i])))
            for i in range(d)
            for j in range(i + 1, d)
        ],
        d,
    )
    whole = Subspace.whole(d)
    return InvariantSignature(
        derived=tuple(dims(derived_series(L))),
        lower_central=tuple(dims(lower_central_series(L))),
        ann_left_dim=left_annihilator(L).dim,
        derived_algebra_dim=product_space(L, whole, whole).dim,
        lie=is_lie(L),
        square_span_dim=squares.dim,
        anticommutator_span_dim=anticommutators.dim,
        symmetric_span_dim=(squares + anticommutators).dim,
    )


def entry_signatures(entry: CatalogEntry, samples: Optional[Sequence[Mapping[str, Fraction]]] = None) -> List[InvariantSignature]:
    samples = samples if samples is not None else default_samples(entry)
    signatures = []
    for sample in samples:
        instance = instantiate(entry, sample)
        L = instance if entry.kind == "tensor" else build_L(instance)
        signatures.append(invariant_signature(L))
    return signatures


def _verdict(left: Sequence[InvariantSignature], right: Sequence[InvariantSignature], same: bool) -> Tuple[str, List[str]]:
    if same:
        pairs = list(zip(left, right))
    else:
        pairs = [(a, b) for a in left for b in right]
    differing = [a.differences(b) for a, b in pairs]
    fields_seen = sorted({name for diff in differing for name in diff})
    if pairs and all(differing):
        return ALWAYS, fields_seen
    if any(differing):
        return SOMETIMES, fields_seen
    return UNDETERMINED, fields_seen


@dataclass
class DistinctnessReport:
    """
    Pairwise signature comparison

    "always" means the signatures differ for every pair of samples,
    "sometimes" for some pairs, "undetermined" for none; the last is not a
    claim that the algebras are isomorphic.
    """

    entries: List[str]
    verdicts: Dict[Tuple[str, str], str]
    differing_fields: Dict[Tuple[str, str], List[str]]

    def verdict(self, left: str, right: str) -> str:
        return self.verdicts[(left, right)]

    def undetermined_pairs(self) -> List[Tuple[str, str]]:
        return [
            (a, b)
            for i, a in enumerate(self.entries)
            for b in self.entries[i + 1:]
            if self.verdicts[(a, b)] == UNDETERMINED
        ]


def distinctness_report(
    entries: Sequence[CatalogEntry],
    samples: Optional[Mapping[str, Sequence[Mapping[str, Fraction]]]] = None,
) -> DistinctnessReport:
    """
    Compare invariant signatures of every pair of entries

    Args:
        entries: Entries to compare
        samples: Optional per-entry samples keyed by id; default_samples otherwise

    Returns:
        A symmetric report; an entry compared with itself is always
        undetermined
    """
    samples = samples or {}
    signatures = {e.id: entry_signatures(e, samples.get(e.id)) for e in entries}
    ids = [e.id for e in entries]
    verdicts: Dict[Tuple[str, str], str] = {}
    differing: Dict[Tuple[str, str], List[str]] = {}
    for i, a in enumerate(ids):
        for b in ids[i:]:
            verdict, names = _verdict(signatures[a], signatures[b], same=(a == b))
            verdicts[(a, b)] = verdicts[(b, a)] = verdict
            differing[(a, b)] = differing[(b, a)] = names
    undetermined = sum(1 for i, a in enumerate(ids) for b in ids[i + 1:] if verdicts[(a, b)] == UNDETERMINED)
    logger.info(f"Compared {len(ids)} entries, {undetermined} undetermined pairs")
    return DistinctnessReport(ids, verdicts, differing)
