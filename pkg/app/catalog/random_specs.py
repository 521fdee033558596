import logging
import random
from fractions import Fraction
from typing import Optional

from app.catalog.entries import Catalog, default_catalog, instantiate
from app.catalog.verify import default_samples
from app.extension.instances import diagonal_spec, random_chain
from app.extension.spec import ExtensionSpec
from app.extension.transforms import apply_chain

logger = logging.getLogger(__name__)

_VALUES = (Fraction(-2), Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3))
_NONZERO = (Fraction(-3), Fraction(-1), Fraction(1, 2), Fraction(1), Fraction(2))


def _base_spec(rng: random.Random, n: int, f: int, catalog: Optional[Catalog]) -> ExtensionSpec:
    candidates = []
    if n == 4:
        catalog = catalog or default_catalog()
        candidates = [e for e in catalog.tabulated() if e.kind == "extension" and e.f == f]
    if candidates and rng.random() < 0.5:
        entry = rng.choice(candidates)
        sample = rng.choice(default_samples(entry))
        logger.debug(f"Random spec from {entry.id}")
        return instantiate(entry, sample)
    rows = [[rng.choice(_VALUES) for _ in range(n - 1)] for _ in range(f)]
    return diagonal_spec(n, rows)


def _perturb(rng: random.Random, spec: ExtensionSpec) -> ExtensionSpec:
    basis = spec.basis
    kind = rng.choice(("A", "B", "sigma"))
    alpha = rng.randint(1, spec.f)
    delta = rng.choice(_NONZERO)
    if kind == "sigma":
        beta = rng.randint(1, spec.f)
        offset = rng.randrange(spec.r)
        label = basis.label(offset + 1)
        return spec.with_sigma(alpha, beta, label, spec.sigma_vector(alpha, beta)[offset] + delta)
    row, col = rng.randrange(spec.r), rng.randrange(spec.r)
    rlabel, clabel = basis.label(row + 1), basis.label(col + 1)
    return spec.with_entry(kind, alpha, rlabel, clabel, spec.entry(kind, alpha, rlabel, clabel) + delta)


def random_spec(
    rng: random.Random,
    n: int = 4,
    f: int = 1,
    valid: bool = True,
    catalog: Optional[Catalog] = None,
) -> ExtensionSpec:
    """
    Random extension spec

    Valid specs are catalog instances (n = 4) or diagonal commuting
    extensions, scrambled by a random admissible chain. Otherwise one
    entry of A, B or sigma is perturbed; the result usually, but not
    always, breaks the Leibniz identity.

    Args:
        rng: Seeded random source
        n: Size of T(n)
        f: Extension degree
        valid: Whether to skip the perturbation
        catalog: Catalog to draw from; defaults to the shipped one
    """
    spec = apply_chain(_base_spec(rng, n, f, catalog), random_chain(rng, n, f))
    if not valid:
        spec = _perturb(rng, spec)
    return spec
