import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

from pydantic import ValidationError

from app.algebra.structure import StructureConstants
from app.api.schemas import CatalogEntryPayload, CatalogFilePayload, MatrixTemplatePayload
from app.core.config import settings
from app.core.exceptions import ConstraintViolationError, InputError
from app.extension.checks import support_positions
from app.extension.spec import ExtensionSpec
from app.linalg.matrix import RatMatrix
from app.linalg.poly import MultiPoly, parse_linear_expr
from app.linalg.rational import RationalLike, to_rational
from app.storage.local_storage import storage
from app.triangular.basis import tri_basis

logger = logging.getLogger(__name__)

# Sparse matrix template: 0-based (row, col) -> entry polynomial in the parameters.
Template = Dict[Tuple[int, int], MultiPoly]

Instance = Union[ExtensionSpec, StructureConstants]


@dataclass(frozen=True)
class ParameterConstraint:
    """Holds when at least one of the expressions is nonzero."""

    label: str
    exprs: Tuple[MultiPoly, ...]

    def holds(self, values: Mapping[str, Fraction]) -> bool:
        return any(p.evaluate(values) != 0 for p in self.exprs)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """
    A parametric classified algebra

    Extension entries carry A/B/sigma templates over T(n); tensor entries
    (L(c)) carry brackets on a named basis together with the nilradical.
    """

    id: str
    table: Optional[int]
    n: int
    f: int
    params: Tuple[str, ...]
    constraints: Tuple[ParameterConstraint, ...] = ()
    A: Tuple[Template, ...] = ()
    B: Tuple[Template, ...] = ()
    sigma: Dict[Tuple[int, int], Dict[str, MultiPoly]] = field(default_factory=dict)
    basis: Tuple[str, ...] = ()
    brackets: Tuple[Tuple[int, int, int, MultiPoly], ...] = ()
    nilradical: Tuple[int, ...] = ()
    boundary: Tuple[Dict[str, Fraction], ...] = ()

    @property
    def kind(self) -> str:
        return "tensor" if self.basis else "extension"

    @property
    def dim(self) -> int:
        if self.kind == "tensor":
            return len(self.basis)
        return self.n * (self.n - 1) // 2 + self.f

    @property
    def nilradical_dim(self) -> int:
        if self.kind == "tensor":
            return len(self.nilradical)
        return self.n * (self.n - 1) // 2

    def violated(self, values: Mapping[str, Fraction]) -> List[str]:
        """Labels of the constraints the values break."""
        return [c.label for c in self.constraints if not c.holds(values)]


@dataclass(frozen=True)
class Catalog:
    version: str
    description: str
    entries: Tuple[CatalogEntry, ...]

    def ids(self) -> List[str]:
        return [e.id for e in self.entries]

    def get(self, entry_id: str) -> CatalogEntry:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry
        raise InputError(f"unknown catalog entry {entry_id!r}; known: {', '.join(self.ids())}", "--entry")

    def tabulated(self) -> List[CatalogEntry]:
        """Entries of the L(4, f) tables, excluding supplementary families."""
        return [e for e in self.entries if e.table is not None]


def _template(payload: MatrixTemplatePayload, n: int, params: Tuple[str, ...], base: Template) -> Template:
    basis = tri_basis(n)
    template = dict(base)
    if payload.diagonal is not None:
        if len(payload.diagonal) != basis.r:
            raise InputError(f"diagonal has {len(payload.diagonal)} values, expected {basis.r}")
        for pos, text in enumerate(payload.diagonal):
            template[(pos, pos)] = parse_linear_expr(text, params)
    for row, col, text in payload.entries:
        template[(basis.parse_label(row), basis.parse_label(col))] = parse_linear_expr(text, params)
    return {pos: p for pos, p in template.items() if not p.is_zero()}


def _negated(template: Template) -> Template:
    return {pos: -p for pos, p in template.items()}


def _sigma_key(key: str) -> Tuple[int, int]:
    alpha, beta = key.replace(" ", "").split(",")
    return int(alpha), int(beta)


def _entry_from_payload(payload: CatalogEntryPayload) -> CatalogEntry:
    params = tuple(payload.params)
    constraints = tuple(
        ParameterConstraint(c.label, tuple(parse_linear_expr(e, params) for e in c.not_all_zero))
        for c in payload.constraints
    )
    boundary = tuple({k: to_rational(v) for k, v in point.items()} for point in payload.boundary)

    if payload.basis is not None:
        names = list(payload.basis)
        position = {name: i for i, name in enumerate(names)}
        brackets = []
        for entry in payload.brackets:
            if len(entry) != 4 or any(name not in position for name in entry[:3]):
                raise InputError(f"bracket {entry} must name three basis elements and a coefficient", payload.id)
            x, y, z, coeff = entry
            brackets.append((position[x], position[y], position[z], parse_linear_expr(coeff, params)))
        nilradical = tuple(position[name] for name in payload.nilradical or [])
        return CatalogEntry(
            id=payload.id,
            table=payload.table,
            n=payload.n,
            f=payload.f,
            params=params,
            constraints=constraints,
            basis=tuple(names),
            brackets=tuple(brackets),
            nilradical=nilradical,
            boundary=boundary,
        )

    if len(payload.A) != payload.f or len(payload.B) != payload.f:
        raise InputError(f"expected {payload.f} A and B templates", payload.id)
    A = tuple(_template(t, payload.n, params, {}) for t in payload.A)
    B = tuple(
        _template(t, payload.n, params, _negated(A[alpha]) if t.negate_A else {})
        for alpha, t in enumerate(payload.B)
    )
    basis = tri_basis(payload.n)
    sigma: Dict[Tuple[int, int], Dict[str, MultiPoly]] = {}
    for key, comps in payload.sigma.items():
        sigma[_sigma_key(key)] = {}
        for label, text in comps.items():
            basis.parse_label(label)
            sigma[_sigma_key(key)][label] = parse_linear_expr(text, params)
    return CatalogEntry(
        id=payload.id,
        table=payload.table,
        n=payload.n,
        f=payload.f,
        params=params,
        constraints=constraints,
        A=A,
        B=B,
        sigma=sigma,
        boundary=boundary,
    )


def load_catalog(path: Optional[Union[str, Path]] = None) -> Catalog:
    """
    Load and parse the catalog file

    Args:
        path: Catalog JSON; defaults to settings.CATALOG_PATH

    Returns:
        The parsed catalog, entries in file order

    Raises:
        InputError: If the file is unreadable or does not match the schema
    """
    path = path or settings.CATALOG_PATH
    document = storage.read_json(path)
    try:
        payload = CatalogFilePayload.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise InputError(first["msg"], f"{path}:{location}")
    entries = tuple(_entry_from_payload(p) for p in payload.entries)
    logger.info(f"Loaded catalog {payload.version} with {len(entries)} entries from {path}")
    return Catalog(payload.version, payload.description, entries)


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    return load_catalog(settings.CATALOG_PATH)


def bind_parameters(entry: CatalogEntry, params: Mapping[str, RationalLike]) -> Dict[str, Fraction]:
    """
    Exact parameter values for an entry

    Raises:
        InputError: On a missing or unknown parameter
    """
    unknown = sorted(set(params) - set(entry.params))
    if unknown:
        raise InputError(f"unknown parameter(s) {', '.join(unknown)} for {entry.id}")
    missing = [p for p in entry.params if p not in params]
    if missing:
        raise InputError(f"missing parameter(s) {', '.join(missing)} for {entry.id}")
    return {name: to_rational(params[name]) for name in entry.params}


def _matrix(template: Template, size: int, values: Mapping[str, Fraction]) -> RatMatrix:
    return RatMatrix.from_entries(size, [(row, col, p.evaluate(values)) for (row, col), p in template.items()])


def instantiate(entry: CatalogEntry, params: Mapping[str, RationalLike], enforce_constraints: bool = True) -> Instance:
    """
    Concrete algebra for one parameter point

    Args:
        entry: Catalog entry
        params: Value for every parameter symbol
        enforce_constraints: Reject points violating the entry's constraints;
            boundary probes pass False

    Returns:
        An ExtensionSpec, or StructureConstants for tensor entries

    Raises:
        InputError: On missing or unknown parameters
        ConstraintViolationError: Naming the first violated constraint
    """
    values = bind_parameters(entry, params)
    # Constraints are checked before anything is built
    if enforce_constraints:
        violated = entry.violated(values)
        if violated:
            logger.warning(f"{entry.id}: parameters violate '{violated[0]}'")
            raise ConstraintViolationError(violated[0], f"{entry.id}: parameters violate '{violated[0]}'")

    if entry.kind == "tensor":
        products: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for x, y, z, coeff in entry.brackets:
            products.setdefault((x, y), {})[z] = coeff.evaluate(values)
        return StructureConstants.from_products(len(entry.basis), entry.basis, products)

    # Extension entry
    r = entry.n * (entry.n - 1) // 2
    A = [_matrix(t, r, values) for t in entry.A]
    B = [_matrix(t, r, values) for t in entry.B]
    sigma = {
        key: {label: p.evaluate(values) for label, p in comps.items()}
        for key, comps in entry.sigma.items()
    }
    return ExtensionSpec.from_parts(entry.n, A, B, sigma)


def template_shape_violations(entry: CatalogEntry) -> List[str]:
    """
    Canonical-shape checks on the templates, identically in the parameters

    Diagonal sums must hold as polynomial identities, off-diagonal entries
    may only sit on the support positions, and A_{1n,1n} + B_{1n,1n} must be
    the zero polynomial.
    """
    if entry.kind == "tensor":
        return []
    basis = tri_basis(entry.n)
    zero = MultiPoly.zero(entry.params)
    centre = basis.r - 1
    problems = []
    for kind, templates in (("A", entry.A), ("B", entry.B)):
        allowed = support_positions(entry.n, kind)
        for alpha, template in enumerate(templates, start=1):
            for (row, col), p in template.items():
                if row > col:
                    problems.append(f"{kind}{alpha} has a lower-triangular entry {p}")
                elif row < col and (row, col) not in allowed:
                    problems.append(
                        f"{kind}{alpha} has entry {p} outside the support at "
                        f"({basis.label(row + 1)},{basis.label(col + 1)})"
                    )
            for t in basis.order:
                if t.width < 2:
                    continue
                pos = basis.offset(t.i, t.k)
                generators = [basis.offset(j, j + 1) for j in range(t.i, t.k)]
                total = zero
                for g in generators:
                    total = total + template.get((g, g), zero)
                if not (template.get((pos, pos), zero) - total).is_zero():
                    problems.append(f"{kind}{alpha} diagonal at {t.label(entry.n)} is not the sum of its generators")
    for alpha in range(entry.f):
        total = entry.A[alpha].get((centre, centre), zero) + entry.B[alpha].get((centre, centre), zero)
        if not total.is_zero():
            problems.append(f"A{alpha + 1} and B{alpha + 1} disagree at the centre diagonal")
    return problems
