from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional, Union

from pydantic import BaseModel, BeforeValidator, Field, field_validator, model_validator

from app.algebra.structure import StructureConstants
from app.core.exceptions import InputError
from app.extension.spec import BasisTransform, ExtensionSpec, ShiftParams
from app.linalg.matrix import RatMatrix
from app.linalg.rational import format_rational, parse_rational
from app.triangular.basis import tri_basis


def _coerce_rational(v: Any) -> str:
    if isinstance(v, bool):
        raise ValueError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        try:
            return format_rational(parse_rational(v))
        except InputError as e:
            raise ValueError(str(e))
    raise ValueError(f"not a rational: {v!r}")


# Rationals travel as "p/q" (or "p") strings; integers are accepted on input.
Rational = Annotated[str, BeforeValidator(_coerce_rational)]


def _fraction(v: str) -> Fraction:
    return parse_rational(v)


def _matrix(rows: List[List[str]]) -> RatMatrix:
    return RatMatrix.from_rows([[_fraction(v) for v in row] for row in rows])


def _rows(m: RatMatrix) -> List[List[str]]:
    return [[format_rational(v) for v in row] for row in m.entries]


def _pair_key(key: str) -> tuple:
    parts = key.replace(" ", "").split(",")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ValueError(f"sigma key must look like '1,2', got {key!r}")
    return int(parts[0]), int(parts[1])


class AlgebraPayload(BaseModel):
    dim: int
    basis: List[str]
    brackets: List[List[Union[int, Rational]]] = []

    @field_validator("dim")
    def validate_dim(cls, v):
        if v < 0:
            raise ValueError("Dimension must be non-negative")
        return v

    @model_validator(mode="after")
    def validate_shape(self):
        if len(self.basis) != self.dim:
            raise ValueError(f"{len(self.basis)} basis names for dim {self.dim}")
        for entry in self.brackets:
            if len(entry) != 4:
                raise ValueError("each bracket must be [i, j, k, \"c\"]")
            for index in entry[:3]:
                if not isinstance(index, int) or not 1 <= index <= self.dim:
                    raise ValueError(f"bracket index {index!r} outside 1..{self.dim}")
        return self

    def to_structure(self) -> StructureConstants:
        products: Dict[tuple, Dict[int, Fraction]] = {}
        for i, j, k, c in self.brackets:
            products.setdefault((i - 1, j - 1), {})[k - 1] = _fraction(str(c))
        return StructureConstants.from_products(self.dim, self.basis, products)

    @classmethod
    def from_structure(cls, L: StructureConstants) -> "AlgebraPayload":
        brackets = []
        for (i, j), out in sorted(L.products().items()):
            for k, c in out:
                brackets.append([i + 1, j + 1, k + 1, format_rational(c)])
        return cls(dim=L.dim, basis=list(L.basis_names), brackets=brackets)

    class Config:
        json_schema_extra = {
            "example": {
                "dim": 2,
                "basis": ["a", "b"],
                "brackets": [[2, 1, 1, "3"], [2, 2, 1, "1"]]
            }
        }


class ExtensionSpecPayload(BaseModel):
    n: int
    f: int
    A: List[List[List[Rational]]]
    B: List[List[List[Rational]]]
    sigma: Dict[str, Dict[str, Rational]] = {}

    @field_validator("n")
    def validate_n(cls, v):
        if v < 2:
            raise ValueError("n must be at least 2")
        return v

    @field_validator("sigma")
    def validate_sigma_keys(cls, v):
        for key in v:
            _pair_key(key)
        return v

    def to_spec(self) -> ExtensionSpec:
        basis = tri_basis(self.n)
        sigma = {}
        for key, comps in self.sigma.items():
            sigma[_pair_key(key)] = {basis.parse_label(label): _fraction(value) for label, value in comps.items()}
        if len(self.A) != self.f or len(self.B) != self.f:
            raise InputError(f"expected {self.f} A and B matrices", "A/B")
        spec = ExtensionSpec.from_parts(
            self.n,
            [_matrix(m) for m in self.A],
            [_matrix(m) for m in self.B],
        )
        for (alpha, beta), comps in sigma.items():
            if not (1 <= alpha <= self.f and 1 <= beta <= self.f):
                raise InputError(f"sigma index ({alpha},{beta}) outside 1..{self.f}", "sigma")
            for offset, value in comps.items():
                spec = spec.with_sigma(alpha, beta, basis.order[offset].label(self.n), value)
        return spec

    @classmethod
    def from_spec(cls, spec: ExtensionSpec) -> "ExtensionSpecPayload":
        basis = spec.basis
        sigma: Dict[str, Dict[str, str]] = {}
        for alpha in range(spec.f):
            for beta in range(spec.f):
                comps = {
                    basis.label(t + 1): format_rational(v)
                    for t, v in enumerate(spec.sigma[alpha][beta])
                    if v
                }
                if comps:
                    sigma[f"{alpha + 1},{beta + 1}"] = comps
        return cls(
            n=spec.n,
            f=spec.f,
            A=[_rows(m) for m in spec.A],
            B=[_rows(m) for m in spec.B],
            sigma=sigma,
        )

    class Config:
        json_schema_extra = {
            "example": {
                "n": 4,
                "f": 1,
                "A": [[["1", "0", "0", "0", "0", "0"], ["..."]]],
                "B": [[["-1", "0", "0", "0", "0", "0"], ["..."]]],
                "sigma": {"1,1": {"14": "1"}}
            }
        }


class ShiftPayload(BaseModel):
    mu: Dict[str, Dict[str, Rational]]

    def to_shift(self, n: int, f: int) -> ShiftParams:
        entries = {}
        for alpha, comps in self.mu.items():
            if not alpha.isdigit() or not 1 <= int(alpha) <= f:
                raise InputError(f"shift index {alpha!r} outside 1..{f}", "mu")
            entries[int(alpha)] = {label: _fraction(v) for label, v in comps.items()}
        return ShiftParams.from_entries(n, f, entries)

    class Config:
        json_schema_extra = {"example": {"mu": {"1": {"12": "1/2", "14": "-1"}}}}


class BasisPayload(BaseModel):
    G: List[List[Rational]]

    def to_transform(self) -> BasisTransform:
        return BasisTransform(_matrix(self.G))


class RecombinePayload(BaseModel):
    M: List[List[Rational]]

    def to_matrix(self) -> RatMatrix:
        return _matrix(self.M)


# Catalog file

class ConstraintPayload(BaseModel):
    label: str
    not_all_zero: List[str]


class MatrixTemplatePayload(BaseModel):
    diagonal: Optional[List[str]] = None
    entries: List[List[str]] = []
    negate_A: bool = False

    @field_validator("entries")
    def validate_entries(cls, v):
        for entry in v:
            if len(entry) != 3:
                raise ValueError("template entries are [row, col, value]")
        return v


class CatalogEntryPayload(BaseModel):
    id: str
    table: Optional[int] = None
    n: int
    f: int
    params: List[str] = []
    constraints: List[ConstraintPayload] = []
    A: Optional[List[MatrixTemplatePayload]] = None
    B: Optional[List[MatrixTemplatePayload]] = None
    sigma: Dict[str, Dict[str, str]] = {}
    basis: Optional[List[str]] = None
    brackets: Optional[List[List[str]]] = None
    nilradical: Optional[List[str]] = None
    boundary: List[Dict[str, Rational]] = []

    @model_validator(mode="after")
    def validate_kind(self):
        is_extension = self.A is not None and self.B is not None
        is_tensor = self.basis is not None and self.brackets is not None
        if is_extension == is_tensor:
            raise ValueError(f"entry {self.id} must give either A/B templates or basis/brackets")
        return self


class CatalogFilePayload(BaseModel):
    version: str
    description: str = ""
    entries: List[CatalogEntryPayload]


# Reports

class SeriesReport(BaseModel):
    dim: int
    derived: List[int]
    lower_central: List[int]
    solvable: bool
    nilpotent: bool


class SignaturePayload(BaseModel):
    derived: List[int]
    lower_central: List[int]
    ann_left_dim: int
    derived_algebra_dim: int
    lie: bool
    square_span_dim: int
    anticommutator_span_dim: int
    symmetric_span_dim: int


class VerifyReport(BaseModel):
    kind: str
    dim: int
    leibniz: bool
    violations: List[str] = []
    lie: bool
    solvable: bool
    nilpotent: bool
    residual_failures: Dict[str, int] = {}
    shape: Optional[bool] = None
    nilradical: Optional[Dict[str, bool]] = None
    notes: List[str] = []
    passed: bool


class ConstraintReport(BaseModel):
    n: int
    f: int
    gauge: bool
    symbols: int
    rank: int
    counts: Dict[str, int]
    forced_zero: List[str]
    pairings: List[Dict[str, str]]
    relations: List[str]
    free: List[str]


class EntryResult(BaseModel):
    entry: str
    passed: bool
    samples: int
    failed_check: Optional[str] = None
    failed_sample: Optional[Dict[str, str]] = None
    lie_leakage: int = 0


class CatalogReport(BaseModel):
    version: str
    entries: List[EntryResult]
    boundaries: List[Dict[str, Any]] = []
    summary: str
    supplementary: str = ""
    passed: bool


class DistinctnessPayload(BaseModel):
    entries: List[str]
    verdicts: Dict[str, Dict[str, str]] = Field(default_factory=dict)
