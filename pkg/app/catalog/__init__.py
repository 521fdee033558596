from app.catalog.entries import (
    Catalog,
    CatalogEntry,
    ParameterConstraint,
    bind_parameters,
    default_catalog,
    instantiate,
    load_catalog,
    template_shape_violations,
)
from app.catalog.verify import (
    BoundaryProbe,
    CatalogVerification,
    EntryReport,
    default_samples,
    probe_boundaries,
    verify_catalog,
    verify_entry,
)
from app.catalog.signature import (
    DistinctnessReport,
    InvariantSignature,
    distinctness_report,
    entry_signatures,
    invariant_signature,
)
from app.catalog.random_specs import random_spec

__all__ = [
    "Catalog",
    "CatalogEntry",
    "ParameterConstraint",
    "bind_parameters",
    "default_catalog",
    "instantiate",
    "load_catalog",
    "template_shape_violations",
    "BoundaryProbe",
    "CatalogVerification",
    "EntryReport",
    "default_samples",
    "probe_boundaries",
    "verify_catalog",
    "verify_entry",
    "DistinctnessReport",
    "InvariantSignature",
    "distinctness_report",
    "entry_signatures",
    "invariant_signature",
    "random_spec",
]
