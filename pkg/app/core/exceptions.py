from typing import Any, Dict, Optional


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench."""


class DimensionMismatchError(WorkbenchError, ValueError):
    """Operands have incompatible dimensions or shapes."""


class ShapeError(WorkbenchError, ValueError):
    """A matrix is not in the canonical (upper-triangular) form an operation needs."""

    def __init__(self, detail: str):
        super().__init__(f"shape not in canonical form: {detail}")
        self.detail = detail


class SingularMatrixError(WorkbenchError, ValueError):
    """A matrix that must be invertible is singular."""


class TransformError(WorkbenchError, ValueError):
    """A basis change does not preserve the products of T(n)."""


class ConstraintViolationError(WorkbenchError):
    """
    A named check failed

    Attributes:
        check: Name of the failed check (e.g. "leibniz", "a != -1")
    """

    def __init__(self, check: str, message: Optional[str] = None):
        super().__init__(message or f"check failed: {check}")
        self.check = check


class EntryVerificationError(ConstraintViolationError):
    """A catalog entry failed verification at a given sample."""

    def __init__(self, entry_id: str, check: str, sample: Dict[str, Any]):
        rendered = ", ".join(f"{k}={v}" for k, v in sample.items())
        super().__init__(check, f"{entry_id} failed '{check}' at sample ({rendered})")
        self.entry_id = entry_id
        self.sample = sample


class InputError(WorkbenchError):
    """
    Malformed input file or payload

    Attributes:
        location: Where the problem was found (file, line/column or field path)
    """

    def __init__(self, message: str, location: Optional[str] = None):
        full = f"{location}: {message}" if location else message
        super().__init__(full)
        self.location = location
