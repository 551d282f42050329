"""Exception types shared across the package."""

from __future__ import annotations


class HfgtError(Exception):
    """Base class for all package errors.

    ``code`` is a stable machine-readable diagnostic identifier.
    """

    code = "E_HFGT"

    def __init__(self, message: str, *, code: str | None = None) -> None:
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        return f"{self.code}: {self.args[0]}"


class ModelDeclarationError(HfgtError, ValueError):
    """A declaration cannot be turned into a model at all (duplicate or dangling names)."""


class InvalidModelError(HfgtError, ValueError):
    """Raised when an operation requires a model that passes validation."""

    code = "E_INVALID_MODEL"

    def __init__(self, report) -> None:
        rules = sorted({f.rule for f in report.errors})
        super().__init__(
            f"model has {len(report.errors)} validation error(s): {', '.join(rules)}"
        )
        self.report = report


class OperandNetError(HfgtError, ValueError):
    code = "E_NET"


class SystemFileError(HfgtError):
    """Problems reading a system-description file (I/O, syntax, schema)."""

    code = "E_FILE"
