"""Exception hierarchy shared by all klvwb modules."""


class KlvwbError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KlvwbError):
    """Operation applied outside its domain (e.g. degree window of 0)."""


class UnsupportedType(KlvwbError):
    """Coxeter specification is unknown, non-finite or non-crystallographic."""


class SystemMismatch(KlvwbError):
    """Operands belong to different Coxeter systems."""


class DatumFormatError(KlvwbError):
    """Orbit-datum source is malformed; message carries field diagnostics."""


class MissingDescriptor(DatumFormatError):
    """An (action, parameter) row required by the schema is absent."""


class DatumError(KlvwbError):
    """Semantically inconsistent orbit datum (e.g. conflicting ascent targets)."""


class DatumInvalid(KlvwbError):
    """A datum that failed validation was passed to a downstream computation."""

    def __init__(self, failed_checks):
        self.failed_checks = list(failed_checks)
        super().__init__(
            "datum failed validation checks: " + ", ".join(self.failed_checks)
        )


class MissingCostandard(KlvwbError):
    """Costandard table absent and not derivable; duality is undetermined."""


class NonGeometricDatum(KlvwbError):
    """Self-dual basis construction failed to converge for this datum."""
