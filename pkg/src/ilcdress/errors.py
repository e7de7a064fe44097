"""Exception types shared across the package."""


class IlcdressError(Exception):
    """Base class for package errors."""


class DimensionError(IlcdressError, ValueError):
    """Operands act on different qubit counts, or a count is invalid."""


class ContractError(IlcdressError, ValueError):
    """A documented precondition was violated (e.g. non-Hermitian input)."""


class PauliParseError(IlcdressError, ValueError):
    """Malformed Pauli text. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FcidumpParseError(IlcdressError, ValueError):
    """Malformed FCIDUMP input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleError(IlcdressError, RuntimeError):
    """No anticommuting entangler set exists for any tried candidate pool."""

    def __init__(self, message, tried=None):
        super().__init__(message)
        self.tried = tried or []


class ConvergenceError(IlcdressError, RuntimeError):
    """An iterative solver exhausted its budget without meeting tolerance."""


class ExtractionError(IlcdressError, RuntimeError):
    """Subspace eigenvector cannot be converted to unitary parameters
    (reference-dominated solution, |sin tau| below threshold)."""
