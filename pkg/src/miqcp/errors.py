"""Shared exception types."""


class MiqcpError(Exception):
    """Base class for all library errors."""


class DimensionError(MiqcpError):
    """Operands have inconsistent shapes."""


class PreconditionError(MiqcpError):
    """A documented precondition of an operation was violated."""


class NotPsdError(MiqcpError):
    """A matrix required to be positive semidefinite is not.

    Carries the pivot index and the offending value found by the exact
    LDL^T factorization.
    """

    def __init__(self, pivot_index, detail):
        self.pivot_index = pivot_index
        self.detail = detail
        super().__init__(f"matrix is not PSD: pivot {pivot_index}: {detail}")


class InstanceParseError(MiqcpError):
    """An instance file failed validation; carries a JSON path and reason."""

    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")
