"""Exception and warning types shared across indexforge.

Each exception maps to a CLI exit code through ``exit_code``.
"""


class IndexForgeError(Exception):
    exit_code = 1


class UsageError(IndexForgeError, ValueError):
    """Bad arguments: wrong shapes, out-of-range indices, unknown tags."""


class ParseError(IndexForgeError, ValueError):
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} (at {', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class ConfigurationError(IndexForgeError, ValueError):
    """A tuning parameter (e.g. an epsilon) is incompatible with the data."""


class DegenerateInputError(IndexForgeError, ValueError):
    exit_code = 2


class DomainError(DegenerateInputError):
    """Input lies outside the mathematical domain of a model."""


class AllIterationsFailedError(DegenerateInputError):
    def __init__(self, method, failures):
        kinds = sorted({f.error_type for f in failures})
        super().__init__(
            f"every iteration failed for method {method} ({len(failures)} failures: {', '.join(kinds)})"
        )
        self.method = method
        self.failures = failures


class NumericError(IndexForgeError, ArithmeticError):
    exit_code = 3

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DecompositionError(NumericError):
    pass


class IndexForgeWarning(UserWarning):
    """Emitted for recoverable data issues (constant columns, all-zero columns)."""
