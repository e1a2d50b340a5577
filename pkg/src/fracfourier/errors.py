"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class FracError(Exception):
    exit_code = 1


class ArgumentError(FracError, ValueError):
    exit_code = 2


class ContractError(ArgumentError):
    """An operation was called on a spec lacking what it needs (e.g. no exponent hypothesis)."""


class AdmissibilityError(ArgumentError):
    """Exponent hypothesis outside max(0, p - k) < alpha < p."""


class NotAvailableError(ArgumentError):
    """No exponent is known for the requested (assumption, k) pair."""


class ResourceError(FracError):
    exit_code = 3

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class RangeError(ResourceError, IndexError):
    """Coefficient requested beyond the sieve limit or table length."""


class DegenerateDataError(FracError):
    exit_code = 4


class ResolutionError(DegenerateDataError):
    """Samples too sparse for the requested scale."""


class NumericError(FracError, ArithmeticError):
    exit_code = 4
