"""Exception hierarchy shared by every layer of the package."""


class SteinhausError(Exception):
    """Base class for all errors raised by this package."""


class KernelError(SteinhausError):
    """Numeric kernel failure (exit code 3 in the CLI)."""


class PrecisionExhausted(KernelError):
    pass


class UnknownBasisIndex(KernelError):
    pass


class HeightCapExceeded(KernelError):
    pass


class InvariantViolation(KernelError):
    pass


class CandidateBoundExceeded(KernelError):
    pass


class UsageError(SteinhausError):
    """Bad input from the caller (exit code 2 in the CLI)."""


class InvalidEpsilon(UsageError):
    pass


class IntervalTooShort(UsageError):
    pass


class SingularMatrix(UsageError):
    pass


class DimensionMismatch(UsageError):
    pass


class ParseError(UsageError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
