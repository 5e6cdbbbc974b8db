"""Exception hierarchy shared by all modules."""


class SphtropError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 2)."""


class DimensionMismatch(SphtropError, ValueError):
    pass


class DomainError(SphtropError, ValueError):
    pass


class NonPolyhedralFan(SphtropError):
    pass
