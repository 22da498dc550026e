"""Exception hierarchy shared by every module of the package."""


class MotiveError(Exception):
    """Base class for all errors raised by :mod:`unitary_motives`."""


class InvalidInput(MotiveError, ValueError):
    """Input rejected before any enumeration starts (CLI exit code 2)."""


class NonPrime(InvalidInput):
    pass


class CharTwo(InvalidInput):
    pass


class NoIrreducibleFound(MotiveError, RuntimeError):
    pass


class DegenerateAlgebra(InvalidInput):
    pass


class DegenerateForm(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class RankTooSmall(InvalidInput):
    pass


class NegativeTwist(InvalidInput):
    pass


class NotSplit(MotiveError):
    pass


class DegeneratePoint(MotiveError):
    pass


class UnresolvedAtom(MotiveError, KeyError):
    pass


class EnumerationBoundExceeded(MotiveError):
    """The requested job is larger than the configured enumeration bound (exit code 3)."""
