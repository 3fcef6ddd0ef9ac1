"""Exception taxonomy shared across the package."""


class ProjOrderError(Exception):
    """Base class for all library-specific errors."""


class AlphabetMismatch(ProjOrderError):
    """Two sequences (or a sequence and a system) use different alphabets."""


class OutOfHorizon(ProjOrderError):
    """A finite-prefix sequence was queried beyond its defined entries."""


class CapExceeded(ProjOrderError):
    """An enumeration or search exceeded its configured cap."""


class BlockLengthTooSmall(ProjOrderError):
    """Block length below the alphabet size; no block can cover every symbol."""


class InvalidPartition(ProjOrderError):
    """A start list is not a valid block partition of the sequence."""


class UndecidableAtHorizon(ProjOrderError):
    """The queried verdict depends on entries beyond the given prefix."""


class NonpositiveWeight(ProjOrderError):
    """A weight family evaluated to a value <= 0."""


class DivergenceTooSlow(ProjOrderError):
    """A divergent-sum construction did not reach its target within the cap."""


class DomainError(ProjOrderError):
    """Argument outside the mathematical domain of the gauge."""


class EpsilonTooLarge(ProjOrderError):
    """Witness construction rejected: epsilon too large for the parameters."""


class PrefixTooShort(ProjOrderError):
    """The supplied base prefix does not pin down enough entries."""


class DimensionMismatch(ProjOrderError):
    """Vector or basis dimensions are inconsistent."""


class InfeasibleSpec(ProjOrderError):
    """A generator specification cannot be satisfied."""
