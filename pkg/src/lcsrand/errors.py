"""Exception types raised by the public API.

Every error raised on purpose by this package derives from
:class:`LcsrandError`, so callers can catch one base class at the CLI
boundary and map it to an exit code.
"""


class LcsrandError(Exception):
    """Base class for all errors raised by lcsrand."""


class ConfigError(LcsrandError):
    """Configuration file failed schema or consistency validation."""


class SequenceParseError(LcsrandError):
    """A sequence file contained an invalid token.

    Carries 1-based ``line`` and ``column`` of the offending character
    or token so the CLI can point at it.
    """

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class NonStochastic(LcsrandError):
    """Rows of a probability matrix do not sum to one (or are negative)."""


class Reducible(LcsrandError):
    """Transition matrix is not irreducible."""


class NonConvergent(LcsrandError):
    """Iterative solver failed to reach its residual target."""


class WrongBaseVariant(LcsrandError):
    """Operation requires a different base-process variant."""


class OutOfRange(LcsrandError):
    """Index or offset falls outside the sampled environment."""


class LengthMismatch(LcsrandError):
    """Paired sequences must have equal length."""


class EmptyInput(LcsrandError):
    """Empty sequence where at least one symbol is required."""


class TooLarge(LcsrandError):
    """Input exceeds a guard bound meant to keep memory/time sane."""


class TooDeep(LcsrandError):
    """Cylinder depth would enumerate more words than the guard allows."""


class ZeroCoincidences(LcsrandError):
    """Monte Carlo coincidence counting observed no coincidences."""


class DegenerateLadder(LcsrandError):
    """Too few usable rungs (or zero spread) for a slope fit."""
