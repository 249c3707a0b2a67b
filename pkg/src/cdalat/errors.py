"""Exception hierarchy shared by all cdalat modules.

Every contract violation raises a named subclass of CdalatError so callers
can distinguish bad input from genuine bugs.  Messages carry the offending
values where that is cheap.
"""


class CdalatError(Exception):
    """Base class for all library errors."""


# -- exact scalars -----------------------------------------------------------

class DivisionByZero(CdalatError, ZeroDivisionError):
    pass


class NonIntegralInput(CdalatError):
    pass


class ZeroInput(CdalatError):
    """Operation undefined at zero (e.g. valuation, canonical associate)."""


class FactorBudgetExceeded(CdalatError):
    """Norm has a rational prime factor above the trial-division bound."""


# -- relative field ----------------------------------------------------------

class ExtensionMismatch(CdalatError):
    pass


class ZeroInverse(CdalatError, ZeroDivisionError):
    pass


class NotRational(CdalatError):
    """Trace/norm reduction left nonzero coefficients outside the base field."""


# -- cyclic algebra ----------------------------------------------------------

class AlgebraMismatch(CdalatError):
    pass


class NotInCenter(CdalatError):
    """Reduced norm/trace did not land in the center; descriptor is broken."""


class NotARepresentation(CdalatError):
    """Matrix is not in the image of the standard representation."""


class NonIntegralGamma(CdalatError):
    """Natural order requested for a non-integral twist element."""


# -- lattices and orders -----------------------------------------------------

class NonIntegralEntry(CdalatError):
    pass


class RankDeficient(CdalatError):
    pass


class NotASquare(CdalatError):
    pass


class NotDivisible(CdalatError):
    pass


class NumericallySingular(CdalatError):
    pass


# -- maximal order search ----------------------------------------------------

class ResidueFieldTooLarge(CdalatError):
    pass


class CandidateSearchExhausted(CdalatError):
    """Radical construction produced a module violating its own valuation
    characterization; the completion at this prime is not a division algebra."""


class BudgetExhausted(CdalatError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class UnsupportedPrime(CdalatError):
    """Discriminant prime without a declared division-completion contract."""


class MismatchReport(CdalatError):
    """Published regression basis and computed order disagree."""


# -- discriminant bound ------------------------------------------------------

class InconsistentIndices(CdalatError):
    """Local indices whose lcm is not the requested algebra index."""


# -- codebooks ---------------------------------------------------------------

class NotAMember(CdalatError):
    pass


class ZeroGenerator(CdalatError):
    pass


class BoxTooSmall(CdalatError):
    def __init__(self, message, required_box=None):
        super().__init__(message)
        self.required_box = required_box


class DuplicatePoints(CdalatError):
    pass


# -- simulator ---------------------------------------------------------------

class UnnormalizedCodebook(CdalatError):
    pass


class NotBracketed(CdalatError):
    pass
