"""Exception types shared across the package.

Every error raised on purpose derives from NormlError so callers can catch
library failures without masking genuine bugs.  Errors that signal a
mathematical finding rather than misuse (InsufficientTerms,
NonIntegerMultiplicity) carry enough payload to be reported.
"""


class NormlError(Exception):
    """Base class for all library errors."""


class NotPrime(NormlError, ValueError):
    """A field characteristic was not a prime number."""


class DegreeTooLarge(NormlError, ValueError):
    """Requested field order exceeds the configured ceiling."""


class NotADivisor(NormlError, ValueError):
    """A subfield degree that does not divide the ambient degree."""


class NotInSubfield(NormlError, ValueError):
    """An element was expected to lie in a registered subfield but does not."""


class ZeroNorm(NormlError, ValueError):
    """Norm fibers above zero are not defined on the multiplicative group."""


class ZeroArgument(NormlError, ValueError):
    """A multiplicative character or inverse was applied to zero."""


class FieldMismatch(NormlError, ValueError):
    """Operands or expression data belong to incompatible fields."""


class DomainViolation(NormlError, ValueError):
    """A sum parameter lies outside the declared group (e.g. t = 0 on G_m)."""


class BudgetExceeded(NormlError, RuntimeError):
    """A brute-force scan or enumeration would exceed its size budget."""


class InsufficientTerms(NormlError, RuntimeError):
    """No linear recurrence is certified by the supplied number of terms.

    Carries the shortest uncertified recurrence found, if any, in
    ``self.recurrence``.  This is a finding, not a failure: sequences whose
    exponential generating L-series is irrational never certify.
    """

    def __init__(self, message, recurrence=None):
        super().__init__(message)
        self.recurrence = recurrence


class NonIntegerMultiplicity(NormlError, RuntimeError):
    """A certified recurrence exists but its power-sum weights are not integers.

    The offending multiplicity values are kept in ``self.multiplicities``.
    """

    def __init__(self, message, multiplicities=None):
        super().__init__(message)
        self.multiplicities = multiplicities


class SplittingFieldTooLarge(NormlError, ValueError):
    """A polynomial does not split over the supplied field context."""
