"""Exception types shared across the package."""


class WContactError(Exception):
    """Base class for all package-specific errors."""


class ParseError(WContactError):
    """Raised on malformed polynomial or job-file input.

    Carries the character position of the offending token.
    """

    def __init__(self, message, position=None):
        super().__init__(message if position is None
                         else f"{message} (at position {position})")
        self.position = position


class UnknownVariable(WContactError):
    pass


class InfiniteColength(WContactError):
    """The staircase complement of a leading-term ideal is unbounded."""


class NotAUnit(WContactError):
    """Series inversion requested for an element with no constant term."""


class ContactOrderMismatch(WContactError):
    """The x-order of E(x, 0) does not match the requested contact order."""


class CertificationFailed(WContactError):
    """Colength certification did not stabilize below the truncation cap."""


class NotIsolated(WContactError):
    """The singularity is not isolated (Jacobian-type ideal has infinite colength)."""


class InconsistentBranchCount(WContactError):
    """mu + r - 1 is odd, so no integer delta invariant exists."""


class NotWContact(WContactError):
    """E(x, 0) vanishes at the base point, or the contact order is wrong."""


class WrongKind(WContactError):
    """A contact-only (or interior-only) operation was applied to the other kind."""


class E0NotInIdeal(WContactError):
    """The central equation does not belong to the ideal defining the subscheme."""


class PointNotOnScheme(WContactError):
    pass


class JobError(WContactError):
    """Malformed job file: undefined names, cycles, bad task arguments."""
