"""Exception types shared across the package."""


class MultinormError(Exception):
    """Base class for all package errors."""


class NotAGroup(MultinormError):
    """A multiplication table fails the group axioms.

    ``witness`` carries the offending data: an associativity triple
    (a, b, c), or a single element index for identity/inverse failures.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TooLarge(MultinormError):
    """A generated group would exceed the configured order cap."""


class NotNormal(MultinormError):
    """A quotient-flavored construction was asked for a non-normal subgroup."""


class InvalidSubgroup(MultinormError):
    """An element list is not closed under the group operations."""


class NotAProduct(MultinormError):
    """An operation requiring direct-product structure got a plain group."""


class NotAComplex(MultinormError):
    """d_out . d_in != 0; ``witness`` is an offending column index."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotChainCompatible(MultinormError):
    """A cochain map fails to send cycles to cycles or boundaries to
    boundaries; ``witness`` is an offending ambient vector."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegreeCapExceeded(MultinormError):
    """A cochain degree lies outside the configured degree cap."""


class RankOverflow(MultinormError):
    """A cochain space would exceed the configured rank cap."""


class DegreeOutOfRange(MultinormError):
    """A transfer map was requested in a degree where it is undefined."""


class UnsupportedModule(MultinormError):
    """The module falls outside what the operation supports (for example
    coinvariants with torsion, or degree-0 deflation with nontrivial
    kernel action)."""


class FixedSequenceNotExact(MultinormError):
    """The fixed-point sequence of a short exact sequence is not exact;
    ``witness`` explains where exactness fails."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SolveError(MultinormError):
    """An exact linear solve had no integral solution."""
