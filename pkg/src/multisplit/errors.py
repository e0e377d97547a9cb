"""Exception hierarchy shared by every module of the package."""


class MultisplitError(Exception):
    """Base class for all errors raised by :mod:`multisplit`."""


class SingularMatrixError(MultisplitError, ValueError):
    """A matrix that must be inverted is numerically singular.

    ``pivot`` holds the smallest pivot magnitude found by the LU
    factorization, ``index`` the part number when the matrix belongs to a
    multisplitting.
    """

    def __init__(self, msg, pivot=None, index=None):
        super().__init__(msg)
        self.pivot = pivot
        self.index = index


class NotPositiveDefiniteError(MultisplitError, ValueError):
    """A matrix required to be (non-Hermitian) positive definite is not."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class EigensolverError(MultisplitError, ArithmeticError):
    """The dense eigensolver failed to converge."""


class NonNormalError(MultisplitError, ValueError):
    """The bracket operation was asked for a non-normal matrix."""


class MembershipError(MultisplitError, ValueError):
    """A block matrix is outside the class an operation requires."""


class SplittingError(MultisplitError, ValueError):
    """Base class for invalid splittings and multisplittings."""


class WeightError(SplittingError):
    """Weighting matrices are negative, non-diagonal or do not sum to I."""


class InconsistentSplittingError(SplittingError):
    """``A`` is not reproduced by ``M - N`` (or ``M + N``)."""


class BoundError(SplittingError):
    """A shift parameter lies below its admissible lower bound."""

    def __init__(self, msg, bound=None, index=None):
        super().__init__(msg)
        self.bound = bound
        self.index = index


class DivergenceError(MultisplitError, ArithmeticError):
    """An iteration blew up; ``report`` holds the history up to the abort."""

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class WorkerError(MultisplitError, RuntimeError):
    """A parallel sub-task raised; ``index`` is the failing part number."""

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


class NumericalCheckError(MultisplitError, ArithmeticError):
    """An internal consistency identity failed beyond its tolerance."""
