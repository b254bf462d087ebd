"""Exception types raised across the package."""


class PfaffError(Exception):
    """Base class for all package errors."""


class ParseError(PfaffError, ValueError):
    pass


class ZeroPolynomial(PfaffError, ValueError):
    pass


class NotInDirection(PfaffError, ValueError):
    pass


class NotInvariant(PfaffError, ValueError):
    pass


class FullKernel(PfaffError, ValueError):
    pass


class NonRationalSpectrum(PfaffError, ValueError):
    pass


class NotSimultaneouslyDiagonalizable(PfaffError, ValueError):
    pass


class AssumptionViolation(PfaffError, ValueError):
    pass


class EmptyDirection(PfaffError, ValueError):
    pass


class UnknownLabel(PfaffError, KeyError):
    pass


class BranchKeyMismatch(PfaffError, KeyError):
    pass


class NotFuchsian(PfaffError, ValueError):
    pass


class PlaneMismatch(PfaffError, ValueError):
    pass


class NotIrreducible(PfaffError, ValueError):
    pass


class UnknownFixture(PfaffError, KeyError):
    pass


class MissingParameter(PfaffError, KeyError):
    pass


class InvalidSystem(PfaffError, ValueError):
    pass
