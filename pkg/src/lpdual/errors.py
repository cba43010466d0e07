"""Exception hierarchy for lpdual."""


class LpDualError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LpDualError, ValueError):
    """Parameters fall outside the domain of the requested operation."""


class ConvergenceError(LpDualError, ArithmeticError):
    """A numerical procedure failed to meet its tolerance."""


class NumericalError(LpDualError, ArithmeticError):
    """A computed object failed its own validation (e.g. ODE residual)."""


class BracketError(LpDualError, ValueError):
    """The root bracket does not contain a sign change."""


class ExceptionalFamilyError(LpDualError, ValueError):
    """(p, q) is one of the pairs with constant period and a continuum of solutions."""


class ConvexityError(LpDualError, ValueError):
    """A support profile is not strictly convex (u'' + u <= 0 somewhere)."""


class PeriodMismatchError(LpDualError, ValueError):
    """An arc's turning angle does not match the requested symmetry pi*n/m."""


class ParamError(LpDualError, ValueError):
    """Invalid closed-form family parameters."""


class PreconditionError(LpDualError, ValueError):
    """Inputs violate the hypotheses of a bound check."""


class DiscrepancyError(LpDualError, AssertionError):
    """Numerical enumeration disagrees with the analytic classification."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
