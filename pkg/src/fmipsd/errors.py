"""Exception hierarchy shared by every module of the package."""


class FMIError(Exception):
    """Base class for all package errors."""


# distributions

class DistributionError(FMIError, ValueError):
    pass


class NormalizationError(DistributionError):
    pass


class NegativeProbability(DistributionError):
    pass


class ShapeMismatch(FMIError, ValueError):
    pass


class IndexOutOfRange(FMIError, IndexError):
    pass


# generators

class DomainError(FMIError, ValueError):
    """A generator was evaluated outside the set where it is finite."""


class UnknownGenerator(FMIError, KeyError):
    pass


class NumericUnstable(FMIError, ArithmeticError):
    pass


class NotDifferentiable(FMIError, ArithmeticError):
    pass


# f-MI and kernels

class InfiniteDivergence(FMIError, ArithmeticError):
    """Raised when f(0) is infinite on a vanishing joint atom."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotSymmetric(FMIError, ValueError):
    pass


class ZeroMarginal(FMIError, ValueError):
    pass


class RadiusExceeded(FMIError, ValueError):
    pass


# latent family / forcing / search

class InadmissibleFamily(FMIError, ValueError):
    pass


class TooLarge(FMIError, ValueError):
    pass


class DeltaNotPSD(FMIError, ValueError):
    pass


class BudgetExhausted(FMIError, RuntimeError):
    """The search budget ran out before an indefinite replica block was found.

    ``best_lambda_min`` holds the most negative kernel eigenvalue seen, which is
    ``inf`` when no candidate family was evaluated.
    """

    def __init__(self, message, best_lambda_min=float("inf"), evaluated=0):
        super().__init__(message)
        self.best_lambda_min = best_lambda_min
        self.evaluated = evaluated
