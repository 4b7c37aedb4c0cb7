"""Exception hierarchy shared by the library and the command line tool."""


class SecondOrderError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(SecondOrderError, ValueError):
    pass


class NonFiniteError(SecondOrderError, ValueError):
    pass


class ParseError(SecondOrderError, ValueError):
    pass


class ParameterError(SecondOrderError, ValueError):
    pass


class DegeneratePolynomialError(SecondOrderError, ValueError):
    pass


class NoInputError(SecondOrderError, ValueError):
    """The operation needs at least one input channel (r >= 1)."""


class KindMismatchError(SecondOrderError, ValueError):
    pass


class UnsupportedFormError(SecondOrderError, ValueError):
    pass


class ZeroTransferError(SecondOrderError, ValueError):
    pass


class PoleEvaluationError(SecondOrderError, ZeroDivisionError):
    pass


class RankDeficientError(SecondOrderError):
    """A rank test needed for invertibility failed.

    Carries the computed and required rank so callers can report both.
    """

    def __init__(self, message, computed_rank, required_rank):
        super().__init__(f"{message} (rank {computed_rank}, required {required_rank})")
        self.computed_rank = computed_rank
        self.required_rank = required_rank


class UnobservableError(RankDeficientError):
    pass


class UncontrollableError(RankDeficientError):
    pass


class InconsistentDataError(SecondOrderError):
    def __init__(self, message, residual_norm):
        super().__init__(f"{message} (residual {residual_norm:.3e})")
        self.residual_norm = residual_norm


class UncontrollableTargetError(InconsistentDataError):
    """Target lies outside the column space of the controllability matrix."""
