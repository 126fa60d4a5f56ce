"""Exception hierarchy shared by every module."""


class HardyBenchError(Exception):
    """Base class for all errors raised by hardy_bench."""


class InvalidGroupError(HardyBenchError, ValueError):
    pass


class ConfigurationError(HardyBenchError, ValueError):
    pass


class ShapeError(HardyBenchError, ValueError):
    pass


class DomainError(HardyBenchError, ValueError):
    pass


class ParameterError(HardyBenchError, ValueError):
    """A theorem parameter (p, Q, q, ...) lies outside its admissible range."""


class PreconditionError(HardyBenchError, ValueError):
    """The test function violates a support or regularity precondition."""


class ConvergenceError(HardyBenchError, RuntimeError):
    """Adaptive quadrature did not reach its tolerance.

    The partial value, error estimate and subdivision count are kept on the
    exception so callers can report them.
    """

    def __init__(self, message, value=float("nan"), error_estimate=float("inf"), subdivisions_used=0):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.subdivisions_used = subdivisions_used
