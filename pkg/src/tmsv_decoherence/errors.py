"""Exception types raised by the library.

Anything deriving from :class:`NumericalError` marks a numerical failure
(truncation too small, a non-PSD matrix, a solver that did not converge).
The command line maps these to exit status 2.
"""


class NumericalError(Exception):
    """Base class for numerical failures."""


class TruncationError(NumericalError):
    """Fock-space truncation loses more probability mass than allowed."""

    def __init__(self, message, suggested_n=None):
        super().__init__(message)
        self.suggested_n = suggested_n


class PSDViolationError(NumericalError):
    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class ConvergenceError(NumericalError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IntegrationError(NumericalError):
    def __init__(self, message, drift=None):
        super().__init__(message)
        self.drift = drift


class NegativeProbabilityError(NumericalError, ValueError):
    def __init__(self, index, value):
        super().__init__(f"probability at index {index} is negative: {value!r}")
        self.index = index
        self.value = value

    def __reduce__(self):
        return type(self), (self.index, self.value)


class DegenerateStateError(ValueError):
    """The squeezing is so small that the input is the (separable) vacuum."""


class NoFiniteBorderError(ValueError):
    """A zero-temperature bath has no finite separability border."""
