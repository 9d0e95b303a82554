"""Exception hierarchy shared by all modules."""


class JacobiFlowError(Exception):
    """Base class for library errors."""


class EvaluationError(JacobiFlowError, ArithmeticError):
    """Arithmetic failed on a tangent scalar (division by zero, domain of sqrt, ...).

    ``level`` is the nesting depth of the operand that failed (0 for plain floats).
    """

    def __init__(self, message, level=0):
        super().__init__(f"{message} (at nesting level {level})")
        self.level = level


class DepthMismatch(JacobiFlowError, TypeError):
    """Two tangent scalars of different nesting depth were combined."""


class BaseMismatch(JacobiFlowError, ValueError):
    """Bundle operation applied to elements over different base points."""


class NotVertical(JacobiFlowError, ValueError):
    """Vertical projection applied to a non-vertical element of TTM."""


class DomainError(JacobiFlowError, ValueError):
    """A point lies outside the chart domain of a model."""


class LeftDomain(DomainError):
    """An integration step left the chart domain."""

    def __init__(self, t, x):
        self.t = float(t)
        self.x = [float(c) for c in x]
        super().__init__(f"trajectory left the chart domain at t={self.t:.12g}, x={self.x}")


class StepRejected(JacobiFlowError, FloatingPointError):
    """An integration step produced non-finite values."""

    def __init__(self, t):
        self.t = float(t)
        super().__init__(f"non-finite state at t={self.t:.12g}")


class MetricError(JacobiFlowError, ValueError):
    """A metric is not symmetric positive definite where it was sampled."""


class ModelSpecError(JacobiFlowError, ValueError):
    """Invalid model specification."""
