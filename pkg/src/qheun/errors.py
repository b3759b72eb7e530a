"""Typed exceptions shared across the package.

Every numerical routine reports domain violations and convergence
failures through these classes so that callers (and the CLI) can react
per point instead of aborting a whole run.
"""


class QHeunError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QHeunError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(QHeunError):
    """The requested value sits on a pole of the underlying function."""


class ConvergenceError(QHeunError):
    """A series or product failed to converge under the active controls."""


class DegenerateRecurrence(QHeunError):
    """A leading recurrence coefficient vanishes; coefficients are not determined."""


class PreconditionError(QHeunError):
    """A structural precondition (integer relation, inequality) is violated."""


class NotARoot(QHeunError):
    """The supplied eigenvalue is not a root of the accessory polynomial."""


class NoLimit(QHeunError):
    """A numerically estimated limit neither settled nor decayed to zero."""


class NoConvergence(QHeunError):
    """An iterative solver exhausted its budget."""


class ConvergenceHypothesisWarning(UserWarning):
    """Evaluation proceeds, but a sufficient-condition inequality fails."""
