"""Exception hierarchy shared by every module of the package."""


class VecPartError(Exception):
    """Base class for all package errors."""


class InstanceError(VecPartError, ValueError):
    """An instance description violates a structural invariant."""


class OracleDomainError(VecPartError, ValueError):
    """An objective oracle was queried outside its declared domain."""


class BudgetExceeded(VecPartError, RuntimeError):
    """A solver would exceed its configured work or memory budget."""


class TimeLimitExceeded(VecPartError, RuntimeError):
    """A solver ran past its wall-clock deadline."""


class SolverNotApplicable(VecPartError, ValueError):
    """The instance does not satisfy the hypotheses of the requested solver."""


class FormatError(VecPartError, ValueError):
    """An instance, solution or suite file could not be parsed."""
