"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, NumericsError
(and subclasses) -> 3, everything else is a verification failure -> 1.
"""


class DiracPTError(Exception):
    """Base class for package errors."""


class ConfigError(DiracPTError, ValueError):
    """Invalid run configuration (unknown case, bad parameter, unknown key)."""


class DomainError(DiracPTError, ValueError):
    """Coordinate outside the declared domain of a potential family."""


class PoleError(DiracPTError, ArithmeticError):
    """Evaluation requested at (or numerically on top of) a pole."""


class LevelRangeError(DiracPTError, ValueError):
    """Quantum number outside the family's admissible window."""


class SingularLevelError(LevelRangeError):
    """Level whose closed-form expression is singular (cotangent family n=0)."""


class UnsupportedCaseError(DiracPTError, ValueError):
    """Operation asked for a potential family it does not cover."""


class NumericsError(DiracPTError, RuntimeError):
    """Base class for failures of the numerical infrastructure."""


class BoundaryConditionError(NumericsError):
    """Boundary condition prerequisites violated (e.g. no forbidden region)."""


class ConvergenceError(NumericsError):
    """Iterative numerical procedure failed to converge."""


class BranchAnchorError(NumericsError):
    """Phase-continuous logarithm hit a zero of its base."""


class UndefinedResidualError(NumericsError):
    """Residual of an identically-zero field is undefined."""
