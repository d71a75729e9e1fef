"""Exception hierarchy.

Errors that signal a numerical-domain problem (no solution, branch ambiguity,
degenerate inputs) derive from :class:`NumericalDomain`; the CLI maps those to
exit code 3. Input validation errors derive from ``ValueError``.
"""


class KickDynError(Exception):
    """Base class for all package errors."""


class InvalidMatrix(KickDynError, ValueError):
    pass


class NotSpecialCase(KickDynError, ValueError):
    pass


class InvalidDuration(KickDynError, ValueError):
    pass


class ConfigError(KickDynError, ValueError):
    """Scenario configuration problem; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalDomain(KickDynError, ArithmeticError):
    pass


class BranchAmbiguity(NumericalDomain):
    pass


class NoSolution(NumericalDomain):
    pass


class DivisionDegenerate(NumericalDomain):
    pass


class ConsistencyViolation(NumericalDomain):
    pass


class ProbeDegeneracy(NumericalDomain):
    pass


class FrozenDynamics(NumericalDomain):
    pass


class DegenerateImpulse(NumericalDomain):
    pass


class BudgetExceeded(NumericalDomain):
    pass
