"""Exception hierarchy shared by the numerics, the CLI and the HTTP layer."""


class RenyiError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RenyiError, ValueError):
    """Input outside the domain an operation is defined on."""


class CriticalPointError(DomainError):
    """Input lies on a gapless line (h = 2 or gamma = 0) where the closed forms degenerate."""


class GuardError(DomainError):
    """An asymptotic estimate was requested outside its validity guard."""


class SingularityError(DomainError):
    """The alpha-inversion relation was evaluated at its pole alpha * tau0**2 = 1."""


class ConvergenceError(RenyiError, ArithmeticError):
    """A series would need more terms than the configured hard limit."""
