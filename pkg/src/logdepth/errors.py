"""Exception hierarchy shared by the package."""

from __future__ import annotations


class LogDepthError(Exception):
    """Base class for every error raised by logdepth."""


class ConfigurationError(LogDepthError, ValueError):
    """A size or parameter is outside its supported range."""


class ParseError(LogDepthError, ValueError):
    """A circuit-pair document does not conform to the schema.

    ``path`` is the field path (``deep_branches[1][2].angle``) or a
    ``line N, column M`` location for syntax errors.
    """

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ValidationError(LogDepthError, ValueError):
    """A structurally valid circuit pair breaks one of its invariants."""

    def __init__(self, invariant: str, message: str) -> None:
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}")


class InfeasibleMatchError(LogDepthError, RuntimeError):
    """No steering angle in [0, pi] reaches the deep halting probability."""

    def __init__(self, target: float, achievable: tuple[float, float]) -> None:
        self.target = target
        self.achievable = achievable
        lo, hi = achievable
        super().__init__(
            f"target halting probability {target:.12g} outside achievable range "
            f"[{lo:.12g}, {hi:.12g}]"
        )


class NumericalDegeneracyError(LogDepthError, ArithmeticError):
    """A matrix that must be positive semidefinite is not, beyond round-off."""
