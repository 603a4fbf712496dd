"""Exception hierarchy shared by the library and the CLI."""


class DomainError(ValueError):
    """An input lies outside the physical or mathematical domain of an operation."""


class NoClickError(DomainError):
    """Conditioning on a double click whose probability is numerically zero."""


class ConfigError(ValueError):
    """Invalid sweep configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class QuadratureError(RuntimeError):
    """Quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (best estimate {estimate!r}, error {error:.3g})")
        self.estimate = estimate
        self.error = error


class FockConvergenceError(RuntimeError):
    """A Fock-truncated expectation value changed too much when the cutoff grew."""

    def __init__(self, cutoff: int, change: float):
        super().__init__(
            f"Fock expectation not converged at cutoff {cutoff} "
            f"(change {change:.3g} on cutoff+10); retry with a larger cutoff"
        )
        self.cutoff = cutoff
        self.change = change


class OutsideStudiedRegimeWarning(UserWarning):
    """Parameters are valid but outside the regime the model was studied in."""
