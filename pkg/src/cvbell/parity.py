"""Displaced-parity (phase-space) Bell test."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bell import BellResult
from .errors import DomainError
from .gaussian import GaussianSumWigner

DEFAULT_J = 1.6e-3


@dataclass(frozen=True)
class DpGeometry:
    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex

    @classmethod
    def from_j(cls, J: float = DEFAULT_J) -> "DpGeometry":
        """One-parameter family ``alpha = (sqrt J, -3 sqrt J)``, ``beta = (-sqrt J, 3 sqrt J)``."""
        if not J > 0:
            raise DomainError(f"J must be > 0, got {J}")
        s = math.sqrt(J)
        return cls(s, -3 * s, -s, 3 * s)


def parity_correlator(state: GaussianSumWigner, alpha: complex, beta: complex) -> float:
    """Expectation of the displaced two-mode parity, ``(pi^2 / 4) W(alpha, beta)``."""
    return math.pi**2 / 4 * state(alpha, beta)


def bell_dp(state: GaussianSumWigner, geom: DpGeometry | None = None) -> BellResult:
    geom = geom or DpGeometry.from_j()
    P = lambda a, b: parity_correlator(state, a, b)  # noqa: E731
    value = (
        P(geom.alpha1, geom.beta1)
        + P(geom.alpha2, geom.beta1)
        + P(geom.alpha1, geom.beta2)
        - P(geom.alpha2, geom.beta2)
    )
    return BellResult("dp", value, {"alpha": (geom.alpha1, geom.alpha2), "beta": (geom.beta1, geom.beta2)})
