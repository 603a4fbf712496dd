"""Pseudospin CHSH test.

The pseudospin components are represented by the single-mode Wigner kernels

    W_x(alpha) = sign(Re alpha) / pi
    W_z(alpha) = -delta^2(alpha) / 2
    W_y(alpha) = -delta(Re alpha) P(1 / Im alpha) / (2 pi)

i.e. ``S_x = sign(x)`` and ``S_z = -(-1)^n``.  Azimuths are fixed to zero, so
``a.S = cos(theta) S_z + sin(theta) S_x`` and no ``S_y`` correlator is needed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .bell import BellResult, chsh
from .errors import DomainError
from .gaussian import PI, GaussianSumWigner
from .ips import IpsCoefficients


class PseudospinKernel(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"

    @property
    def distributional(self) -> bool:
        return self is not PseudospinKernel.X

    def wigner(self, alpha):
        """Pointwise kernel value; only ``W_x`` is an ordinary function."""
        if self.distributional:
            raise DomainError(f"W_{self.value} is a distribution and has no pointwise value")
        return np.sign(np.real(alpha)) / math.pi


@dataclass(frozen=True)
class PsAngles:
    a1: float = 0.0
    a2: float = math.pi / 2
    b1: float = math.pi / 4
    b2: float = -math.pi / 4


def e_twb(r: float, theta_a: float, theta_b: float) -> float:
    if r < 0:
        raise DomainError(f"squeezing parameter must be >= 0, got {r}")
    return (
        math.cos(theta_a) * math.cos(theta_b)
        + 2 / math.pi * math.sin(theta_a) * math.sin(theta_b) * math.atan(math.sinh(2 * r))
    )


def e_ips(coeffs: IpsCoefficients, p11: float, theta_a: float, theta_b: float) -> float:
    disc = coeffs.disc
    if np.any(disc <= 0):
        raise DomainError(f"A_k must be positive, got {disc}")
    cc = math.cos(theta_a) * math.cos(theta_b)
    ss = math.sin(theta_a) * math.sin(theta_b)
    terms = (coeffs.C / p11) * (
        cc / 4 + 2 * ss / (PI * disc) * np.arctan(coeffs.cross / np.sqrt(disc))
    )
    return float(np.sum(terms))


def spin_moments(state: GaussianSumWigner) -> tuple[float, float]:
    """``(<S_z S_z>, <S_x S_x>)`` of a centered Gaussian-sum state.

    ``<S_z S_z>`` is the total parity ``(pi^2/4) W(0, 0)``;
    ``<S_x S_x>`` is the sign correlation of the two ``x`` quadratures.
    """
    zz = PI**2 / 4 * np.sum([t.weight for t in state.terms])
    xx = np.sum([t.mass * 2 / PI * np.arctan(t.s / np.sqrt(t.disc)) for t in state.terms])
    return float(zz), float(xx)


def correlator_generic(state: GaussianSumWigner, theta_a: float, theta_b: float) -> float:
    # <S_z S_x> vanishes: W(0, beta) is even in beta for centered states
    zz, xx = spin_moments(state)
    return math.cos(theta_a) * math.cos(theta_b) * zz + math.sin(theta_a) * math.sin(theta_b) * xx


CorrelatorSource = Union[GaussianSumWigner, Callable[[float, float], float]]


def bell_ps(source: CorrelatorSource, angles: PsAngles | None = None) -> BellResult:
    """CHSH combination of pseudospin correlators.

    ``source`` is either a state (handled by :func:`correlator_generic`) or any
    callable ``E(theta_a, theta_b)``, e.g. a partial of :func:`e_twb`.
    """
    ang = angles or PsAngles()
    if isinstance(source, GaussianSumWigner):
        zz, xx = spin_moments(source)
        corr = lambda ta, tb: math.cos(ta) * math.cos(tb) * zz + math.sin(ta) * math.sin(tb) * xx  # noqa: E731
    else:
        corr = source
    value = chsh(corr, ang.a1, ang.a2, ang.b1, ang.b2)
    return BellResult("ps", value, {"theta_a": (ang.a1, ang.a2), "theta_b": (ang.b1, ang.b2)})
