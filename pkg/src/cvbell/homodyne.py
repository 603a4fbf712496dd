"""Homodyne Bell test with sign binning of the measured quadratures.

For each Gaussian term the joint distribution of ``x_theta`` (mode a) and
``x_phi`` (mode b) is a centered bivariate Gaussian, so the sign correlator
follows from the orthant identity ``E = (2/pi) arcsin(rho)`` weighted by the
term's signed mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import BellResult, chsh
from .errors import DomainError
from .gaussian import PI, REAL, GaussianSumWigner


@dataclass(frozen=True)
class HdSettings:
    theta1: float = 0.0
    theta2: float = math.pi / 2
    phi1: float = -math.pi / 4
    phi2: float = math.pi / 4
    eta_h: float = 1.0

    def __post_init__(self):
        if not 0 < self.eta_h <= 1:
            raise DomainError(f"homodyne efficiency must lie in (0, 1], got {self.eta_h}")


def joint_quadrature_gaussians(state: GaussianSumWigner, theta: float, phi: float) -> list[tuple[float, np.ndarray]]:
    """Per-term ``(mass, covariance)`` of the pair ``(x_theta, x_phi)``.

    A term ``exp(-p|a|^2 - q|b|^2 + s(ab + c.c.))`` has quadrature covariance
    ``[[q, s sigma_3], [s sigma_3, p]] / (2 (pq - s^2))``; the rotations pick
    ``cos(theta + phi)`` out of the ``sigma_3`` block.
    """
    out = []
    c = math.cos(theta + phi)
    for t in state.terms:
        d = t.disc
        if not d > 0:
            raise DomainError("non-integrable Gaussian term")
        cov = np.array([[t.q, t.s * c], [t.s * c, t.p]], dtype=REAL) / (2 * d)
        out.append((t.mass, cov))
    return out


def sign_correlator(state: GaussianSumWigner, theta: float, phi: float, eta_h: float = 1.0) -> float:
    if not 0 < eta_h <= 1:
        raise DomainError(f"homodyne efficiency must lie in (0, 1], got {eta_h}")
    noise = REAL(1 - eta_h) / (4 * REAL(eta_h))
    total = REAL(0)
    for mass, cov in joint_quadrature_gaussians(state, theta, phi):
        rho = cov[0, 1] / np.sqrt((cov[0, 0] + noise) * (cov[1, 1] + noise))
        total += mass * 2 / PI * np.arcsin(np.clip(rho, -1, 1))
    return float(total)


def bell_hd(state: GaussianSumWigner, settings: HdSettings | None = None) -> BellResult:
    s = settings or HdSettings()
    value = chsh(lambda th, ph: sign_correlator(state, th, ph, s.eta_h), s.theta1, s.theta2, s.phi1, s.phi2)
    return BellResult("hd", value, {"theta": (s.theta1, s.theta2), "phi": (s.phi1, s.phi2), "eta_h": s.eta_h})
