"""Inconclusive photon subtraction (IPS) on a twin-beam-like Gaussian state.

Each mode is mixed with the vacuum on a beam splitter of effective
transmissivity ``tau`` and the state is kept when both on/off detectors
click.  The result is a four-term Gaussian sum; the four terms come from
inclusion-exclusion over the two "no click" projectors (weights 1, -2, -2, 4).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoClickError, OutsideStudiedRegimeWarning
from .gaussian import PI, REAL, GaussianSumWigner, GaussianTerm

P11_MIN = 1e-12
STUDIED_TAU_MIN = 0.5

_C = np.array([1, -2, -2, 4], dtype=REAL)


def effective_transmissivity(T: float, eta: float) -> float:
    """``tau = 1 - eta (1 - T)``: beam splitter ``T`` followed by an APD of efficiency ``eta``."""
    for name, v in (("T", T), ("eta", eta)):
        if not 0 < v <= 1:
            raise DomainError(f"{name} must lie in (0, 1], got {v}")
    return 1.0 - eta * (1.0 - T)


@dataclass(frozen=True)
class IpsParams:
    transmissivity: float = 1.0
    apd_efficiency: float = 1.0

    def __post_init__(self):
        effective_transmissivity(self.transmissivity, self.apd_efficiency)

    @property
    def tau(self) -> float:
        return effective_transmissivity(self.transmissivity, self.apd_efficiency)

    @classmethod
    def from_tau(cls, tau: float) -> "IpsParams":
        """Ideal detector with beam-splitter transmissivity ``tau``."""
        return cls(transmissivity=tau, apd_efficiency=1.0)


@dataclass(frozen=True)
class IpsCoefficients:
    a: float
    b: float
    x: np.ndarray
    y: np.ndarray
    C: np.ndarray  # calligraphic C_k, normalization included
    N: np.ndarray
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    b_tilde: float
    tau: float

    @property
    def cross(self) -> np.ndarray:
        """Coefficient of ``(alpha beta + c.c.)`` in each term: ``2 B~ tau + h_k``."""
        return 2 * self.b_tilde * self.tau + self.h

    @property
    def disc(self) -> np.ndarray:
        """``(b - f_k)(b - g_k) - (2 B~ tau + h_k)^2`` for each term."""
        return (self.b - self.f) * (self.b - self.g) - self.cross**2

    @property
    def p11(self) -> REAL:
        return np.sum(self.C / self.disc)


def ips_coefficients(a_tilde: float, b_tilde: float, sqrt_det: float, tau: float) -> IpsCoefficients:
    """Coefficient table of the IPS map for an input ``exp{-2A~(|a|^2+|b|^2) + 2B~(ab + c.c.)}``.

    ``a_tilde``, ``b_tilde`` and ``sqrt_det`` are the reduced coefficients and
    ``sqrt(Det sigma)`` of the (possibly noise-evolved) twin beam; the noisy case
    is obtained by passing the evolved values, nothing else changes.
    All arithmetic is carried out in extended precision.
    """
    if not 0 < tau <= 1:
        raise DomainError(f"tau must lie in (0, 1], got {tau}")
    if not (a_tilde > 0 and sqrt_det > 0 and abs(b_tilde) < a_tilde):
        raise DomainError(f"input is not a valid twin-beam Gaussian (A~={a_tilde}, B~={b_tilde})")
    if tau < STUDIED_TAU_MIN:
        warnings.warn(f"tau={tau} is outside the studied regime tau >= {STUDIED_TAU_MIN}",
                      OutsideStudiedRegimeWarning, stacklevel=2)
    A, B, t = REAL(a_tilde), REAL(b_tilde), REAL(tau)
    u = 1 - t
    a = 2 * (A * u + t)
    b = 2 * (A * t + u)
    # (x_k, y_k) runs over {a, a+2}^2; +2 marks the vacuum projector on that arm
    x = np.array([a, a + 2, a, a + 2], dtype=REAL)
    y = np.array([a, a, a + 2, a + 2], dtype=REAL)
    den = x * y - 4 * B * B * u * u
    if np.any(den <= 0):
        k = int(np.argmin(den)) + 1
        raise DomainError(f"IPS coefficient denominator non-positive for k={k}")
    N = 4 * t * u / den
    oma = 1.0 - A
    f = N * (x * B * B + 4 * B * B * oma * u + y * oma * oma)
    g = N * (x * oma * oma + 4 * B * B * oma * u + y * B * B)
    h = N * ((x + y) * B * oma + 2 * B * (B * B + oma * oma) * u)
    C = _C / (REAL(sqrt_det) * den)
    coeffs = IpsCoefficients(a, b, x, y, C, N, f, g, h, B, t)
    P, Q, S = b - f, b - g, coeffs.cross
    for k in range(4):
        if not (P[k] > 0 and Q[k] > 0 and P[k] * Q[k] > S[k] ** 2):
            raise DomainError(f"IPS term k={k + 1} is not integrable")
    return coeffs


def twin_beam_form(state: GaussianSumWigner) -> tuple[float, float, float]:
    """``(A~, B~, sqrt(Det sigma))`` of a single-term, mode-symmetric twin-beam Wigner function."""
    if len(state) != 1:
        raise DomainError(f"IPS input must be a single Gaussian, got {len(state)} terms")
    (t,) = state.terms
    # equal-channel symmetry is required: both |alpha|^2 and |beta|^2 carry 2A~
    if not math.isclose(t.p, t.q, rel_tol=1e-12):
        raise DomainError("IPS requires identical channels on both modes (p != q)")
    sqrt_det = 1 / (4 * PI**2 * t.weight)
    return t.p / 2, t.s / 2, sqrt_det


def ips_state(state: GaussianSumWigner, ips: IpsParams | float) -> tuple[GaussianSumWigner, float]:
    """Apply IPS to a single-term twin-beam Wigner function.

    Returns the normalized four-term Wigner function and the double-click
    probability ``p11`` (as a float).  ``ips`` may be an :class:`IpsParams` or a bare ``tau``.
    """
    tau = ips.tau if isinstance(ips, IpsParams) else float(ips)
    coeffs = ips_coefficients(*twin_beam_form(state), tau)
    return ips_from_coefficients(coeffs)


def ips_from_coefficients(coeffs: IpsCoefficients) -> tuple[GaussianSumWigner, float]:
    p11 = coeffs.p11
    if not p11 > P11_MIN:
        raise NoClickError(f"double-click probability p11={float(p11):.3g} is below {P11_MIN:g}")
    P, Q, S = coeffs.b - coeffs.f, coeffs.b - coeffs.g, coeffs.cross
    terms = tuple(GaussianTerm(coeffs.C[k] / (PI**2 * p11), P[k], Q[k], S[k]) for k in range(4))
    return GaussianSumWigner(terms), float(p11)


def double_click_probability(state: GaussianSumWigner, ips: IpsParams | float) -> float:
    """``p11`` without the no-click guard (returns ~0 where conditioning is impossible)."""
    tau = ips.tau if isinstance(ips, IpsParams) else float(ips)
    return float(ips_coefficients(*twin_beam_form(state), tau).p11)
