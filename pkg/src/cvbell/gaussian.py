"""Twin-beam covariance matrices, lossy thermal evolution and Gaussian-sum Wigner functions.

Conventions used throughout the package: ``alpha = x1 + i y1``, ``beta = x2 + i y2``,
vacuum quadrature variance 1/4, and Wigner functions normalized so that the
integral over ``d^2alpha d^2beta`` equals one.

Gaussian-sum coefficients are held in extended precision (``REAL``): the
photon-subtracted states are differences of nearly equal Gaussians whose
weights scale like ``1/p11``, and double precision leaves only about
``1e-16/p11`` of accuracy in their sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError

REAL = np.longdouble
PI = REAL(math.pi)
# pointwise sums fall back to double precision when terms cancel by less than this factor
CANCELLATION_LIMIT = 1e3


@dataclass(frozen=True)
class TwbParams:
    r: float

    def __post_init__(self):
        if not (self.r >= 0 and math.isfinite(self.r)):
            raise DomainError(f"squeezing parameter must be finite and >= 0, got {self.r}")

    @property
    def lam(self) -> float:
        return math.tanh(self.r)

    @property
    def a0(self) -> float:
        return math.cosh(2 * self.r)

    @property
    def b0(self) -> float:
        return math.sinh(2 * self.r)


@dataclass(frozen=True)
class ChannelParams:
    """Lossy thermal channel acting on both modes.

    ``gt1``/``gt2`` are the damping exposures (rate times time), ``n1``/``n2`` the
    mean thermal photon numbers of the two environments.
    """

    gt1: float = 0.0
    gt2: float = 0.0
    n1: float = 0.0
    n2: float = 0.0

    def __post_init__(self):
        for name in ("gt1", "gt2", "n1", "n2"):
            v = getattr(self, name)
            if not v >= 0:  # also rejects nan
                raise DomainError(f"channel parameter {name} must be >= 0, got {v}")

    @classmethod
    def symmetric(cls, gamma_t: float = 0.0, n_th: float = 0.0) -> "ChannelParams":
        return cls(gamma_t, gamma_t, n_th, n_th)

    @property
    def is_symmetric(self) -> bool:
        return self.gt1 == self.gt2 and self.n1 == self.n2

    def sigma_inf(self) -> np.ndarray:
        return np.diag([1 + 2 * self.n1] * 2 + [1 + 2 * self.n2] * 2) / 4.0


@dataclass(frozen=True)
class TwoModeCovariance:
    """Covariance matrix with blocks ``(a1/4) 1``, ``(a2/4) 1`` and ``(b/4) sigma_3``.

    ``gap`` caches ``a1*a2 - b**2``; it is propagated in closed form by
    :func:`evolve_cov` because evaluating the difference directly loses all
    precision at large squeezing (``a1 a2`` and ``b**2`` both grow like ``e^{4r}``).
    """

    a1: float
    a2: float
    b: float
    gap: float | None = None

    def __post_init__(self):
        if self.gap is None:
            object.__setattr__(self, "gap", self.a1 * self.a2 - self.b * self.b)
        if not (self.a1 > 0 and self.a2 > 0 and self.gap > 0):
            raise DomainError(
                f"covariance is not positive definite (a1={self.a1}, a2={self.a2}, b={self.b})"
            )

    @property
    def matrix(self) -> np.ndarray:
        a1, a2, b = self.a1, self.a2, self.b
        return 0.25 * np.array(
            [
                [a1, 0.0, b, 0.0],
                [0.0, a1, 0.0, -b],
                [b, 0.0, a2, 0.0],
                [0.0, -b, 0.0, a2],
            ]
        )

    @property
    def sqrt_det(self) -> float:
        return self.gap / 16.0

    @property
    def det(self) -> float:
        return self.sqrt_det**2

    @classmethod
    def from_matrix(cls, m: np.ndarray, atol: float = 1e-12) -> "TwoModeCovariance":
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4):
            raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
        a1, a2, b = 4 * m[0, 0], 4 * m[2, 2], 4 * m[0, 2]
        cov = cls(a1, a2, b)
        if not np.allclose(cov.matrix, m, rtol=0, atol=atol * max(1.0, np.abs(m).max())):
            raise DomainError("matrix does not have the two-mode block form (A 1, B sigma_3)")
        return cov


def make_twb_cov(params: TwbParams | float) -> TwoModeCovariance:
    if not isinstance(params, TwbParams):
        params = TwbParams(float(params))
    return TwoModeCovariance(params.a0, params.a0, params.b0, gap=1.0)


def evolve_cov(sigma0: TwoModeCovariance, ch: ChannelParams) -> TwoModeCovariance:
    """Closed-form solution of the lossy thermal channel.

    ``sigma_t = G^{1/2} sigma_0 G^{1/2} + (1 - G) sigma_inf`` with
    ``G = diag(e^{-gt1}, e^{-gt1}, e^{-gt2}, e^{-gt2})``.
    """
    e1, e2 = math.exp(-ch.gt1), math.exp(-ch.gt2)
    # 1 - e^{-x} via expm1 keeps tiny exposures exact
    d1, d2 = -math.expm1(-ch.gt1), -math.expm1(-ch.gt2)
    t1, t2 = 1 + 2 * ch.n1, 1 + 2 * ch.n2
    a1 = sigma0.a1 * e1 + d1 * t1
    a2 = sigma0.a2 * e2 + d2 * t2
    b = sigma0.b * math.exp(-(ch.gt1 + ch.gt2) / 2)
    gap = (
        e1 * e2 * sigma0.gap
        + e1 * d2 * sigma0.a1 * t2
        + e2 * d1 * sigma0.a2 * t1
        + d1 * d2 * t1 * t2
    )
    return TwoModeCovariance(a1, a2, b, gap=gap)


class GaussianTerm(NamedTuple):
    """``weight * exp(-p|alpha|^2 - q|beta|^2 + s(alpha beta + alpha* beta*))``."""

    weight: REAL
    p: REAL
    q: REAL
    s: REAL

    @property
    def disc(self) -> REAL:
        return self.p * self.q - self.s * self.s

    @property
    def mass(self) -> REAL:
        """Integral of the term over phase space."""
        return self.weight * PI**2 / self.disc


@dataclass(frozen=True)
class GaussianSumWigner:
    terms: tuple[GaussianTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(GaussianTerm(*map(REAL, t)) for t in self.terms))
        if not self.terms:
            raise DomainError("a Gaussian-sum Wigner function needs at least one term")
        for k, t in enumerate(self.terms):
            if not (t.p > 0 and t.q > 0 and t.disc > 0):
                raise DomainError(f"term {k} is not integrable: p={t.p}, q={t.q}, s={t.s}")
        m = self.masses
        ratio = np.sum(np.abs(m)) / abs(np.sum(m)) if np.sum(m) != 0 else np.inf
        dtype = REAL if ratio > CANCELLATION_LIMIT else np.float64
        object.__setattr__(self, "_coef", np.array(self.terms, dtype=dtype))

    def __len__(self):
        return len(self.terms)

    def __call__(self, alpha, beta):
        alpha = np.asarray(alpha, dtype=complex)
        beta = np.asarray(beta, dtype=complex)
        a2 = alpha.real**2 + alpha.imag**2
        b2 = beta.real**2 + beta.imag**2
        cross = 2 * (alpha * beta).real
        out = self._sum(a2, b2, cross)
        return out if out.ndim else float(out)

    def density(self, X: np.ndarray) -> np.ndarray:
        """Evaluate on real phase-space points ``X[..., (x1, y1, x2, y2)]``."""
        X = np.asarray(X, dtype=float)
        x1, y1, x2, y2 = X[..., 0], X[..., 1], X[..., 2], X[..., 3]
        a2 = x1 * x1 + y1 * y1
        b2 = x2 * x2 + y2 * y2
        cross = 2 * (x1 * x2 - y1 * y2)
        return self._sum(a2, b2, cross)

    def _sum(self, a2: np.ndarray, b2: np.ndarray, cross: np.ndarray) -> np.ndarray:
        out = np.zeros(np.shape(a2 + b2 + cross), dtype=self._coef.dtype)
        for w, p, q, s in self._coef:
            out += w * np.exp(-p * a2 - q * b2 + s * cross)
        return out.astype(float)

    def integral(self) -> float:
        return float(np.sum(self.masses))

    @property
    def masses(self) -> np.ndarray:
        return np.array([t.mass for t in self.terms], dtype=REAL)

    @classmethod
    def from_terms(cls, terms: Sequence[Sequence[float]]) -> "GaussianSumWigner":
        return cls(tuple(GaussianTerm(*t) for t in terms))


def wigner_of_cov(sigma: TwoModeCovariance) -> GaussianSumWigner:
    """Single-term Wigner function of a centered Gaussian state.

    For the block form, ``-X^T sigma^{-1} X / 2`` equals
    ``-(2/gap) [a2 |alpha|^2 + a1 |beta|^2 - b (alpha beta + c.c.)]``.
    """
    g = sigma.gap
    weight = 1.0 / (4 * math.pi**2 * sigma.sqrt_det)
    return GaussianSumWigner((GaussianTerm(weight, 2 * sigma.a2 / g, 2 * sigma.a1 / g, 2 * sigma.b / g),))


def twb_wigner(r: float, ch: ChannelParams | None = None) -> GaussianSumWigner:
    """Wigner function of a twin beam, optionally after the lossy channel."""
    cov = make_twb_cov(r)
    if ch is not None:
        cov = evolve_cov(cov, ch)
    return wigner_of_cov(cov)


@dataclass(frozen=True)
class EffectiveDecomposition:
    """``sigma_t`` written as two-mode squeezing of a product of thermal states.

    ``xi_arg`` echoes the phase quoted for the squeezing parameter; in the
    quadrature convention of this package the reconstruction uses a real,
    positive ``xi`` (the sign structure ``+x1 x2 - y1 y2`` of ``sigma_3``).
    """

    m1: float
    m2: float
    xi_mod: float
    xi_arg: float = math.pi / 2

    def covariance(self) -> TwoModeCovariance:
        n1, n2 = 1 + 2 * self.m1, 1 + 2 * self.m2
        c2 = math.cosh(self.xi_mod) ** 2
        s2 = math.sinh(self.xi_mod) ** 2
        return TwoModeCovariance(
            n1 * c2 + n2 * s2,
            n2 * c2 + n1 * s2,
            (n1 + n2) * math.sinh(2 * self.xi_mod) / 2,
            gap=n1 * n2,
        )

    def covariance_symplectic(self) -> np.ndarray:
        """Same reconstruction as a matrix product ``S mu S^T`` (used as a cross-check)."""
        ch, sh = math.cosh(self.xi_mod), math.sinh(self.xi_mod)
        s3 = np.diag([1.0, -1.0])
        S = np.block([[ch * np.eye(2), sh * s3], [sh * s3, ch * np.eye(2)]])
        mu = np.diag([1 + 2 * self.m1] * 2 + [1 + 2 * self.m2] * 2) / 4
        return S @ mu @ S.T


def effective_decomposition(sigma_t: TwoModeCovariance, atol: float = 1e-12) -> EffectiveDecomposition:
    a_plus = sigma_t.a1 + sigma_t.a2
    a_minus = sigma_t.a1 - sigma_t.a2
    # a_plus^2 - 4 b^2 = (a1 - a2)^2 + 4 gap, written without cancellation
    disc = a_minus * a_minus + 4 * sigma_t.gap
    if disc <= 0:
        raise DomainError(f"non-physical covariance: discriminant {disc} <= 0")
    root = math.sqrt(disc)
    m1 = (root - (2 - a_minus)) / 4
    m2 = (root - (2 + a_minus)) / 4
    if min(m1, m2) < -atol:
        raise DomainError(f"non-physical covariance: thermal occupations ({m1}, {m2}) < 0")
    # sinh^2|xi| = a_plus / (2 root) - 1/2, with a_plus - root = 4 b^2 / (a_plus + root)
    sh2 = 2 * sigma_t.b**2 / (root * (a_plus + root))
    xi = math.asinh(math.sqrt(sh2))
    return EffectiveDecomposition(max(m1, 0.0), max(m2, 0.0), xi)
