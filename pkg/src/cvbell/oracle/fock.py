"""Fock-basis oracle: truncated density matrices and the operators of the three tests.

The evolved twin beam is built as ``S2(xi) mu1 (x) mu2 S2(xi)^dag`` from its
effective decomposition (real ``xi`` in this package's quadrature convention).
IPS conditioning uses the beam-splitter Kraus operators directly, so nothing
here goes through the Gaussian-sum formulas it is meant to check.

Operators:

* parity, displaced: ``D(a) (-1)^n D(a)^dag = D(2a) (-1)^n``
* pseudospin: ``S_z = -(-1)^n``, ``S_x = sign(x)``
* homodyne sign: ``sign(x_theta) = e^{i theta n} sign(x) e^{-i theta n}``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from ..errors import DomainError, FockConvergenceError
from ..gaussian import ChannelParams, effective_decomposition, evolve_cov, make_twb_cov


@dataclass(frozen=True)
class FockSpec:
    cutoff: int = 40
    tol: float = 1e-6
    step: int = 10
    pad: int = 40  # extra levels used while building S2 before cropping

    def __post_init__(self):
        if self.cutoff < 2:
            raise DomainError("Fock cutoff must be >= 2")


@lru_cache(maxsize=8)
def sign_matrix(cutoff: int) -> np.ndarray:
    """``<m| sign(x) |n>`` for ``m, n <= cutoff``."""
    n = cutoff + 1
    xmax = math.sqrt(2 * n + 1) + 12
    panels = 8 * n
    x0, w0 = leggauss(12)
    edges = np.linspace(0.0, xmax, panels + 1)
    half = np.diff(edges) / 2
    x = (edges[:-1, None] + half[:, None] * (x0 + 1)).ravel()
    w = (half[:, None] * w0).ravel()
    psi = np.empty((n, x.size))
    psi[0] = math.pi**-0.25 * np.exp(-x * x / 2)
    if n > 1:
        psi[1] = math.sqrt(2) * x * psi[0]
    for k in range(1, n - 1):
        psi[k + 1] = math.sqrt(2 / (k + 1)) * x * psi[k] - math.sqrt(k / (k + 1)) * psi[k - 1]
    half_line = (psi * w) @ psi.T
    idx = np.arange(n)
    odd = (idx[:, None] + idx[None, :]) % 2 == 1
    return np.where(odd, 2 * half_line, 0.0)


def displaced_parity_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    """``<m| D(alpha) (-1)^n D(alpha)^dag |n>``."""
    g = 2 * complex(alpha)
    x = abs(g) ** 2
    n = cutoff + 1
    D = np.zeros((n, n), dtype=complex)
    for m in range(n):
        for k in range(n):
            lo, hi = min(m, k), max(m, k)
            lnorm = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1))
            lag = eval_genlaguerre(lo, hi - lo, x)
            amp = g ** (m - k) if m >= k else (-g.conjugate()) ** (k - m)
            D[m, k] = math.exp(lnorm - x / 2) * amp * lag
    parity = (-1.0) ** np.arange(n)
    return D * parity[None, :]


def _s2_block(xi: float, size: int, delta: int) -> np.ndarray:
    # basis |n + delta, n>, generator a^dag b^dag - a b
    c = np.sqrt((np.arange(size - 1) + delta + 1) * (np.arange(size - 1) + 1.0))
    G = np.diag(c, -1) - np.diag(c, 1)
    return expm(xi * G)


def _thermal(m: float, size: int) -> np.ndarray:
    k = np.arange(size)
    if m == 0:
        return (k == 0).astype(float)
    return np.exp(k * math.log(m / (1 + m)) - math.log1p(m))


def squeezed_thermal(m1: float, m2: float, xi: float, cutoff: int, pad: int = 40) -> np.ndarray:
    """Density tensor ``rho[m1, m2, n1, n2]`` truncated at ``cutoff``."""
    L = cutoff + pad + 1
    p1, p2 = _thermal(m1, L + cutoff + 1), _thermal(m2, L + cutoff + 1)
    n = cutoff + 1
    rho = np.zeros((n, n, n, n))
    for delta in range(-cutoff, cutoff + 1):
        d = abs(delta)
        U = _s2_block(xi, L, d)
        # populations of |n + d, n> (delta >= 0) or |n, n + d> (delta < 0)
        pops = p1[d : d + L] * p2[:L] if delta >= 0 else p1[:L] * p2[d : d + L]
        block = (U * pops) @ U.T
        m = n - d  # indices kept after cropping
        if m <= 0:
            continue
        row, col = np.arange(m)[:, None], np.arange(m)[None, :]
        if delta >= 0:
            rho[row + d, row, col + d, col] = block[:m, :m]
        else:
            rho[row, row + d, col, col + d] = block[:m, :m]
    return rho


def _kraus_amplitudes(t: float, cutoff: int, k: int) -> np.ndarray:
    """``sqrt(C(m+k, k) (1-t)^k t^m)`` for ``m = 0..cutoff-k``."""
    m = np.arange(cutoff + 1 - k)
    if t == 1.0:
        return (m * 0.0) if k else np.ones_like(m, dtype=float)
    log = gammaln(m + k + 1) - gammaln(m + 1) - gammaln(k + 1) + k * math.log1p(-t)
    log = log + (m * math.log(t) if t > 0 else np.where(m == 0, 0.0, -np.inf))
    return np.exp(0.5 * log)


def _apply_loss(rho: np.ndarray, t: float, axis: int, kmin: int = 0) -> np.ndarray:
    """Pure-loss channel (transmissivity ``t``) on one mode; ``kmin=1`` drops the no-photon-lost Kraus term."""
    cutoff = rho.shape[0] - 1
    r = np.moveaxis(rho, (axis, axis + 2), (0, 1))
    out = np.zeros_like(r)
    for k in range(kmin, cutoff + 1):
        e = _kraus_amplitudes(t, cutoff, k)
        m = e.size
        out[:m, :m] += e[:, None, None, None] * e[None, :, None, None] * r[k:, k:]
    return np.moveaxis(out, (0, 1), (axis, axis + 2))


class FockState:
    """Truncated two-mode state with the expectation values used by the oracle."""

    def __init__(self, rho: np.ndarray):
        self.rho = rho
        self.cutoff = rho.shape[0] - 1

    @classmethod
    def twin_beam(cls, r: float, gamma_t: float = 0.0, n1: float = 0.0, n2: float | None = None,
                  cutoff: int = 40, pad: int = 40) -> "FockState":
        n2 = n1 if n2 is None else n2
        cov = evolve_cov(make_twb_cov(r), ChannelParams(gamma_t, gamma_t, n1, n2))
        dec = effective_decomposition(cov)
        return cls(squeezed_thermal(dec.m1, dec.m2, dec.xi_mod, cutoff, pad))

    @property
    def trace(self) -> float:
        return float(np.einsum("abab->", self.rho))

    def photon_distribution(self) -> np.ndarray:
        return np.einsum("abab->ab", self.rho)

    def subtract(self, tau: float) -> tuple["FockState", float]:
        """Condition on a click at both reflected arms; returns the normalized state and ``p11``."""
        rho = _apply_loss(_apply_loss(self.rho, tau, 0, kmin=1), tau, 1, kmin=1)
        p11 = float(np.einsum("abab->", rho))
        if not p11 > 0:
            raise DomainError("double-click probability vanishes in the truncated space")
        return FockState(rho / p11), p11

    def p11(self, tau: float) -> float:
        n = np.arange(self.cutoff + 1)
        no_click = tau**n
        return float(np.einsum("ab,a,b->", self.photon_distribution(), 1 - no_click, 1 - no_click))

    def attenuate(self, eta: float) -> "FockState":
        return FockState(_apply_loss(_apply_loss(self.rho, eta, 0), eta, 1))

    def expect(self, A: np.ndarray, B: np.ndarray) -> float:
        """``Tr[rho (A (x) B)]``."""
        return float(np.real(np.einsum("abcd,ca,db->", self.rho, A, B, optimize=True)))

    def parity(self, alpha: complex = 0.0, beta: complex = 0.0) -> float:
        return self.expect(displaced_parity_matrix(alpha, self.cutoff), displaced_parity_matrix(beta, self.cutoff))

    def zz(self) -> float:
        P = np.diag((-1.0) ** np.arange(self.cutoff + 1))
        return self.expect(-P, -P)

    def sign(self, theta: float = 0.0, phi: float = 0.0) -> float:
        S = sign_matrix(self.cutoff)
        k = np.arange(self.cutoff + 1)
        rot = lambda a: S * np.exp(1j * a * (k[:, None] - k[None, :]))  # noqa: E731
        return self.expect(rot(theta), rot(phi))

    def xx(self) -> float:
        return self.sign(0.0, 0.0)


OPERATORS = ("parity", "zz", "xx", "sign", "p11")


def fock_expectation(
    r: float,
    gamma_t: float = 0.0,
    n1: float = 0.0,
    n2: float | None = None,
    operator: str = "zz",
    spec: FockSpec = FockSpec(),
    *,
    tau: float | None = None,
    alpha: complex = 0.0,
    beta: complex = 0.0,
    theta: float = 0.0,
    phi: float = 0.0,
    eta_h: float = 1.0,
) -> float:
    """Convergence-checked expectation value on the (optionally IPS-conditioned) twin beam.

    ``operator`` is one of ``parity`` (displaced, at ``alpha, beta``), ``zz``,
    ``xx``, ``sign`` (homodyne at ``theta, phi`` after efficiency ``eta_h``) or
    ``p11`` (requires ``tau``).  With ``tau`` set, the other operators act on the
    IPS state.
    """
    if operator not in OPERATORS:
        raise DomainError(f"unknown operator {operator!r}; expected one of {OPERATORS}")
    if operator == "p11" and tau is None:
        raise DomainError("operator 'p11' needs tau")

    def evaluate(state: FockState) -> float:
        if operator == "p11":
            return state.p11(tau)
        if tau is not None:
            state = state.subtract(tau)[0]
        if operator == "parity":
            return state.parity(alpha, beta)
        if operator == "zz":
            return state.zz()
        if operator == "xx":
            return state.xx()
        if eta_h < 1:
            state = state.attenuate(eta_h)
        return state.sign(theta, phi)

    return converged(lambda c: evaluate(FockState.twin_beam(r, gamma_t, n1, n2, c, spec.pad)), spec)


def converged(f: Callable[[int], float], spec: FockSpec = FockSpec()) -> float:
    """Evaluate ``f(cutoff)`` and confirm it moves by less than ``spec.tol`` at ``cutoff + step``."""
    lo = f(spec.cutoff)
    hi = f(spec.cutoff + spec.step)
    if abs(hi - lo) >= spec.tol:
        raise FockConvergenceError(spec.cutoff, abs(hi - lo))
    return hi
