"""IPS through the covariance formalism.

The twin beam and two vacuum ancillas are mixed on the beam splitters; each
"no click" projector onto the ancilla vacuum maps the Gaussian to another
Gaussian (Schur complement) times its vacuum probability.  Inclusion-exclusion
over the two detectors gives the conditioned Wigner function.
"""

from __future__ import annotations

import math

import numpy as np

from ..gaussian import TwoModeCovariance

_VAC = 0.25


def _beam_splitters(tau: float) -> np.ndarray:
    # ordering (x_a, y_a, x_b, y_b, x_c, y_c, x_d, y_d); a-c and b-d are mixed
    t, s = math.sqrt(tau), math.sqrt(1 - tau)
    U = np.eye(8)
    for sys, anc in ((0, 4), (2, 6)):
        for q in range(2):
            i, j = sys + q, anc + q
            U[i, i], U[i, j], U[j, i], U[j, j] = t, s, -s, t
    return U


def ips_branches(sigma: TwoModeCovariance, tau: float) -> list[tuple[float, float, np.ndarray]]:
    """``(sign, probability, conditional covariance)`` for the four inclusion-exclusion branches."""
    V = np.zeros((8, 8))
    V[:4, :4] = sigma.matrix
    V[4:, 4:] = _VAC * np.eye(4)
    U = _beam_splitters(tau)
    V = U @ V @ U.T
    ab = list(range(4))
    out = []
    for sign, proj in ((1, ()), (-1, (4, 5)), (-1, (6, 7)), (1, (4, 5, 6, 7))):
        if not proj:
            out.append((sign, 1.0, V[:4, :4]))
            continue
        pr = list(proj)
        Vc = V[np.ix_(pr, pr)] + _VAC * np.eye(len(pr))
        prob = 1.0 / (2 ** (len(pr) // 2) * math.sqrt(np.linalg.det(Vc)))
        cond = V[:4, :4] - V[np.ix_(ab, pr)] @ np.linalg.solve(Vc, V[np.ix_(pr, ab)])
        out.append((sign, prob, cond))
    return out


def ips_p11(sigma: TwoModeCovariance, tau: float) -> float:
    return math.fsum(sign * prob for sign, prob, _ in ips_branches(sigma, tau))


def ips_wigner(sigma: TwoModeCovariance, tau: float):
    """Return ``(W, p11)`` where ``W(alpha, beta)`` evaluates the conditioned Wigner function."""
    branches = ips_branches(sigma, tau)
    p11 = math.fsum(sign * prob for sign, prob, _ in branches)
    prepared = [(sign * prob, np.linalg.inv(c), math.sqrt(np.linalg.det(c))) for sign, prob, c in branches]

    def W(alpha, beta):
        alpha = np.asarray(alpha, dtype=complex)
        beta = np.asarray(beta, dtype=complex)
        X = np.stack(np.broadcast_arrays(alpha.real, alpha.imag, beta.real, beta.imag), axis=-1)
        total = 0.0
        for w, inv, sq in prepared:
            quad = np.einsum("...i,ij,...j->...", X, inv, X)
            total = total + w * np.exp(-quad / 2) / (4 * math.pi**2 * sq)
        return total / p11

    return W, p11
