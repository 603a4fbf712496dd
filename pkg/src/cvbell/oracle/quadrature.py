"""Phase-space quadrature over Gaussian-sum Wigner functions.

The integrand is evaluated pointwise through ``GaussianSumWigner.density``; no
closed-form integral of a Gaussian term is used, so results are independent of
the analytic paths they check.  The domain is a box in a whitened frame; the
box size is read off the terms' quadratic forms (numerical inverses), which
affects efficiency only.

Two engines:

* ``"gauss-legendre"`` (default): tensor Gauss-Legendre on the box, node count
  increased level by level until two successive estimates agree.  The reported
  error is that last difference.  Each axis is stretched as ``z = c sinh(t)``
  with ``c`` the narrowest term width, so that sums mixing very wide and very
  narrow terms (large squeezing) are resolved at every level.
* ``"cubature"``: :func:`scipy.integrate.cubature` (adaptive subdivision).  Much
  slower in four dimensions; kept for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import cubature

from ..errors import DomainError, QuadratureError
from ..gaussian import GaussianSumWigner

LEVELS = (16, 24, 32, 48, 64, 96, 128)

Weight = Union[None, str, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class QuadratureSpec:
    half_width: float = 8.0  # in standard deviations of the widest term
    rtol: float = 1e-7
    atol: float = 1e-10
    max_subdivisions: int = len(LEVELS)  # refinement levels (gauss-legendre) or regions / 1000 (cubature)
    method: str = "gauss-legendre"

    def __post_init__(self):
        if not self.rtol > 0:
            raise DomainError("tolerance must be > 0")
        if self.half_width < 5:
            raise DomainError("box half-width must be at least 5 standard deviations")
        if self.method not in ("gauss-legendre", "cubature"):
            raise DomainError(f"unknown quadrature method {self.method!r}")


@dataclass(frozen=True)
class QuadratureResult:
    estimate: float
    error: float
    evaluations: int


def _precision_matrix(t) -> np.ndarray:
    p, q, s = t.p, t.q, t.s
    return 2 * np.array(
        [[p, 0, -s, 0], [0, p, 0, s], [-s, 0, q, 0], [0, s, 0, q]], dtype=float
    )


def _rotation(theta: float, phi: float) -> np.ndarray:
    """Maps frame coordinates ``(u1, v1, u2, v2)`` to ``(x1, y1, x2, y2)``; ``u`` is ``x_theta``."""
    R = np.zeros((4, 4))
    for i, ang in ((0, theta), (2, phi)):
        c, s = math.cos(ang), math.sin(ang)
        R[i : i + 2, i : i + 2] = [[c, -s], [s, c]]
    return R


def _frame(state: GaussianSumWigner, R: np.ndarray, split: Sequence[int]):
    covs = [R.T @ np.linalg.inv(_precision_matrix(t)) @ R for t in state.terms]
    w = np.abs([float(t.weight) / math.sqrt(np.linalg.det(_precision_matrix(t))) for t in state.terms])
    ref = sum(wk * c for wk, c in zip(w, covs)) / w.sum()
    if not split:
        M = np.linalg.cholesky(ref)
    else:
        S = list(split)
        Rr = [i for i in range(4) if i not in S]
        D = np.sqrt(np.diag(ref)[S])
        K = ref[np.ix_(Rr, S)] @ np.linalg.inv(ref[np.ix_(S, S)])
        cond = ref[np.ix_(Rr, Rr)] - K @ ref[np.ix_(S, Rr)]
        M = np.zeros((4, 4))
        M[np.ix_(S, S)] = np.diag(D)
        M[np.ix_(Rr, S)] = K * D
        M[np.ix_(Rr, Rr)] = np.linalg.cholesky(cond)
    Minv = np.linalg.inv(M)
    eig = [np.linalg.eigvalsh(Minv @ c @ Minv.T) for c in covs]
    return M, math.sqrt(max(e.max() for e in eig)), math.sqrt(min(e.min() for e in eig))


def _resolve_weight(weight: Weight, split_axes: Sequence[int]):
    if weight is None:
        return None, tuple(split_axes)
    if isinstance(weight, str):
        if weight != "sign":
            raise DomainError(f"unknown weight pattern {weight!r}")
        return (lambda U: np.sign(U[..., 0] * U[..., 2])), tuple(split_axes) or (0, 2)
    return weight, tuple(split_axes)


def integrate(
    state: GaussianSumWigner,
    weight: Weight = None,
    spec: QuadratureSpec = QuadratureSpec(),
    *,
    angles: tuple[float, float] = (0.0, 0.0),
    split_axes: Sequence[int] = (),
) -> QuadratureResult:
    """Integrate ``weight(U) * W`` over phase space.

    ``U = (u1, v1, u2, v2)`` are the coordinates of the frame rotated by
    ``angles = (theta, phi)`` on modes a and b (``u1 = x_theta``, ``u2 = x_phi``).
    ``weight`` is ``None`` (normalization), ``"sign"`` for ``sign(u1 u2)``, or
    a vectorized callable.  Axes in ``split_axes`` are cut at zero so that
    weights discontinuous there are integrated piecewise-smoothly.
    """
    wfun, split = _resolve_weight(weight, split_axes)
    R = _rotation(*angles)
    M, widest, narrowest = _frame(state, R, split)
    RM = R @ M
    jac = abs(np.linalg.det(M))
    h = spec.half_width * widest

    def integrand(Z: np.ndarray) -> np.ndarray:
        U = Z @ M.T
        val = state.density(Z @ RM.T)
        if wfun is not None:
            val = val * wfun(U)
        return val * jac

    if spec.method == "cubature":
        return _cubature(integrand, _boxes(h, split), spec)
    c = min(1.0, narrowest)

    def stretched(T: np.ndarray) -> np.ndarray:
        return integrand(c * np.sinh(T)) * np.prod(c * np.cosh(T), axis=-1)

    return _gauss_legendre(stretched, _boxes(math.asinh(h / c), split), spec)


def _boxes(h: float, split: Sequence[int]) -> list[tuple[np.ndarray, np.ndarray]]:
    boxes = [(np.full(4, -h), np.full(4, h))]
    for ax in split:
        nxt = []
        for lo, hi in boxes:
            mid_hi, mid_lo = hi.copy(), lo.copy()
            mid_hi[ax] = 0.0
            mid_lo[ax] = 0.0
            nxt += [(lo, mid_hi), (mid_lo, hi)]
        boxes = nxt
    return boxes


def _tensor_gl(f, lo: np.ndarray, hi: np.ndarray, n: int) -> float:
    x, w = leggauss(n)
    half = (hi - lo) / 2
    nodes = [lo[d] + half[d] * (x + 1) for d in range(4)]
    wts = [half[d] * w for d in range(4)]
    g1, g2, g3 = np.meshgrid(nodes[1], nodes[2], nodes[3], indexing="ij")
    w123 = np.einsum("i,j,k->ijk", wts[1], wts[2], wts[3])
    rest = np.stack([g1, g2, g3], axis=-1)
    total = 0.0
    for i in range(n):
        Z = np.concatenate([np.full(rest.shape[:-1] + (1,), nodes[0][i]), rest], axis=-1)
        total += wts[0][i] * float(np.sum(w123 * f(Z)))
    return total


def _gauss_legendre(f, boxes, spec: QuadratureSpec) -> QuadratureResult:
    levels = LEVELS[: max(2, spec.max_subdivisions)]
    prev = None
    evals = 0
    for n in levels:
        est = math.fsum(_tensor_gl(f, lo, hi, n) for lo, hi in boxes)
        evals += len(boxes) * n**4
        if prev is not None:
            err = abs(est - prev)
            if err <= max(spec.atol, spec.rtol * abs(est)):
                return QuadratureResult(est, err, evals)
        prev = est
    raise QuadratureError("Gauss-Legendre refinement did not converge", est, err)


def _cubature(f, boxes, spec: QuadratureSpec) -> QuadratureResult:
    est = err = 0.0
    evals = 0
    for lo, hi in boxes:
        res = cubature(
            lambda Z: f(Z), lo, hi, rule="gk15",
            rtol=spec.rtol, atol=spec.atol / len(boxes),
            max_subdivisions=1000 * spec.max_subdivisions,
        )
        est += float(res.estimate)
        err += float(res.error)
        evals += int(res.subdivisions)
        if res.status != "converged":
            raise QuadratureError("adaptive cubature did not converge", est, err)
    return QuadratureResult(est, err, evals)
