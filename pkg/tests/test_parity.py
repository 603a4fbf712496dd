import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvbell.bell import TSIRELSON_BOUND, BellResult
from cvbell.errors import DomainError
from cvbell.gaussian import ChannelParams, twb_wigner
from cvbell.ips import ips_state
from cvbell.oracle.fock import fock_expectation
from cvbell.parity import DEFAULT_J, DpGeometry, bell_dp, parity_correlator

points = st.complex_numbers(max_magnitude=1.5)


def test_geometry_from_j():
    g = DpGeometry.from_j(0.01)
    assert (g.alpha1, g.alpha2, g.beta1, g.beta2) == pytest.approx((0.1, -0.3, -0.1, 0.3))
    with pytest.raises(DomainError):
        DpGeometry.from_j(0.0)


@given(st.floats(0, 3))
def test_twb_parity_at_origin(r):
    assert parity_correlator(twb_wigner(r), 0, 0) == pytest.approx(1, rel=1e-12)


@given(points, points)
def test_vacuum_parity(a, b):
    expect = math.exp(-2 * abs(a) ** 2 - 2 * abs(b) ** 2)
    assert parity_correlator(twb_wigner(0.0), a, b) == pytest.approx(expect, rel=1e-12, abs=1e-300)


@settings(deadline=None, max_examples=30)
@given(st.floats(0, 2), st.floats(0, 0.1), st.floats(0, 0.3), points, points)
def test_parity_bounded(r, gamma_t, n_th, a, b):
    W = twb_wigner(r, ChannelParams.symmetric(gamma_t, n_th))
    assert abs(parity_correlator(W, a, b)) <= 1 + 1e-12


def test_ips_parity_reference_point():
    # Fock oracle: D(2 alpha)(-1)^n on the Kraus-conditioned twin beam
    s = math.sqrt(DEFAULT_J)
    W, _ = ips_state(twb_wigner(0.4), 0.9999)
    value = parity_correlator(W, s, -s)
    assert value == pytest.approx(0.9728969762540934, abs=1e-10)
    oracle = fock_expectation(0.4, operator="parity", tau=0.9999, alpha=s, beta=-s)
    assert value == pytest.approx(oracle, abs=1e-9)


@pytest.mark.parametrize("r,gamma_t,n_th,tau", [(0.7, 0.0, 0.0, None), (0.6, 0.01, 0.1, None), (0.5, 0.02, 0.05, 0.95)])
def test_parity_against_fock_oracle(r, gamma_t, n_th, tau):
    a, b = 0.11 - 0.05j, -0.2 + 0.07j
    W = twb_wigner(r, ChannelParams.symmetric(gamma_t, n_th))
    if tau is not None:
        W, _ = ips_state(W, tau)
    oracle = fock_expectation(r, gamma_t, n_th, operator="parity", tau=tau, alpha=a, beta=b)
    assert parity_correlator(W, a, b) == pytest.approx(oracle, abs=1e-9)


def test_vacuum_does_not_violate():
    res = bell_dp(twb_wigner(0.0))
    assert isinstance(res, BellResult)
    assert abs(res.value) <= 2
    assert not res.violated


def test_combination():
    W = twb_wigner(1.0)
    g = DpGeometry.from_j(DEFAULT_J)
    P = lambda a, b: parity_correlator(W, a, b)  # noqa: E731
    expect = P(g.alpha1, g.beta1) + P(g.alpha2, g.beta1) + P(g.alpha1, g.beta2) - P(g.alpha2, g.beta2)
    assert bell_dp(W, g).value == pytest.approx(expect, rel=1e-15)
    assert bell_dp(W).value == bell_dp(W, g).value


@settings(deadline=None, max_examples=60)
@given(st.floats(0, 2), st.floats(1e-5, 0.01), st.floats(0, 0.1), st.floats(0, 0.3), st.booleans())
def test_never_maximal(r, J, gamma_t, n_th, subtract):
    W = twb_wigner(r, ChannelParams.symmetric(gamma_t, n_th))
    if subtract and r > 0.05:
        W, _ = ips_state(W, 0.9999)
    assert abs(bell_dp(W, DpGeometry.from_j(J)).value) < TSIRELSON_BOUND


@settings(deadline=None, max_examples=30)
@given(st.floats(0.05, 2), st.lists(st.floats(0, 0.5), min_size=2, max_size=4, unique=True), st.booleans())
def test_degrades_with_thermal_photons(r, ns, subtract):
    vals = []
    for n in sorted(ns):
        W = twb_wigner(r, ChannelParams.symmetric(0.01, n))
        if subtract:
            W, _ = ips_state(W, 0.9999)
        vals.append(bell_dp(W).value)
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


@settings(deadline=None, max_examples=30)
@given(st.floats(0.05, 2), st.lists(st.integers(0, 100), min_size=2, max_size=4, unique=True), st.booleans())
def test_degrades_with_exposure(r, steps, subtract):
    vals = []
    for k in sorted(steps):
        W = twb_wigner(r, ChannelParams.symmetric(0.001 * k, 0.05))
        if subtract:
            W, _ = ips_state(W, 0.9999)
        vals.append(bell_dp(W).value)
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_violated_flag_follows_value():
    assert BellResult("dp", 2.0000001).violated
    assert not BellResult("dp", 2.0).violated
    assert BellResult("dp", -2.1).violated
    values = [bell_dp(twb_wigner(r)) for r in np.linspace(0, 2, 21)]
    assert all(v.violated == (abs(v.value) > 2) for v in values)
