import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvbell.errors import DomainError, NoClickError, OutsideStudiedRegimeWarning
from cvbell.gaussian import PI, ChannelParams, GaussianSumWigner, GaussianTerm, make_twb_cov, twb_wigner
from cvbell.ips import (
    IpsParams,
    double_click_probability,
    effective_transmissivity,
    ips_coefficients,
    ips_state,
    twin_beam_form,
)
from cvbell.oracle.fock import FockState, fock_expectation
from cvbell.oracle.gaussian import ips_p11
from cvbell.oracle.quadrature import integrate


def coeffs_for(r, tau, gamma_t=0.0, n_th=0.0):
    return ips_coefficients(*twin_beam_form(twb_wigner(r, ChannelParams.symmetric(gamma_t, n_th))), tau)


def fock_sum_p11(r, tau, kmax=400):
    # pure twin beam: P(n, n) = (1 - lam^2) lam^(2n), clicks on both arms with prob (1 - tau^n)^2
    lam2 = math.tanh(r) ** 2
    return math.fsum((1 - lam2) * lam2**n * (1 - tau**n) ** 2 for n in range(kmax))


def test_effective_transmissivity():
    assert effective_transmissivity(1.0, 0.3) == 1.0
    assert effective_transmissivity(0.9, 1.0) == pytest.approx(0.9, abs=1e-16)
    assert effective_transmissivity(0.99, 0.5) == pytest.approx(0.995, abs=1e-16)
    for bad in ((0.0, 0.5), (0.5, 0.0), (1.1, 0.5), (0.5, 1.5)):
        with pytest.raises(DomainError):
            effective_transmissivity(*bad)


@given(st.floats(1e-3, 1.0), st.floats(1e-3, 1.0))
def test_ips_params_tau_range(T, eta):
    p = IpsParams(T, eta)
    assert 0 < p.tau <= 1
    assert p.tau == 1 - eta * (1 - T)


def test_unit_transmissivity_kills_coefficients():
    c = coeffs_for(0.7, 1.0)
    for arr in (c.N, c.f, c.g, c.h):
        assert np.all(arr == 0)
    assert c.p11 == 0


def test_unit_transmissivity_terms_cancel():
    c = coeffs_for(0.7, 1.0)
    np.testing.assert_array_equal(c.C / c.disc / abs(c.C[0] / c.disc[0]), [1, -1, -1, 1])


@pytest.mark.parametrize("tau", [0.5, 0.9, 0.99, 0.9999])
def test_vacuum_input_never_clicks(tau):
    assert abs(coeffs_for(0.0, tau).p11) < 1e-18
    with pytest.raises(NoClickError):
        ips_state(twb_wigner(0.0), tau)


def test_coefficient_table_reference():
    # frozen; the resulting state integrates to one under the quadrature oracle
    c = coeffs_for(0.3, 0.9999)
    assert float(c.a) == pytest.approx(2.0000370930436486, rel=1e-14)
    assert float(c.b) == pytest.approx(2.3708933434408865, rel=1e-14)
    np.testing.assert_array_equal(c.x, [c.a, c.a + 2, c.a, c.a + 2])
    np.testing.assert_array_equal(c.y, [c.a, c.a, c.a + 2, c.a + 2])
    ref = {
        "N": [9.998629157499093e-05, 4.9993609281366835e-05, 4.9993609281366835e-05, 2.4997036415096238e-05],
        "f": [8.79315945847327e-05, 8.449380260037518e-05, 4.740549997602574e-05, 4.3966956500249684e-05],
        "g": [8.79315945847327e-05, 4.740549997602574e-05, 8.449380260037518e-05, 4.3966956500249684e-05],
        "h": [-4.7219641182737116e-05, -3.541623984231295e-05, -3.541623984231295e-05, -2.3611439028603014e-05],
        "C": [3.9998516481648942, -3.9998887313829257, -3.9998887313829257, 3.9999258189977382],
    }
    for name, vals in ref.items():
        np.testing.assert_allclose(np.asarray(getattr(c, name), dtype=float), vals, rtol=1e-12)
    W, p11 = ips_state(twb_wigner(0.3), 0.9999)
    assert p11 == pytest.approx(1.0992736468816953e-09, rel=1e-9)
    assert abs(integrate(W).estimate - 1) < 1e-7


def test_p11_reference_three_ways():
    c = coeffs_for(0.5, 0.99)
    ref = 4.14896607527e-05
    assert float(c.p11) == pytest.approx(ref, rel=1e-10)
    # quadrature of the conditioned, not yet normalized Wigner function
    raw = GaussianSumWigner(tuple(GaussianTerm(c.C[k] / PI**2, c.b - c.f[k], c.b - c.g[k], c.cross[k]) for k in range(4)))
    assert integrate(raw).estimate == pytest.approx(ref, rel=1e-9)
    assert ips_p11(make_twb_cov(0.5), 0.99) == pytest.approx(ref, rel=1e-9)
    assert fock_expectation(0.5, operator="p11", tau=0.99) == pytest.approx(ref, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 1.5), st.floats(0.5, 0.999))
def test_p11_matches_photon_number_sum(r, tau):
    assert float(coeffs_for(r, tau).p11) == pytest.approx(fock_sum_p11(r, tau), rel=1e-9)


@pytest.mark.parametrize("r,tau,gamma_t,n_th", [(0.4, 0.95, 0.0, 0.0), (0.7, 0.95, 0.05, 0.2), (0.9, 0.8, 0.1, 0.05)])
def test_p11_matches_kraus_conditioning(r, tau, gamma_t, n_th):
    rho = FockState.twin_beam(r, gamma_t, n_th, cutoff=50)
    _, p11 = rho.subtract(tau)
    assert float(coeffs_for(r, tau, gamma_t, n_th).p11) == pytest.approx(p11, rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 2.0), st.floats(0.0, 0.2), st.floats(0.0, 0.3), st.floats(0.5, 0.9999))
def test_p11_is_a_probability(r, gamma_t, n_th, tau):
    p = float(coeffs_for(r, tau, gamma_t, n_th).p11)
    assert 0 <= p <= 1


@given(st.floats(0.05, 2.0), st.lists(st.integers(0, 4999), min_size=2, max_size=5, unique=True))
def test_p11_grows_as_tau_decreases(r, steps):
    taus = [0.9999 - 1e-4 * k for k in sorted(steps)]
    ps = [float(coeffs_for(r, t).p11) for t in taus]
    assert all(b > a for a, b in zip(ps, ps[1:]))


def test_p11_vanishes_as_tau_goes_to_one():
    ps = [float(coeffs_for(0.6, 1 - 10.0**-k).p11) for k in range(2, 7)]
    assert all(b < a for a, b in zip(ps, ps[1:]))
    assert ps[-1] < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 2.0), st.floats(0.0, 0.2), st.floats(0.0, 0.3), st.floats(0.5, 0.9999))
def test_state_is_normalized_in_closed_form(r, gamma_t, n_th, tau):
    W, p11 = ips_state(twb_wigner(r, ChannelParams.symmetric(gamma_t, n_th)), tau)
    assert len(W) == 4
    # the four masses are of order 1/p11 and cancel down to one
    assert abs(W.integral() - 1) < 1e-12 + 20 * np.finfo(np.longdouble).eps / p11


def test_zero_exposure_substitution_is_the_identity():
    a, _ = ips_state(twb_wigner(0.8), 0.97)
    b, _ = ips_state(twb_wigner(0.8, ChannelParams.symmetric(0.0, 0.0)), 0.97)
    for ta, tb in zip(a.terms, b.terms):
        np.testing.assert_allclose(np.array(ta, dtype=float), np.array(tb, dtype=float), rtol=1e-12)


def test_ips_params_and_bare_tau_agree():
    a, pa = ips_state(twb_wigner(0.5), IpsParams(0.98, 0.5))
    b, pb = ips_state(twb_wigner(0.5), 0.99)
    assert pa == pytest.approx(pb, rel=1e-12)


def test_no_click_error_is_a_domain_error():
    with pytest.raises(DomainError):
        ips_state(twb_wigner(0.5), 1.0)
    assert double_click_probability(twb_wigner(0.5), 1.0) == 0


def test_low_transmissivity_warns():
    with pytest.warns(OutsideStudiedRegimeWarning):
        coeffs_for(0.5, 0.3)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        coeffs_for(0.5, 0.5)


def test_multi_term_input_rejected():
    W, _ = ips_state(twb_wigner(0.5), 0.9)
    with pytest.raises(DomainError):
        ips_state(W, 0.9)


def test_unequal_channels_rejected():
    from cvbell.gaussian import evolve_cov, wigner_of_cov

    cov = evolve_cov(make_twb_cov(0.5), ChannelParams(0.1, 0.2, 0.0, 0.0))
    with pytest.raises(DomainError):
        ips_state(wigner_of_cov(cov), 0.9)
