import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from wall_limits import specfun
from wall_limits.specfun import (SeriesControl, SeriesConvergenceError, arg_A_series, gamma_complex,
                                 gamma_euler_product, gauss_2f1_terminating, hyp2f1_regularized, kummer_m,
                                 laguerre_assoc, loggamma, rgamma, tricomi_u, tricomi_u_asymptotic,
                                 whittaker_m, whittaker_w)

mp.mp.dps = 40

small = st.floats(-5, 5, allow_nan=False)


def c(z):
    return complex(z)


def rel(a, b):
    return abs(a - b) / abs(b)


# Gamma ------------------------------------------------------------------

def test_gamma_basic_values():
    assert gamma_complex(1.0) == pytest.approx(1.0, rel=1e-15)
    assert gamma_complex(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert abs(gamma_complex(1j)) == pytest.approx(math.sqrt(math.pi / math.sinh(math.pi)), rel=1e-13)
    assert abs(gamma_complex(1j)) == pytest.approx(0.52156405, abs=1e-8)


def test_gamma_real_input_is_real():
    v = gamma_complex(np.array([0.3, 2.5, 7.0]))
    assert v.dtype == float
    np.testing.assert_allclose(v, [math.gamma(0.3), math.gamma(2.5), 720.0], rtol=1e-14)


@pytest.mark.parametrize("z", [0.5 + 0.3j, -3.7 + 0.01j, 12.0 - 40.0j, 0.001 + 0.0j, -0.5 - 2.0j])
def test_gamma_against_mpmath(z):
    assert rel(c(gamma_complex(z)), c(mp.gamma(z))) < 1e-13


def test_gamma_large_argument():
    # exp(log Gamma) inherits |log Gamma| * eps relative error
    z = 150.0 + 3.0j
    lg = abs(complex(mp.loggamma(z)))
    assert rel(c(gamma_complex(z)), c(mp.gamma(z))) < 4 * lg * np.finfo(float).eps


def test_loggamma_avoids_overflow():
    z = 500.0 + 3.0j
    assert abs(c(np.exp(loggamma(z) - complex(mp.loggamma(z)))) - 1) < 1e-12
    with pytest.raises(OverflowError):
        gamma_complex(z)


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
def test_gamma_poles(z):
    with pytest.raises(specfun.PoleError):
        gamma_complex(z)
    assert rgamma(z) == 0


def test_euler_product_cross_check():
    z = 0.7 + 0.4j
    val, bound = gamma_euler_product(z, 200000)
    assert rel(val, c(gamma_complex(z))) < 3 * bound
    assert bound < 1e-5


@given(small, small)
def test_gamma_reflection(a, b):
    z = complex(a, b)
    assume(min(abs(z - n) for n in range(-6, 7)) > 0.05)
    val = gamma_complex(z) * gamma_complex(1 - z) * np.sin(np.pi * z) / np.pi
    assert abs(val - 1) < 1e-11


@given(small, small)
def test_gamma_recurrence(a, b):
    z = complex(a, b)
    assume(min(abs(z - n) for n in range(-6, 7)) > 0.05)
    assert rel(gamma_complex(z + 1), z * gamma_complex(z)) < 1e-12


# Kummer M and Tricomi U --------------------------------------------------

def test_kummer_trivial_values():
    assert kummer_m(0.3 + 1j, 2.0 - 1j, 0.0) == 1
    assert kummer_m(1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-15)


def test_kummer_oracle_value():
    ref = c(mp.hyp1f1(mp.mpc(0.5, 0.3), mp.mpc(1, 0.6), 0.2))
    assert abs(kummer_m(0.5 + 0.3j, 1 + 0.6j, 0.2) - ref) < 1e-12


def test_kummer_nonconvergence_reports_partial():
    with pytest.raises(SeriesConvergenceError) as info:
        kummer_m(0.5, 1.5, 30.0, SeriesControl(rel_tol=1e-13, max_terms=5))
    assert info.value.terms == 5
    assert np.isfinite(info.value.partial).all()


def test_kummer_pole_in_denominator():
    with pytest.raises(specfun.PoleError):
        kummer_m(1.0, -2.0, 0.5)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 4), st.floats(-3, 3), st.floats(-5, 5))
def test_kummer_transformation(mr, mi, nr, ni, zr):
    mu, nu = complex(mr, mi), complex(nr, ni)
    lhs = kummer_m(mu, nu, zr)
    rhs = np.exp(zr) * kummer_m(nu - mu, nu, -zr)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_tricomi_oracle_value():
    ref = c(mp.hyperu(mp.mpc(0.5, -0.3), mp.mpc(1, 0.6), 0.4))
    assert abs(tricomi_u(0.5 - 0.3j, 1 + 0.6j, 0.4) - ref) < 1e-10 * abs(ref)


def test_tricomi_decomposition_identity():
    mu, nu, z = 0.5 - 0.3j, 1 + 0.6j, 0.4
    g = lambda w: c(gamma_complex(w))
    direct = (g(nu - 1) / g(mu) * z ** (1 - nu) * kummer_m(1 + mu - nu, 2 - nu, z)
              + g(1 - nu) / g(mu - nu + 1) * kummer_m(mu, nu, z))
    assert abs(tricomi_u(mu, nu, z) - direct) < 1e-13 * abs(direct)


def test_tricomi_small_z_leading_term():
    mu, nu = 0.25 + 0.1j, 1.8 + 0.4j
    z = 1e-6
    lead = c(gamma_complex(nu - 1) / gamma_complex(mu)) * z ** (1 - nu)
    assert abs(tricomi_u(mu, nu, z) / lead - 1) < 1e-3


@pytest.mark.parametrize("z", [0.4, 3.0, 7.0, 17.0, 45.0, 100.0])
def test_tricomi_all_ranges_against_mpmath(z):
    mu, nu = 0.25 - 0.5j, 1.0 + 1.0j
    ref = c(mp.hyperu(mu, nu, z))
    assert abs(tricomi_u(mu, nu, z) - ref) < 1e-11 * abs(ref)


def test_tricomi_asymptotic_error_estimate():
    val, err = tricomi_u_asymptotic(0.3 + 0.2j, 1.0 + 0.4j, 60.0)
    ref = c(mp.hyperu(mp.mpc(0.3, 0.2), mp.mpc(1, 0.4), 60))
    assert abs(val - ref) / abs(ref) <= max(err, 1e-15) * 10


def test_tricomi_integer_nu_is_unsupported():
    with pytest.raises(specfun.DegenerateParameterError):
        tricomi_u(0.5, 2.0, 1.0)


def test_tricomi_branch_cut_warning():
    with pytest.warns(specfun.BranchCutWarning):
        tricomi_u(0.5 + 0.1j, 1.0 + 0.3j, -0.5 + 0j)


# Whittaker -------------------------------------------------------------

def test_whittaker_definitional_assembly():
    l, m, z = 0.75, 0.5j, 1.3
    pref = z ** (m + 0.5) * np.exp(-z / 2)
    assert abs(whittaker_w(l, m, z) / pref - tricomi_u(0.5 + m - l, 1 + 2 * m, z)) < 1e-13
    assert abs(whittaker_m(l, m, z) / pref - kummer_m(0.5 + m - l, 1 + 2 * m, z)) < 1e-13


def test_whittaker_morse_point_oracle():
    # alpha = kappa = 2, b = 1.5, k = 1, x = 1
    l, m = 1.5 * 2 / 4, 0.5j
    y = 2.0 * math.exp(-2.0)
    ref = c(mp.whitw(l, m, y))
    val = complex(whittaker_w(l, m, y))
    assert abs(val.real - ref.real) < 1e-10 and abs(val.imag - ref.imag) < 1e-10


def test_whittaker_large_z_monitor():
    l, m = 0.75, 0.5j
    zs = np.linspace(5.0, 40.0, 15)
    ratio = np.abs(whittaker_w(l, m, zs)) / (zs ** l * np.exp(-zs / 2))
    assert np.all(ratio < 2.0) and np.all(ratio > 0.5)


# Laguerre and 2F1 ------------------------------------------------------

def test_laguerre_trivial_and_oracle():
    assert laguerre_assoc(0, 2.3, 0.7) == 1.0
    assert laguerre_assoc(1, 0.0, 0.4) == pytest.approx(0.6, abs=1e-15)
    ref = float(mp.laguerre(3, mp.mpf(2.5), mp.mpf(1.2)))
    assert laguerre_assoc(3, 2.5, 1.2) == pytest.approx(ref, abs=1e-13)


def test_terminating_2f1():
    assert gauss_2f1_terminating(0.3 + 1j, 0, 2.0, 5.0) == 1
    a, cc, z = 0.5 + 0.2j, 1 - 0.4j, 2.0
    assert abs(gauss_2f1_terminating(a, 1, cc, z) - (1 - a * z / cc)) < 1e-15
    ref = sum(c(mp.rf(a, m) * mp.rf(-3, m) / mp.rf(cc, m) * mp.mpf(2) ** m / mp.factorial(m)) for m in range(4))
    assert abs(gauss_2f1_terminating(a, 3, cc, z) - ref) < 1e-13


def test_terminating_2f1_pole():
    with pytest.raises(specfun.PoleError):
        gauss_2f1_terminating(0.5, 4, -2.0, 0.5)


@pytest.mark.parametrize("a,b,cc", [(0.3 + 1j, -0.2 - 0.5j, 1.7 + 0.1j), (-3.5 + 2j, -3.5 - 2j, -2.0), (1.2, 0.4, -4.0)])
def test_regularized_2f1_at_half(a, b, cc):
    ref = c(mp.hyp2f1(a, b, cc, 0.5) / mp.gamma(cc)) if not (cc.real <= 0 and cc == int(cc.real)) else \
        c(mp.limit(lambda t: mp.hyp2f1(a, b, cc + t, 0.5) / mp.gamma(cc + t), 0))
    assert abs(hyp2f1_regularized(a, b, cc, 0.5) - ref) < 1e-12 * max(1.0, abs(ref))


# arg A series ------------------------------------------------------------

def _arg_gamma_ratio(b, kappa, alpha, k):
    r = mp.gamma(-2j * k / alpha) / mp.gamma(0.5 - b * kappa / (2 * alpha) - 1j * k / alpha)
    return float(mp.arg(r))


def test_arg_series_liouville_limit():
    assert arg_A_series(0.0, 1.0, 1e6, 1.0) == pytest.approx(math.pi / 2, abs=1e-5)


def test_arg_series_fine_tuned_tan():
    alpha = 100.0
    val = arg_A_series(1 - 2 / alpha, alpha, alpha, 1.0)
    assert math.tan(val) == pytest.approx(1.0, abs=5e-2)


@pytest.mark.parametrize("b,kappa,alpha,k", [(0.0, 1.0, 1e6, 1.0), (2.0, 3.0, 2.2, 1.5), (5.0, 4.1, 4.0, 0.7),
                                             (0.9, 20.0, 20.0, 1.0), (7.2, 10.0, 1.0, 3.0)])
def test_arg_series_matches_gamma_ratio(b, kappa, alpha, k):
    d = math.remainder(arg_A_series(b, kappa, alpha, k) - _arg_gamma_ratio(b, kappa, alpha, k), 2 * math.pi)
    assert abs(d) < 1e-9


def test_arg_series_resonant_denominator():
    with pytest.raises(specfun.ResonantDenominatorError):
        arg_A_series(3.0, 2.0, 2.0, 1.0)  # (2n+1) alpha = b kappa at n = 1


@given(st.floats(0, 8), st.floats(0.5, 30), st.floats(0.5, 30), st.floats(0.05, 4))
def test_arg_series_property(b, kappa, alpha, k):
    r = 0.5 - b * kappa / (2 * alpha)
    assume(min(abs(n + r) for n in range(0, 40)) > 1e-6)
    d = math.remainder(arg_A_series(b, kappa, alpha, k) - _arg_gamma_ratio(b, kappa, alpha, k), 2 * math.pi)
    assert abs(d) < 1e-9


@pytest.mark.parametrize("z", [4.5, 8.0, 20.0, 31.0, 33.0, 50.0])
def test_tricomi_large_parameters(z):
    # asymptotic terms grow before they shrink once |mu| > sqrt(z)
    mu, nu = -5.5 + 2j, 1.0 + 4.0j
    ref = c(mp.hyperu(mu, nu, z))
    assert abs(tricomi_u(mu, nu, z) - ref) < 1e-11 * abs(ref)
