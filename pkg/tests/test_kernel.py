import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from fctdenoise.kernel import KernelParams, phi1d, phi2d, trapezoid_response, truncation_radius


def ifct_of_trapezoid(t, lam):
    """Independent oracle: (1/pi) * integral_0^inf Phi(w) cos(w t) dw, by adaptive quadrature."""
    a = (lam - 1) / 2
    flat = quad(lambda w: 1.0, 0, math.pi, weight="cos", wvar=t, epsabs=1e-12)[0]
    ramp = quad(lambda w: (math.pi + 2 * a - w) / (2 * a), math.pi, math.pi + 2 * a, weight="cos", wvar=t, epsabs=1e-12)[0]
    return (flat + ramp) / math.pi


def test_params_validation():
    assert KernelParams(2.0).a == 0.5
    for bad in (1.0, 0.5, 1 + math.pi, 5.0):
        with pytest.raises(ValueError):
            KernelParams(bad)
    for eps in (0.0, 2e-3, -1e-6):
        with pytest.raises(ValueError):
            KernelParams(2.0, eps)


def test_phi_at_origin(params):
    assert phi1d(0.0, params) == pytest.approx(1 + 0.5 / math.pi, abs=1e-15)
    assert phi1d(0.0, params) == pytest.approx(1.159155, abs=1e-6)


def test_phi_at_origin_small_taper_limit():
    assert phi1d(0.0, KernelParams(1.0 + 1e-9)) == pytest.approx(1.0, abs=1e-9)


def test_phi_at_two(params):
    # sin^2(1) / (2 pi); frozen from the quadrature oracle
    assert phi1d(2.0, params) == pytest.approx(0.112693384590214, abs=1e-12)
    assert phi1d(2.0, params) == pytest.approx(ifct_of_trapezoid(2.0, 2.0), abs=1e-8)


@pytest.mark.parametrize("lam", [1.5, 2.0, 3.0])
def test_oracle_equivalence(lam):
    p = KernelParams(lam)
    ts = np.random.default_rng(7).uniform(-10, 10, 200)
    got = phi1d(ts, p)
    want = np.array([ifct_of_trapezoid(t, lam) for t in ts])
    assert np.max(np.abs(got - want)) <= 1e-6


def test_continuity_at_origin(params):
    assert abs(phi1d(1e-5, params) - phi1d(0.0, params)) <= 1e-6
    # both sides of the Taylor switch agree
    assert phi1d(0.99e-8, params) == pytest.approx(phi1d(1.01e-8, params), abs=1e-14)


@given(st.floats(-50, 50, allow_nan=False))
def test_even(t):
    p = KernelParams(2.0)
    assert phi1d(t, p) == pytest.approx(phi1d(-t, p), abs=1e-15)


def test_partition_of_unity(params):
    m = np.arange(-2000, 2001)
    for u in np.linspace(0, 1, 11, endpoint=False):
        assert abs(np.sum(phi1d(u - m, params)) - 1.0) <= 1e-4


def test_absolute_summability(params):
    # the step from M-1 to M adds two terms, each below 1 / (pi a M^2)
    u = 0.3
    for M in (500, 1000, 2000):
        inc = abs(phi1d(u - M, params)) + abs(phi1d(u + M, params))
        assert inc <= 2 / (math.pi * params.a * M**2)
    m = np.arange(-2000, 2001)
    assert np.isfinite(np.sum(np.abs(phi1d(u - m, params))))


def test_phi2d_values(params):
    assert phi2d(0.0, 0.0, params) == pytest.approx(1.343640182094375, abs=1e-12)
    assert phi2d(2.0, 0.0, params) == pytest.approx(0.1306290938015026, abs=1e-12)


@settings(max_examples=50)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_phi2d_symmetry(x, y):
    p = KernelParams(2.0)
    v = phi2d(x, y, p)
    assert v == pytest.approx(phi2d(y, x, p), abs=1e-15)
    assert v == pytest.approx(phi2d(-x, y, p), abs=1e-15)
    assert v == pytest.approx(phi2d(x, -y, p), abs=1e-15)


def test_trapezoid(params):
    a = params.a
    assert trapezoid_response(0.0, params) == 1.0
    assert trapezoid_response(math.pi, params) == 1.0
    assert trapezoid_response(math.pi + a, params) == pytest.approx(0.5)
    assert trapezoid_response(math.pi + 2 * a, params) == 0.0
    assert trapezoid_response(-(math.pi + a), params) == pytest.approx(0.5)
    assert trapezoid_response(10.0, params) == 0.0


def test_truncation_radius():
    assert truncation_radius(KernelParams(2.0, 1e-6)) == pytest.approx(797.8845608, abs=1e-6)
    assert truncation_radius(KernelParams(2.0, 1e-4)) == pytest.approx(79.78845608, abs=1e-7)


@pytest.mark.parametrize("lam,eps", [(2.0, 1e-6), (2.0, 1e-4), (1.5, 1e-5), (3.0, 1e-3)])
def test_kernel_below_bound_at_radius(lam, eps):
    p = KernelParams(lam, eps)
    T = truncation_radius(p)
    ts = T + np.linspace(0, 50, 2001)
    assert np.all(np.abs(phi1d(ts, p)) <= eps * (1 + 1e-12))
