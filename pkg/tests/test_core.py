import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaphase.core import (A_of_t, A_prime, EvalConfig, chi, hardy_Z, reflect_zeta, theta, zeta,
                            zeta_deriv, zeta_deriv_dirichlet, zeta_line)
from zetaphase.errors import AccuracyNotMet, DomainError, PoleAtOne, SingularChi

mpmath.mp.dps = 30


def mp_zeta(s, d=0):
    return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag), derivative=d))


def test_special_values():
    assert zeta(2) == complex(math.pi ** 2 / 6)
    assert abs(zeta(4) - math.pi ** 4 / 90) < 1e-15
    assert abs(zeta(0) + 0.5) < 1e-15
    assert abs(zeta(-1) + 1 / 12) < 1e-12
    # head sum ~ 9e3 cancels to 0: a few ulps of the partial sum
    assert abs(zeta(-2)) < 1e-11


def test_pole():
    with pytest.raises(PoleAtOne, match="pole at s=1"):
        zeta(1)
    with pytest.raises(PoleAtOne):
        zeta_deriv(1 + 1e-9j)


def test_sigma_floor():
    with pytest.raises(DomainError):
        zeta(-6 + 3j)


points = st.builds(complex, st.floats(-4.5, 12, allow_nan=False), st.floats(-3000, 3000, allow_nan=False))


@settings(max_examples=60, deadline=None)
@given(points.filter(lambda s: abs(s - 1) > 1e-3))
def test_zeta_matches_mpmath(s):
    ref = mp_zeta(s)
    assert abs(zeta(s) - ref) <= 2e-10 * max(1.0, abs(ref))


@settings(max_examples=60, deadline=None)
@given(points.filter(lambda s: abs(s - 1) > 1e-3))
def test_zeta_deriv_matches_mpmath(s):
    ref = mp_zeta(s, 1)
    assert abs(zeta_deriv(s) - ref) <= 2e-10 * max(1.0, abs(ref))


@settings(max_examples=40, deadline=None)
@given(points.filter(lambda s: abs(s - 1) > 1e-3))
def test_conjugate_symmetry(s):
    assert abs(zeta(s.conjugate()) - zeta(s).conjugate()) <= 1e-12 * max(1.0, abs(zeta(s)))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(1, 2000))
def test_functional_equation(sigma, t):
    s = complex(sigma, t)
    lhs = zeta(s)
    rhs = chi(s) * zeta(1 - s)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


@pytest.mark.parametrize("s", [2 + 0j, 4 + 0j, 4 + 100j, 4 + 7005j, 6 - 40000j, 15 + 3j, 40 + 9e4j])
def test_dirichlet_route_agrees(s):
    em = zeta_deriv(s, EvalConfig(dirichlet_sigma_min=1e9))
    dr = zeta_deriv_dirichlet(s)
    assert abs(em - dr) <= 1e-12
    lead, tail = zeta_deriv_dirichlet(s, split=True)
    assert lead + tail == pytest.approx(dr, abs=1e-15)
    assert lead == pytest.approx(-math.log(2) * 2 ** (-s))


def test_dirichlet_domain():
    with pytest.raises(DomainError):
        zeta_deriv_dirichlet(1.5 + 2j)


def test_reflect():
    for s in (-2.5 + 7000j, -4 + 30j, -0.5 + 2j, 0.2 - 500j):
        ref = mp_zeta(s)
        assert abs(reflect_zeta(s) - ref) <= 1e-10 * abs(ref)
    assert reflect_zeta(-4) == 0
    assert reflect_zeta(0) == -0.5
    with pytest.raises(DomainError):
        reflect_zeta(0.7 + 1j)


@pytest.mark.parametrize("s", [0, -2, 1, 3])
def test_chi_singular(s):
    with pytest.raises(SingularChi):
        chi(s)


def test_chi_unimodular_on_critical_line():
    t = np.linspace(2, 5000, 50)
    assert np.allclose(np.abs(chi(0.5 + 1j * t)), 1.0, atol=1e-12)


@pytest.mark.parametrize("t", [1.5, 17.0, 100.0, 7005.0, 99999.0])
def test_theta_against_mpmath(t):
    assert theta(t).theta == pytest.approx(float(mpmath.siegeltheta(t)), abs=1e-10)


@pytest.mark.parametrize("t", [14.0, 100.0, 7005.08, 50000.5])
def test_hardy_Z_against_mpmath(t):
    assert hardy_Z(t) == pytest.approx(float(mpmath.siegelz(t)), abs=1e-9)


def test_theta_domain():
    with pytest.raises(DomainError):
        theta(0.5)


def test_A():
    t = 5000.0
    x = t / (2 * math.pi)
    assert A_of_t(t) == pytest.approx(x * math.log(x) - x)
    h = 1e-4
    assert A_prime(t) == pytest.approx((A_of_t(t + h) - A_of_t(t - h)) / (2 * h), rel=1e-8)


@pytest.mark.parametrize("gamma", [14.134725, 5000.3, 70000.0])
def test_zeta_line_matches_points(gamma):
    vals = zeta_line(gamma, 0.5 - 0.0075, 300, 0.0125)
    for j in (0, 1, 63, 64, 65, 150, 299):
        s = complex(0.5 - 0.0075 + j * 0.0125, gamma)
        assert abs(vals[j] - zeta(s)) <= 1e-12 * max(1.0, abs(vals[j]))


def test_zeta_line_deterministic():
    a = zeta_line(1234.5, 0.5, 1407, 0.0025)
    b = zeta_line(1234.5, 0.5, 1407, 0.0025)
    assert a.tobytes() == b.tobytes()


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(em_terms_factor=0.5)
    with pytest.raises(ValueError):
        EvalConfig(bernoulli_depth=0)
    with pytest.raises(ValueError):
        EvalConfig(target_abs_error=0)


def test_accuracy_gate():
    cfg = EvalConfig(em_terms_factor=1.0, bernoulli_depth=2, target_abs_error=1e-15)
    with pytest.raises(AccuracyNotMet):
        zeta(0.5 + 5000j, cfg)


def test_reflect_deriv_against_mpmath():
    from zetaphase.core import reflect_zeta_deriv
    for s in (-4, -2, -1, 0, -3.9999, -4.5 + 3j, -2.5 + 7000j, 0.2 + 1j):
        s = complex(s)
        ref = mp_zeta(s, 1)
        assert abs(reflect_zeta_deriv(s) - ref) <= 1e-11 * max(1.0, abs(ref))


# Properties over random samples


@settings(max_examples=100, deadline=None)
@given(st.floats(2, 6), st.floats(-1000, 1000))
def test_dual_route_property(sigma, t):
    s = complex(sigma, t)
    em = zeta_deriv(s, EvalConfig(dirichlet_sigma_min=1e9))
    assert abs(em - zeta_deriv_dirichlet(s)) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(st.floats(-3, -1), st.floats(-1000, 1000).filter(lambda t: abs(t) > 1e-3))
def test_reflection_matches_direct_continuation(sigma, t):
    from zetaphase.core import _em_point
    s = complex(sigma, t)
    direct, _ = _em_point(s, EvalConfig(bernoulli_depth=60), deriv=False)
    refl = reflect_zeta(s)
    assert abs(direct - refl) <= 1e-6 * abs(refl)


@settings(max_examples=100, deadline=None)
@given(st.floats(10, 1e4))
def test_Z_is_real(t):
    rot = np.exp(1j * theta(t).theta) * zeta(0.5 + 1j * t)
    assert abs(rot.imag) <= 1e-8


@settings(max_examples=100, deadline=None)
@given(st.floats(-4, 5), st.floats(-500, 500).filter(lambda t: abs(t) > 1e-3))
def test_chi_reciprocity(sigma, t):
    s = complex(sigma, t)
    assert abs(chi(s) * chi(1 - s) - 1) <= 1e-12


def test_chi_examples():
    assert chi(0.5) == pytest.approx(1.0, abs=1e-15)
    assert abs(abs(chi(0.5 + 100j)) - 1) <= 1e-10


def test_theta_asymptotic_and_continuity():
    t = 1e4
    lead = t / 2 * math.log(t / (2 * math.pi)) - t / 2 - math.pi / 8
    assert theta(t).theta - lead == pytest.approx(1 / (48 * t), rel=0.1)
    h = 1e-3
    assert abs(theta(1000 + h).theta - theta(1000).theta) <= 2 * h * math.log(1000)


def test_hardy_Z_examples():
    assert abs(hardy_Z(14.134725141734693)) < 1e-8
    assert math.copysign(1, hardy_Z(14)) != math.copysign(1, hardy_Z(14.5))
    assert hardy_Z(30) ** 2 == pytest.approx(abs(zeta(0.5 + 30j)) ** 2, abs=1e-10)


def test_A_examples():
    assert A_of_t(2 * math.pi) == pytest.approx(-1.0)
    assert A_of_t(2 * math.pi * math.e) == pytest.approx(0.0, abs=1e-14)
    assert A_prime(2 * math.pi) == 0.0
    with pytest.raises(DomainError):
        A_of_t(0)


def test_zeta_deriv_examples():
    assert zeta_deriv(4) == pytest.approx(-0.068911265896125, abs=1e-13)
    assert zeta_deriv(2) == pytest.approx(-0.93754825431584375, abs=1e-13)
    assert abs(zeta_deriv(4) - zeta_deriv_dirichlet(4)) <= 1e-12
    assert abs(zeta(0.5 + 14.134725141734693j)) < 1e-9
