import cmath
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaphase.errors import DomainError
from zetaphase.special import bernoulli, em_coefficients, gamma, loggamma, loggamma_scalar


def test_bernoulli_known():
    b = bernoulli(12)
    assert b[0] == 1
    assert b[2] == Fraction(1, 6)
    assert b[4] == Fraction(-1, 30)
    assert b[12] == Fraction(-691, 2730)
    assert all(b[k] == 0 for k in range(3, 13, 2))


def test_em_coefficients_against_mpmath():
    c = em_coefficients(20)
    for k in range(21):
        ref = float(mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k))
        assert c[k] == pytest.approx(ref, rel=1e-14)


complexes = st.builds(complex,
                      st.floats(-30, 40, allow_nan=False),
                      st.floats(-200, 200, allow_nan=False))


@settings(max_examples=200, deadline=None)
@given(complexes)
def test_loggamma_matches_mpmath(z):
    if z.imag == 0 and z.real <= 0 and z.real == round(z.real):
        return
    if abs(z.imag) < 1e-3 and z.real < 0 and abs(z.real - round(z.real)) < 1e-3:
        return  # next to a pole the value itself is ill-conditioned
    ref = complex(mpmath.loggamma(mpmath.mpc(z.real, z.imag)))
    got = loggamma(z)
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))
    assert abs(loggamma_scalar(z) - got) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=100, deadline=None)
@given(complexes.filter(lambda z: abs(z.imag) > 0.1))
def test_loggamma_recurrence(z):
    # principal branch: log Gamma(z+1) = log Gamma(z) + log z exactly
    lhs = loggamma(z + 1)
    rhs = loggamma(z) + cmath.log(z)
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


def test_loggamma_vectorized():
    z = np.array([0.5 + 1j, 3.0, -2.5 + 0.1j, 20 - 7j])
    out = loggamma(z)
    assert out.shape == z.shape
    for zi, oi in zip(z, out):
        assert oi == pytest.approx(loggamma_scalar(zi), abs=1e-13)


def test_gamma_integers():
    for n in range(1, 10):
        assert abs(gamma(n) - np.prod(np.arange(1, n), dtype=float)) <= 1e-12 * gamma(n).real


@pytest.mark.parametrize("z", [0, -1, -7])
def test_loggamma_poles(z):
    with pytest.raises(DomainError):
        loggamma(z)
    with pytest.raises(DomainError):
        loggamma_scalar(z)
