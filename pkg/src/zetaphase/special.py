"""Bernoulli numbers and the complex log-Gamma function.

``loggamma`` uses the Stirling series after shifting the argument to the
right with the recurrence  log G(z) = log G(z + m) - sum_j log(z + j).
Summing principal logarithms along the shift keeps the result on the
principal branch (cut along the negative real axis), which is continuous
on every horizontal line Im z = const != 0.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError

LOG_2PI_HALF = 0.5 * math.log(2.0 * math.pi)

# Shift radius and Stirling depth: the first omitted term is below 1e-20
# once |z| >= 12.
_SHIFT_RADIUS = 12.0
_STIRLING_TERMS = 12


@lru_cache(maxsize=None)
def bernoulli(m: int) -> tuple[Fraction, ...]:
    """Exact B_0 .. B_m (Akiyama-Tanigawa, B_1 = +1/2)."""
    a = [Fraction(0)] * (m + 1)
    out = []
    for i in range(m + 1):
        a[i] = Fraction(1, i + 1)
        for j in range(i, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


@lru_cache(maxsize=None)
def em_coefficients(depth: int) -> tuple[float, ...]:
    """B_{2k}/(2k)! for k = 0 .. depth."""
    b = bernoulli(2 * depth)
    return tuple(float(b[2 * k] / math.factorial(2 * k)) for k in range(depth + 1))


_STIRLING = tuple(
    float(bernoulli(2 * _STIRLING_TERMS)[2 * k] / (2 * k * (2 * k - 1)))
    for k in range(1, _STIRLING_TERMS + 1)
)


def _stirling(z):
    # (z - 1/2) log z - z + log(2 pi)/2 + sum B_2k / (2k(2k-1) z^(2k-1))
    logz = np.log(z)
    inv = 1.0 / z
    inv2 = inv * inv
    acc = np.zeros_like(z)
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return (z - 0.5) * logz - z + LOG_2PI_HALF + acc * inv


def loggamma(z):
    """Principal branch of log Gamma(z) for complex scalars or arrays."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    bad = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if bad.any():
        raise DomainError(f"log-Gamma pole at z={z[bad][0].real:g}")
    near = (np.abs(z.imag) < _SHIFT_RADIUS) & (z.real < _SHIFT_RADIUS)
    shift = np.where(near, np.ceil(_SHIFT_RADIUS - z.real), 0.0).astype(np.int64)
    out = _stirling(z + shift)
    for j in range(int(shift.max(initial=0))):
        m = shift > j
        out[m] -= np.log(z[m] + j)
    return complex(out[0]) if scalar else out


def loggamma_scalar(z: complex) -> complex:
    """Scalar twin of ``loggamma`` in plain cmath arithmetic."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == round(z.real):
        raise DomainError(f"log-Gamma pole at z={z.real:g}")
    shift = 0
    if abs(z.imag) < _SHIFT_RADIUS and z.real < _SHIFT_RADIUS:
        shift = math.ceil(_SHIFT_RADIUS - z.real)
    w = z + shift
    inv = 1.0 / w
    inv2 = inv * inv
    acc = 0j
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    out = (w - 0.5) * cmath.log(w) - w + LOG_2PI_HALF + acc * inv
    for j in range(shift):
        out -= cmath.log(z + j)
    return out


_DIGAMMA = tuple(
    float(bernoulli(2 * _STIRLING_TERMS)[2 * k] / (2 * k))
    for k in range(1, _STIRLING_TERMS + 1)
)


def digamma(z: complex) -> complex:
    """psi(z) = Gamma'(z)/Gamma(z) for a complex scalar."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == round(z.real):
        raise DomainError(f"digamma pole at z={z.real:g}")
    shift = 0
    if abs(z.imag) < _SHIFT_RADIUS and z.real < _SHIFT_RADIUS:
        shift = math.ceil(_SHIFT_RADIUS - z.real)
    w = z + shift
    inv2 = 1.0 / (w * w)
    acc = 0j
    for c in reversed(_DIGAMMA):
        acc = acc * inv2 + c
    out = cmath.log(w) - 0.5 / w - acc * inv2
    for j in range(shift):
        out -= 1.0 / (z + j)
    return out


def gamma(z):
    return np.exp(loggamma(z))
