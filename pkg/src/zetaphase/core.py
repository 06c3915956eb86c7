"""Evaluation of zeta, zeta', chi, theta, Z and the zero-counting main term.

Everything here is built on the Euler-Maclaurin formula

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{k=1}^{K} B_2k/(2k)! s(s+1)...(s+2k-2) N^(-s-2k+1) + R_K,

with |R_K| bounded by |s+2K+1|/(sigma+2K+1) times the first omitted term.
The derivative is the term-wise derivative of the same expression.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .errors import AccuracyNotMet, DomainError, PoleAtOne, SingularChi
from .special import bernoulli, digamma, em_coefficients, loggamma, loggamma_scalar

TWO_PI = 2.0 * math.pi
LOG_PI = math.log(math.pi)
LOG2 = math.log(2.0)

POLE_RADIUS = 1e-8
_EPS = np.finfo(float).eps
SIGMA_MIN = -5.0

# Rows per block of the multiplicative ladder in zeta_line.
_LADDER_BLOCK = 64
# Floor on |t|/2pi when sizing the head sum; 20 keeps depth-40 corrections
# convergent at low height.
_TERMS_FLOOR = 20.0


@dataclass(frozen=True)
class EvalConfig:
    """Knobs of the Euler-Maclaurin engine.

    The number of leading terms is ``ceil(em_terms_factor * max(|t|/2pi, 20))``.
    The defaults keep the remainder bound below 1e-13 for |t| <= 1e5 on the
    critical line, well inside ``target_abs_error``.
    """

    em_terms_factor: float = 1.5
    bernoulli_depth: int = 40
    dirichlet_sigma_min: float = 10.0
    target_abs_error: float = 1e-10

    def __post_init__(self):
        if not self.em_terms_factor >= 1:
            raise ValueError("em_terms_factor must be >= 1")
        if not 1 <= self.bernoulli_depth <= 100:
            raise ValueError("bernoulli_depth must be in [1, 100]")
        if not self.dirichlet_sigma_min >= 2:
            raise ValueError("dirichlet_sigma_min must be >= 2")
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be > 0")

    def terms(self, t: float) -> int:
        return math.ceil(self.em_terms_factor * max(abs(t) / TWO_PI, _TERMS_FLOOR))

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = EvalConfig()


class ThetaValue(NamedTuple):
    t: float
    theta: float


# ---------------------------------------------------------------------------
# Euler-Maclaurin pieces
# ---------------------------------------------------------------------------

_log_table = np.zeros(0)


def _logs(N: int) -> np.ndarray:
    """log n for n = 1 .. N-1 (read-only view of a shared table)."""
    global _log_table
    if _log_table.size < N - 1:
        size = max(N - 1, 2 * _log_table.size, 1024)
        table = np.log(np.arange(1, size + 1, dtype=float))
        table.flags.writeable = False
        _log_table = table
    return _log_table[: N - 1]


def _em_tail(s, N: int, depth: int, deriv: bool = True):
    """Everything after the head sum, its s-derivative, and remainder bounds.

    ``s`` may be a complex scalar (plain cmath arithmetic, the hot path of
    the finder) or an ndarray (one line of the stencil table).
    """
    scalar = not isinstance(s, np.ndarray)
    lnN = math.log(N)
    w = cmath.exp(-s * lnN) if scalar else np.exp(-s * lnN)
    sm1 = s - 1.0
    z = N * w / sm1 + 0.5 * w
    dz = -N * w * (lnN / sm1 + 1.0 / (sm1 * sm1)) - 0.5 * lnN * w if deriv else 0.0
    c = em_coefficients(depth + 1)
    N2 = float(N) * N
    u = s * w / N
    du = (w / N) * (1.0 - s * lnN) if deriv else 0.0
    for k in range(1, depth + 1):
        z = z + c[k] * u
        q = (s + (2 * k - 1)) * (s + 2 * k) / N2
        if deriv:
            dz = dz + c[k] * du
            du = du * q + u * (2.0 * s + (4 * k - 1)) / N2
        u = u * q
    # sigma >= -5 keeps sigma + 2K + 1 > 0.
    fac = abs(s + (2 * depth + 1)) / (s.real + (2 * depth + 1))
    cK = abs(c[depth + 1])
    return z, dz, cK * abs(u) * fac, cK * abs(du) * fac


def _check_point(s: complex):
    if abs(s - 1.0) < POLE_RADIUS:
        raise PoleAtOne()
    if s.real < SIGMA_MIN:
        raise DomainError(f"sigma={s.real:g} below {SIGMA_MIN:g}; use reflect_zeta")
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("non-finite argument")


def _roundoff(s: complex, N: int, deriv: bool) -> float:
    """Rounding estimate for sigma < 1/2, where the head sum and the leading
    tail term grow like N^(1-sigma) and cancel."""
    if s.real >= 0.5:
        return 0.0
    a = 1.0 - s.real
    size = N ** a / a + N ** (a - 1.0)
    if deriv:
        size *= math.log(N) + 1.0
    return 8.0 * _EPS * size


def _em_point(s: complex, cfg: EvalConfig, deriv: bool):
    N = cfg.terms(s.imag)
    ln = _logs(N)
    terms = np.exp(-s * ln)
    z, dz, err, derr = _em_tail(s, N, cfg.bernoulli_depth, deriv)
    rnd = _roundoff(s, N, deriv)
    if s.imag == 0.0:
        # Real axis: correctly rounded sums, cheap at the floor length.
        if deriv:
            return complex(math.fsum(list(-terms.real * ln) + [dz.real])), float(derr) + rnd
        return complex(math.fsum(list(terms.real) + [z.real])), float(err) + rnd
    if deriv:
        return complex(dz - np.dot(terms, ln)), float(derr) + rnd
    return complex(z + terms.sum()), float(err) + rnd


def _within(value: complex, err: float, cfg: EvalConfig) -> bool:
    # Absolute target, relaxed to relative where |value| > 1 (sigma < 0 at
    # large height, where zeta itself is huge).
    return err <= cfg.target_abs_error * max(1.0, abs(value))


def _accept(value: complex, err: float, cfg: EvalConfig, what: str) -> complex:
    if not _within(value, err, cfg):
        raise AccuracyNotMet(
            f"{what}: error bound {err:.3g} exceeds target {cfg.target_abs_error:.3g}"
        )
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise AccuracyNotMet(f"{what}: non-finite result")
    return value


def zeta(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """zeta(s) by Euler-Maclaurin; left of 1/2, where the direct sum cancels
    beyond the target, through the functional equation instead."""
    s = complex(s)
    _check_point(s)
    value, err = _em_point(s, cfg, deriv=False)
    if s.real < 0.5 and not _within(value, err, cfg):
        return reflect_zeta(s, cfg)
    return _accept(value, err, cfg, "zeta")


def zeta_deriv(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    s = complex(s)
    _check_point(s)
    if s.real >= cfg.dirichlet_sigma_min:
        return zeta_deriv_dirichlet(s, tol=cfg.target_abs_error)
    value, err = _em_point(s, cfg, deriv=True)
    if s.real < 0.5 and not _within(value, err, cfg):
        return reflect_zeta_deriv(s, cfg)
    return _accept(value, err, cfg, "zeta'")


# ---------------------------------------------------------------------------
# Dirichlet-series route for zeta'
# ---------------------------------------------------------------------------

_PLAIN_CAP = 1 << 20


def _plain_tail_bound(M: int, sigma: float) -> float:
    # sum_{n>M} log n n^-sigma <= int_M^inf log x x^-sigma dx
    a = sigma - 1.0
    return M ** (-a) * (math.log(M) / a + 1.0 / (a * a))


def _rising_with_deriv(s: complex, m: int):
    p, dp = 1.0 + 0j, 0j
    for j in range(m):
        p, dp = p * (s + j), dp * (s + j) + p
    return p, dp


def zeta_deriv_dirichlet(s, tol: float = 1e-13, split: bool = False):
    """zeta'(s) = -log(2) 2^-s - sum_{n>=3} log(n) n^-s for sigma >= 2.

    For large sigma the series is truncated where the integral tail bound
    drops below ``tol``.  Otherwise the sum is cut at M >= 8|s| and the
    remainder sum_{n>=M} log(n) n^-s is replaced by its integral plus
    endpoint corrections, written directly in terms of the derivatives of
    log(x) x^-s.  With ``split=True`` returns ``(leading, tail)``.
    """
    s = complex(s)
    sigma = s.real
    if sigma < 2:
        raise DomainError(f"Dirichlet route needs sigma >= 2, got {sigma:g}")
    M = 4
    while M <= _PLAIN_CAP and _plain_tail_bound(M, sigma) > tol:
        M *= 2
    leading = -LOG2 * np.exp(-s * LOG2)
    if M <= _PLAIN_CAP:
        ln = _logs(M + 1)[2:]
        tail = -complex(np.dot(np.exp(-s * ln), ln))
    else:
        M = max(64, math.ceil(8.0 * abs(s)))
        ln = _logs(M)[2:]
        head = complex(np.dot(np.exp(-s * ln), ln))
        lnM = math.log(M)
        sm1 = s - 1.0
        xs = complex(np.exp(-s * lnM))
        corr = M * xs * (lnM / sm1 + 1.0 / (sm1 * sm1)) + 0.5 * lnM * xs
        b = bernoulli(8)
        for k in range(1, 4):
            m = 2 * k - 1
            p, dp = _rising_with_deriv(s, m)
            f_m = -(xs * M ** (-m)) * (p * lnM - dp)
            corr -= float(b[2 * k] / math.factorial(2 * k)) * f_m
        tail = -(head + corr)
    if split:
        return complex(leading), tail
    return complex(leading) + tail


# ---------------------------------------------------------------------------
# Functional equation, theta, Z
# ---------------------------------------------------------------------------


def _is_int(x: np.ndarray) -> np.ndarray:
    return np.abs(x - np.round(x)) < 1e-12


def chi(s):
    """pi^(s-1/2) Gamma((1-s)/2) / Gamma(s/2) via log-Gamma."""
    scalar = np.ndim(s) == 0
    sa = np.atleast_1d(np.asarray(s, dtype=complex))
    on_axis = (sa.imag == 0) & _is_int(sa.real)
    r = np.round(sa.real)
    bad = on_axis & (((r <= 0) & (r % 2 == 0)) | ((r >= 1) & (r % 2 == 1)))
    if bad.any():
        raise SingularChi(f"chi is singular at s={sa[bad][0].real:g}")
    out = np.exp((sa - 0.5) * LOG_PI + loggamma((1.0 - sa) / 2.0) - loggamma(sa / 2.0))
    return complex(out[0]) if scalar else out


def reflect_zeta(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """zeta(s) = chi(s) zeta(1-s) for sigma < 1/2."""
    s = complex(s)
    if not s.real < 0.5:
        raise DomainError("reflect_zeta needs sigma < 1/2")
    if s.imag == 0 and _is_int(np.array(s.real)):
        n = round(s.real)
        if n == 0:
            return -0.5 + 0j
        if n % 2 == 0:
            return 0j
    return chi(s) * zeta(1.0 - s, cfg)


def reflect_zeta_deriv(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """zeta'(s) = chi(s) [chi'/chi(s) zeta(1-s) - zeta'(1-s)] for sigma < 1/2.

    chi'/chi(s) = log pi - psi((1-s)/2)/2 - psi(s/2)/2.  At the trivial zeros
    chi vanishes and the closed form is used.
    """
    s = complex(s)
    if not s.real < 0.5:
        raise DomainError("reflect_zeta_deriv needs sigma < 1/2")
    if s.imag == 0 and _is_int(np.array(s.real)):
        n = round(s.real)
        if n == 0:
            return complex(-0.5 * math.log(TWO_PI))
        if n % 2 == 0:
            k = -n // 2
            return complex((-1) ** k * math.factorial(2 * k) * zeta(2 * k + 1, cfg).real
                           / (2.0 * TWO_PI ** (2 * k)))
    logd = LOG_PI - 0.5 * digamma((1.0 - s) / 2.0) - 0.5 * digamma(s / 2.0)
    return chi(s) * (logd * zeta(1.0 - s, cfg) - zeta_deriv(1.0 - s, cfg))


def _theta(t: float) -> float:
    return loggamma_scalar(complex(0.25, 0.5 * t)).imag - 0.5 * t * LOG_PI


def theta(t: float) -> ThetaValue:
    """Riemann-Siegel theta on its continuous branch."""
    t = float(t)
    if not t > 1:
        raise DomainError("theta needs t > 1")
    return ThetaValue(t, _theta(t))


def hardy_Z(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    t = float(t)
    if not t > 1:
        raise DomainError("hardy_Z needs t > 1")
    zv = zeta(complex(0.5, t), cfg)
    rot = complex(np.exp(1j * _theta(t))) * zv
    if abs(rot.imag) > 10.0 * cfg.target_abs_error * max(1.0, abs(zv)):
        raise AccuracyNotMet(f"Z({t}) has imaginary residue {rot.imag:.3g}")
    return rot.real


def A_of_t(t: float) -> float:
    if not t > 0:
        raise DomainError("A(t) needs t > 0")
    x = t / TWO_PI
    return x * math.log(x) - x


def A_prime(u: float) -> float:
    if not u > 0:
        raise DomainError("A'(u) needs u > 0")
    return math.log(u / TWO_PI) / TWO_PI


# ---------------------------------------------------------------------------
# zeta along a horizontal line
# ---------------------------------------------------------------------------


def zeta_line(gamma: float, sigma0: float, count: int, dx: float,
              cfg: EvalConfig = DEFAULT_CONFIG) -> np.ndarray:
    """zeta(sigma0 + j dx + i gamma) for j = 0 .. count-1.

    n^(-i gamma) is formed once; n^(-sigma) advances by the fixed ratio
    n^(-dx), a block of rows at a time, so the cost is O(N * count)
    multiplications rather than ``count`` independent evaluations.
    """
    if count < 1:
        return np.zeros(0, dtype=complex)
    if sigma0 < SIGMA_MIN:
        raise DomainError(f"sigma={sigma0:g} below {SIGMA_MIN:g}")
    sig = sigma0 + dx * np.arange(count)
    s = sig + 1j * gamma
    if np.min(np.abs(s - 1.0)) < POLE_RADIUS:
        raise PoleAtOne()
    N = cfg.terms(gamma)
    ln = _logs(N)
    a = np.exp(-complex(sigma0, gamma) * ln)
    B = min(_LADDER_BLOCK, count)
    ratio = np.exp(-np.outer(dx * np.arange(B), ln))
    hop = np.exp(-B * dx * ln)
    head = np.empty(count, dtype=complex)
    for j0 in range(0, count, B):
        m = min(B, count - j0)
        head.real[j0:j0 + m] = (ratio[:m] * a.real).sum(axis=1)
        head.imag[j0:j0 + m] = (ratio[:m] * a.imag).sum(axis=1)
        a = a * hop
    tail, _, err, _ = _em_tail(s, N, cfg.bernoulli_depth, deriv=False)
    err = err + np.array([_roundoff(complex(x, gamma), N, False) for x in sig])
    out = head + tail
    bound = cfg.target_abs_error * np.maximum(1.0, np.abs(out))
    if not np.all(err <= bound):
        j = int(np.argmax(err / bound))
        raise AccuracyNotMet(f"zeta_line: remainder bound {err[j]:.3g} at sigma={sig[j]:g}")
    return out
