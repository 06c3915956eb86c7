"""Continuous argument of zeta' (and zeta) along 4 -> 4+i*gamma -> 1/2+i*gamma.

The vertical leg costs O(1): at sigma = 4 the n = 2 term of the Dirichlet
series for zeta' dominates the rest, so zeta' winds exactly as
-log(2) 2^(-4-iy) does and only a bounded correction remains.  The
horizontal leg tabulates zeta on a uniform sigma grid and differentiates
the table with a 7-point central stencil.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import DEFAULT_CONFIG, LOG2, EvalConfig, zeta, zeta_deriv, zeta_deriv_dirichlet, zeta_line
from .errors import CertificateViolation, DomainError, EndpointAtZero, NotAZero, PhaseSlip

TWO_PI = 2.0 * math.pi

VERTICAL_MAIN = LOG2 / 16.0
VERTICAL_TAIL_BOUND = 0.025590
DELTA_BOUND = math.asin(VERTICAL_TAIL_BOUND / VERTICAL_MAIN)
DELTA_SLACK = 1e-6

NOT_A_ZERO_TOL = 1e-6
ENDPOINT_TOL = 1e-8


class Flag(enum.Flag):
    REFINED = enum.auto()
    SLIP_SUSPECT = enum.auto()
    NEAR_ZETA_PRIME_ZERO = enum.auto()

    @classmethod
    def none(cls) -> "Flag":
        return cls(0)

    def names(self) -> list[str]:
        return [f.name for f in Flag if f in self]

    def to_str(self) -> str:
        return "|".join(self.names())

    @classmethod
    def parse(cls, text: str) -> "Flag":
        out = cls(0)
        for name in filter(None, text.strip().split("|")):
            out |= cls[name]
        return out


# Flags that exclude a record from published statistics.  REFINED alone
# means refinement succeeded and the value is trusted.
SUSPECT = Flag.SLIP_SUSPECT | Flag.NEAR_ZETA_PRIME_ZERO


@dataclass(frozen=True)
class PathConfig:
    dx: float = 0.0025
    sigma_start: float = 4.0
    slip_threshold: float = 0.9 * math.pi
    max_refine_depth: int = 6

    def __post_init__(self):
        if not 0 < self.dx <= 0.01:
            raise ValueError("dx must lie in (0, 0.01]")
        if not self.sigma_start >= 2:
            raise ValueError("sigma_start must be >= 2")
        if not 0 < self.slip_threshold < math.pi:
            raise ValueError("slip_threshold must lie in (0, pi)")
        if self.max_refine_depth < 0:
            raise ValueError("max_refine_depth must be >= 0")

    def halved(self) -> "PathConfig":
        return PathConfig(self.dx / 2, self.sigma_start, self.slip_threshold, self.max_refine_depth)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PhaseRecord:
    k: int
    gamma: float
    zeta_prime: complex
    winding: int
    continuous_arg: float
    vertical_arg: float
    flags: Flag = field(default_factory=Flag.none)

    @property
    def principal_arg(self) -> float:
        return principal_arg(self.zeta_prime)

    @property
    def flagged(self) -> bool:
        return bool(self.flags & SUSPECT)


@dataclass
class StencilTable:
    gamma: float
    dx: float
    sigma_start: float
    sigma_grid: np.ndarray
    values: np.ndarray

    @property
    def derivatives(self) -> np.ndarray:
        """Stencil estimates of zeta' at sigma_grid[3:-3], ascending."""
        return _stencil_all(self.values, self.dx)


def principal_arg(z: complex) -> float:
    a = math.atan2(z.imag, z.real)
    return math.pi if a == -math.pi else a


def _steps(vals: np.ndarray) -> np.ndarray:
    return np.angle(vals[1:] * np.conj(vals[:-1]))


# ---------------------------------------------------------------------------
# Stencil
# ---------------------------------------------------------------------------


def stencil_deriv(values, dx: float) -> complex:
    """(-f[-3] + 9f[-2] - 45f[-1] + 45f[1] - 9f[2] + f[3]) / (60 dx).

    Exact for polynomials of degree <= 6; the leading error is f^(7) dx^6/140.
    """
    f = np.asarray(values)
    if f.shape[-1] != 7:
        raise ValueError("stencil_deriv needs 7 values")
    out = ((f[..., 6] - f[..., 0]) - 9.0 * (f[..., 5] - f[..., 1])
           + 45.0 * (f[..., 4] - f[..., 2])) / (60.0 * dx)
    return out[()] if np.ndim(out) == 0 else out


def _stencil_all(v: np.ndarray, dx: float) -> np.ndarray:
    return ((v[6:] - v[:-6]) - 9.0 * (v[5:-1] - v[1:-5]) + 45.0 * (v[4:-2] - v[2:-4])) / (60.0 * dx)


def _stencil5_all(v: np.ndarray, dx: float) -> np.ndarray:
    return (8.0 * (v[4:-2] - v[2:-4]) - (v[5:-1] - v[1:-5])) / (12.0 * dx)


# ---------------------------------------------------------------------------
# Vertical leg
# ---------------------------------------------------------------------------


def _vertical(gamma: float, sigma: float, ecfg: EvalConfig):
    if gamma < 0:
        raise DomainError("gamma must be >= 0")
    main = LOG2 * 2.0 ** (-sigma)
    if sigma == 4.0:
        tail = VERTICAL_TAIL_BOUND
    else:
        tail = -zeta_deriv_dirichlet(sigma).real - main
    if not tail < main:
        raise CertificateViolation(f"n=2 term does not dominate zeta' at sigma={sigma:g}")
    zp = zeta_deriv(complex(sigma, gamma), ecfg)
    lead = -main * complex(math.cos(gamma * LOG2), -math.sin(gamma * LOG2))
    delta = principal_arg(zp / lead)
    if abs(delta) > math.asin(tail / main) + DELTA_SLACK:
        raise CertificateViolation(f"|delta|={abs(delta):.6f} exceeds the dominance bound at gamma={gamma}")
    return math.pi - gamma * LOG2 + delta, zp


def vertical_leg_arg(gamma: float, ecfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Continuous arg zeta'(4 + i*gamma), starting from arg zeta'(4) = pi."""
    return _vertical(float(gamma), 4.0, ecfg)[0]


# ---------------------------------------------------------------------------
# Horizontal leg
# ---------------------------------------------------------------------------


def _grid_steps(cfg: PathConfig) -> int:
    return math.ceil((cfg.sigma_start - 0.5) / cfg.dx - 1e-9)


def build_stencil_table(gamma: float, cfg: PathConfig = PathConfig(),
                        ecfg: EvalConfig = DEFAULT_CONFIG) -> StencilTable:
    if not gamma > 1:
        raise DomainError("gamma must be > 1")
    count = _grid_steps(cfg) + 1 + 6
    sigma0 = 0.5 - 3 * cfg.dx
    values = zeta_line(gamma, sigma0, count, cfg.dx, ecfg)
    grid = sigma0 + cfg.dx * np.arange(count)
    return StencilTable(gamma, cfg.dx, cfg.sigma_start, grid, values)


def _accumulate(vals: np.ndarray, refine, cfg: PathConfig):
    """Sum principal steps along ``vals``; refine any step >= slip_threshold.

    ``refine(i, m)`` returns samples strictly inside step i at spacing
    (step length)/2^m.
    """
    steps = _steps(vals)
    flags = Flag.none()
    for i in np.flatnonzero(np.abs(steps) >= cfg.slip_threshold):
        flags |= Flag.REFINED
        ok = False
        for m in range(1, cfg.max_refine_depth + 1):
            fine = np.concatenate(([vals[i]], refine(int(i), m), [vals[i + 1]]))
            d = _steps(fine)
            steps[i] = d.sum()
            if np.all(np.abs(d) < cfg.slip_threshold):
                ok = True
                break
        if not ok:
            flags |= Flag.SLIP_SUSPECT
    return float(steps.sum()), flags


def _horizontal(table: StencilTable, start_arg: float, start_value, cfg: PathConfig,
                ecfg: EvalConfig):
    dx = table.dx
    v = table.values
    deriv = _stencil_all(v, dx)
    flags = Flag.none()
    err = np.abs(deriv - _stencil5_all(v, dx))
    if np.any(np.abs(deriv) <= 10.0 * err):
        flags |= Flag.NEAR_ZETA_PRIME_ZERO
    path = deriv[::-1]
    sig_top = table.sigma_grid[-4]
    gamma = table.gamma

    def refine(i, m):
        h = dx / (1 << m)
        n_in = (1 << m) - 1
        lo = sig_top - (i + 1) * dx
        vals = zeta_line(gamma, lo + h - 3 * h, n_in + 6, h, ecfg)
        return _stencil_all(vals, h)[::-1]

    if start_value is not None:
        path = np.concatenate(([start_value], path))
    total, f2 = _accumulate(path, _shift(refine, start_value is not None), cfg)
    return start_arg + total, complex(deriv[0]), flags | f2


def _shift(refine, shifted: bool):
    if not shifted:
        return refine
    # Step 0 is the sub-dx hop from sigma_start to the top grid point.
    return lambda i, m: np.zeros(0, dtype=complex) if i == 0 else refine(i - 1, m)


def horizontal_leg_arg(table: StencilTable, start_arg: float, cfg: PathConfig = PathConfig(),
                       ecfg: EvalConfig = DEFAULT_CONFIG, *, strict: bool = False):
    """Continuous arg of zeta' at sigma = 1/2, given its value at the top grid point.

    Returns ``(arg, flags)``.  A step that stays ambiguous after
    ``max_refine_depth`` halvings is flagged SLIP_SUSPECT, or raises
    PhaseSlip when ``strict``.
    """
    arg, _, flags = _horizontal(table, start_arg, None, cfg, ecfg)
    if strict and Flag.SLIP_SUSPECT in flags:
        raise PhaseSlip(f"unresolved phase slip at gamma={table.gamma}")
    return arg, flags


def phase_at_zero(z, cfg: PathConfig = PathConfig(), ecfg: EvalConfig = DEFAULT_CONFIG) -> PhaseRecord:
    gamma = float(z.gamma)
    rho = complex(0.5, gamma)
    if abs(zeta(rho, ecfg)) > NOT_A_ZERO_TOL:
        raise NotAZero(f"|zeta(1/2+{gamma}i)| > {NOT_A_ZERO_TOL:g}")
    vert, zp_top = _vertical(gamma, cfg.sigma_start, ecfg)
    table = build_stencil_table(gamma, cfg, ecfg)
    arg_est, est, flags = _horizontal(table, vert, zp_top, cfg, ecfg)
    zp = zeta_deriv(rho, ecfg)
    hop = principal_arg(zp / est)
    if abs(hop) >= cfg.slip_threshold:
        flags |= Flag.SLIP_SUSPECT
    p = principal_arg(zp)
    winding = round((arg_est + hop - p) / TWO_PI)
    return PhaseRecord(int(z.k), gamma, zp, winding, p + TWO_PI * winding, vert, flags)


def track_zeta_arg(t: float, cfg: PathConfig = PathConfig(), ecfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Continuous arg zeta(1/2 + it) along sigma_start -> sigma_start+it -> 1/2+it.

    On the vertical leg zeta = 1 + (tail), |tail| <= zeta(sigma_start) - 1 < 1,
    so the principal value at the corner is already the continuous one.
    """
    t = float(t)
    if not t > 1:
        raise DomainError("track_zeta_arg needs t > 1")
    dx = cfg.dx
    m = _grid_steps(cfg)
    vals = zeta_line(t, 0.5, m + 1, dx, ecfg)
    if abs(vals[0]) < ENDPOINT_TOL:
        raise EndpointAtZero(f"zeta(1/2+{t}i) vanishes to {ENDPOINT_TOL:g}")
    corner = zeta(complex(cfg.sigma_start, t), ecfg)
    path = np.concatenate(([corner], vals[::-1]))
    top = 0.5 + m * dx

    def refine(i, mm):
        if i == 0:
            return np.zeros(0, dtype=complex)
        h = dx / (1 << mm)
        lo = top - i * dx
        return zeta_line(t, lo + h, (1 << mm) - 1, h, ecfg)[::-1]

    total, _ = _accumulate(path, refine, cfg)
    return principal_arg(corner) + total


# ---------------------------------------------------------------------------
# Batches
# ---------------------------------------------------------------------------


def _phase_chunk(args):
    zeros, cfg, ecfg = args
    return [phase_at_zero(z, cfg, ecfg) for z in zeros]


def phase_batch(zeros, cfg: PathConfig = PathConfig(), ecfg: EvalConfig = DEFAULT_CONFIG,
                jobs: int = 1, chunk: int = 64) -> list[PhaseRecord]:
    """phase_at_zero over many zeros; output order follows input order."""
    zeros = list(zeros)
    if jobs <= 1 or len(zeros) <= chunk:
        return _phase_chunk((zeros, cfg, ecfg))
    parts = [(zeros[i:i + chunk], cfg, ecfg) for i in range(0, len(zeros), chunk)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [r for part in pool.map(_phase_chunk, parts) for r in part]
