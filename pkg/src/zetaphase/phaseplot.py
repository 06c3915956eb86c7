"""Domain coloring of zeta and argument-principle zero counts.

Colour convention: hue = frac(arg/2pi + 1) at full saturation and value,
standard hexcone HSV -> RGB, 8-bit channels rounded half up.  Pixels are
sampled at cell centres; row 0 is the top edge t = t_hi.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .core import DEFAULT_CONFIG, POLE_RADIUS, EvalConfig, chi, zeta, zeta_line
from .errors import ZeroOnContour, ZetaPhaseError

TWO_PI = 2.0 * math.pi
CONTOUR_MIN_ABS = 1e-8

# Contour steps above this phase change are bisected.
_CONTOUR_MAX_STEP = math.pi / 4
_CONTOUR_MAX_DEPTH = 20


@dataclass(frozen=True)
class RegionSpec:
    sigma_lo: float
    sigma_hi: float
    t_lo: float
    t_hi: float
    width_px: int
    height_px: int

    def __post_init__(self):
        if not self.sigma_lo < self.sigma_hi:
            raise ValueError("region needs sigma_lo < sigma_hi")
        if not self.t_lo < self.t_hi:
            raise ValueError("region needs t_lo < t_hi")
        if self.width_px < 1 or self.height_px < 1:
            raise ValueError("pixel counts must be >= 1")

    @property
    def dsigma(self) -> float:
        return (self.sigma_hi - self.sigma_lo) / self.width_px

    @property
    def dt(self) -> float:
        return (self.t_hi - self.t_lo) / self.height_px

    def sigmas(self) -> np.ndarray:
        return self.sigma_lo + (np.arange(self.width_px) + 0.5) * self.dsigma

    def ts(self) -> np.ndarray:
        return self.t_hi - (np.arange(self.height_px) + 0.5) * self.dt

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class PhasePortrait:
    region: RegionSpec
    arg: np.ndarray  # (height, width), NaN on masked pixels
    rgb: np.ndarray  # (height, width, 3) uint8

    def to_ppm(self) -> bytes:
        h, w, _ = self.rgb.shape
        return b"P6\n%d %d\n255\n" % (w, h) + self.rgb.tobytes()

    def save_png(self, path) -> None:
        from PIL import Image
        Image.fromarray(self.rgb, "RGB").save(path)

    def singular_points(self) -> list[tuple[float, float, int]]:
        """(sigma, t, winding) for every pixel plaquette the hue winds around."""
        w = plaquette_winding(self.arg)
        r = self.region
        out = []
        for i, j in zip(*np.nonzero(w)):
            sigma = r.sigma_lo + (j + 1.0) * r.dsigma
            t = r.t_hi - (i + 1.0) * r.dt
            out.append((float(sigma), float(t), int(w[i, j])))
        return out


def hue_to_rgb(h: np.ndarray) -> np.ndarray:
    """Hexcone HSV -> RGB with S = V = 1."""
    h = np.asarray(h, dtype=float)
    h6 = h * 6.0
    sector = np.floor(h6).astype(int) % 6
    f = h6 - np.floor(h6)
    one, zero = np.ones_like(f), np.zeros_like(f)
    q, t = 1.0 - f, f
    r = np.choose(sector, [one, q, zero, zero, t, one])
    g = np.choose(sector, [t, one, one, q, zero, zero])
    b = np.choose(sector, [zero, zero, t, one, one, q])
    rgb = np.stack([r, g, b], axis=-1)
    return np.floor(rgb * 255.0 + 0.5).astype(np.uint8)


def colorize(arg: np.ndarray) -> np.ndarray:
    a = np.nan_to_num(arg, nan=0.0)
    rgb = hue_to_rgb(np.mod(a / TWO_PI + 1.0, 1.0))
    rgb[np.isnan(arg)] = 0
    return rgb


def _zeta_row(t: float, sig: np.ndarray, dsig: float, ecfg: EvalConfig) -> np.ndarray:
    """zeta along one pixel row; sigma < 1/2 goes through the functional equation."""
    out = np.full(sig.size, np.nan + 0j)
    right = np.flatnonzero(sig >= 0.5)
    left = np.flatnonzero(sig < 0.5)
    try:
        if right.size:
            out[right] = zeta_line(t, float(sig[right[0]]), right.size, dsig, ecfg)
        if left.size:
            # 1 - s for the left block runs over sigma' = 1 - sig, ascending
            # as the column index falls; zeta(conj s) = conj zeta(s).
            refl = np.conj(zeta_line(t, float(1.0 - sig[left[-1]]), left.size, dsig, ecfg))[::-1]
            out[left] = chi(sig[left] + 1j * t) * refl
    except ZetaPhaseError:
        for j, s in enumerate(sig):
            out[j] = _pixel(complex(s, t), ecfg)
    return out


def _pixel(s: complex, ecfg: EvalConfig) -> complex:
    try:
        if s.real >= 0.5:
            return zeta(s, ecfg)
        return chi(s) * np.conj(zeta(np.conj(1.0 - s), ecfg))
    except ZetaPhaseError:
        return complex(np.nan, np.nan)


def _rows(args):
    region, rows, ecfg = args
    sig = region.sigmas()
    ts = region.ts()
    out = np.empty((len(rows), region.width_px))
    for n, i in enumerate(rows):
        z = _zeta_row(float(ts[i]), sig, region.dsigma, ecfg)
        a = np.angle(z)
        a[a == -math.pi] = math.pi
        a[~np.isfinite(z) | (np.abs(sig + 1j * ts[i] - 1.0) < POLE_RADIUS)] = np.nan
        out[n] = a
    return out


def render_phase(region: RegionSpec, ecfg: EvalConfig = DEFAULT_CONFIG, jobs: int = 1,
                 rows_per_task: int = 16) -> PhasePortrait:
    """Principal arg zeta(s) at every pixel centre, coloured by hue."""
    chunks = [list(range(i, min(i + rows_per_task, region.height_px)))
              for i in range(0, region.height_px, rows_per_task)]
    tasks = [(region, c, ecfg) for c in chunks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_rows, tasks))
    else:
        parts = [_rows(t) for t in tasks]
    arg = np.concatenate(parts, axis=0)
    return PhasePortrait(region, arg, colorize(arg))


def plaquette_winding(arg: np.ndarray) -> np.ndarray:
    """Winding of the phase around each 2x2 block of pixel centres.

    Traversal is counter-clockwise in the (sigma, t) plane: +1 marks a zero,
    -1 a pole.
    """
    ll, lr = arg[1:, :-1], arg[1:, 1:]
    ur, ul = arg[:-1, 1:], arg[:-1, :-1]

    def step(a, b):
        return np.angle(np.exp(1j * (b - a)))

    total = step(ll, lr) + step(lr, ur) + step(ur, ul) + step(ul, ll)
    w = np.rint(total / TWO_PI)
    return np.where(np.isfinite(w), w, 0).astype(int)


# ---------------------------------------------------------------------------
# Argument principle
# ---------------------------------------------------------------------------


def _zeta_any(s: complex, ecfg: EvalConfig) -> complex:
    return zeta(s, ecfg)


def _contour_winding(path, samples: int, ecfg: EvalConfig) -> int:
    """Winding of zeta along the closed path u -> path(u), u in [0, 1]."""
    us = np.linspace(0.0, 1.0, samples + 1)
    vals = [_zeta_any(path(u), ecfg) for u in us]
    total = 0.0
    min_abs = min(abs(v) for v in vals)
    for i in range(samples):
        d, m = _segment(path, us[i], us[i + 1], vals[i], vals[i + 1], ecfg, 0)
        total += d
        min_abs = min(min_abs, m)
    if min_abs <= CONTOUR_MIN_ABS:
        raise ZeroOnContour(f"|zeta| = {min_abs:.3g} on the contour")
    return int(round(total / TWO_PI))


def _segment(path, u0, u1, v0, v1, ecfg, depth):
    d = math.atan2((v1 * v0.conjugate()).imag, (v1 * v0.conjugate()).real)
    if abs(d) <= _CONTOUR_MAX_STEP or depth >= _CONTOUR_MAX_DEPTH:
        return d, min(abs(v0), abs(v1))
    um = 0.5 * (u0 + u1)
    vm = _zeta_any(path(um), ecfg)
    a, ma = _segment(path, u0, um, v0, vm, ecfg, depth + 1)
    b, mb = _segment(path, um, u1, vm, v1, ecfg, depth + 1)
    return a + b, min(ma, mb)


def verify_winding(center: complex, radius: float, samples: int = 256,
                   ecfg: EvalConfig = DEFAULT_CONFIG) -> int:
    """Zeros minus poles of zeta inside the circle, by the argument principle."""
    center = complex(center)

    def path(u):
        return center + radius * complex(math.cos(TWO_PI * u), math.sin(TWO_PI * u))

    return _contour_winding(path, samples, ecfg)


def rect_winding(sigma_lo: float, sigma_hi: float, t_lo: float, t_hi: float,
                 samples: int = 256, ecfg: EvalConfig = DEFAULT_CONFIG) -> int:
    """Zeros minus poles of zeta inside the rectangle (counter-clockwise boundary)."""
    corners = [complex(sigma_lo, t_lo), complex(sigma_hi, t_lo),
               complex(sigma_hi, t_hi), complex(sigma_lo, t_hi)]
    lengths = [abs(corners[(i + 1) % 4] - corners[i]) for i in range(4)]
    per = sum(lengths)
    cum = np.concatenate(([0.0], np.cumsum(lengths))) / per

    def path(u):
        i = min(int(np.searchsorted(cum, u, side="right")) - 1, 3)
        f = (u - cum[i]) / (cum[i + 1] - cum[i])
        return corners[i] + f * (corners[(i + 1) % 4] - corners[i])

    return _contour_winding(path, samples, ecfg)
