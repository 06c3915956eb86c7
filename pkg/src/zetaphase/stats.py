"""Normalized statistics of zeta' at the zeros: moments, histograms, scatter."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np
from scipy import stats as sps

from .argtrack import PhaseRecord
from .core import LOG2, A_prime
from .errors import DomainError, TooFewSamples

TWO_PI = 2.0 * math.pi


class Kind(str, enum.Enum):
    ARG_PAPER = "ARG_PAPER"
    ARG_CONVENTION = "ARG_CONVENTION"
    LOGMOD_HEJHAL = "LOGMOD_HEJHAL"
    ZETA_ARG_SELBERG = "ZETA_ARG_SELBERG"


@dataclass(frozen=True)
class NormalizedSample:
    k: int
    value: float
    kind: Kind
    excluded: bool = False


@dataclass(frozen=True)
class MomentsReport:
    n: int
    mean: float
    stdev: float
    central_moments_3_to_6: tuple[float, float, float, float]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["central_moments_3_to_6"] = list(self.central_moments_3_to_6)
        return d


@dataclass(frozen=True)
class HistogramSpec:
    lo: float = -8.0
    hi: float = 8.0
    bins: int = 160

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("histogram needs lo < hi")
        if self.bins < 1:
            raise ValueError("histogram needs bins >= 1")


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    gauss_ref: np.ndarray
    below: int
    above: int

    @property
    def n(self) -> int:
        return int(self.counts.sum()) + self.below + self.above


# ---------------------------------------------------------------------------
# Normalizations
# ---------------------------------------------------------------------------


def _scale(n_ref: float, theorem_form: bool) -> float:
    if not n_ref >= 3:
        raise DomainError("reference size must be >= 3 so that log log is positive")
    ll = math.log(math.log(n_ref))
    return math.sqrt(ll / 2.0 if theorem_form else ll)


def arg_paper_raw(rec: PhaseRecord) -> float:
    return rec.continuous_arg + math.pi - rec.gamma * LOG2


def arg_convention_raw(rec: PhaseRecord) -> float:
    return rec.continuous_arg - math.pi + rec.gamma * LOG2


def normalize_arg(rec: PhaseRecord, N_ref: int, theorem_form: bool = False):
    """``(ARG_PAPER, ARG_CONVENTION)`` samples for one record.

    ARG_PAPER centers with +pi - gamma log 2 exactly as printed for the
    published histogram; ARG_CONVENTION centers on the vertical-leg phase
    pi - gamma log 2 of this package's branch.  Their sum is
    2 * continuous_arg / scale.
    """
    sc = _scale(N_ref, theorem_form)
    return (NormalizedSample(rec.k, arg_paper_raw(rec) / sc, Kind.ARG_PAPER, rec.flagged),
            NormalizedSample(rec.k, arg_convention_raw(rec) / sc, Kind.ARG_CONVENTION, rec.flagged))


def logmod_raw(rec: PhaseRecord) -> float:
    if not rec.gamma > TWO_PI:
        raise DomainError("log-modulus normalization needs gamma > 2 pi")
    return math.log(abs(TWO_PI * rec.zeta_prime / math.log(rec.gamma / TWO_PI)))


def normalize_logmod(rec: PhaseRecord, N_ref: int, theorem_form: bool = False) -> NormalizedSample:
    """log|2 pi zeta'(rho) / log(gamma/2pi)| / sqrt(log log N_ref).

    The modulus inside the log equals |zeta'(rho)| / A'(gamma).
    """
    return NormalizedSample(rec.k, logmod_raw(rec) / _scale(N_ref, theorem_form),
                            Kind.LOGMOD_HEJHAL, rec.flagged)


def logmod_via_density(rec: PhaseRecord) -> float:
    return math.log(abs(rec.zeta_prime) / A_prime(rec.gamma))


def normalize_selberg(t: float, arg_zeta: float, T_ref: float) -> NormalizedSample:
    """arg zeta(1/2+it) / sqrt(log log(T_ref) / 2)."""
    return NormalizedSample(0, arg_zeta / _scale(T_ref, True), Kind.ZETA_ARG_SELBERG)


def normalize(records: Iterable[PhaseRecord], kind: Kind, N_ref: int,
              theorem_form: bool = False) -> list[NormalizedSample]:
    kind = Kind(kind)
    out = []
    for r in records:
        if kind is Kind.LOGMOD_HEJHAL:
            out.append(normalize_logmod(r, N_ref, theorem_form))
        elif kind is Kind.ARG_PAPER:
            out.append(normalize_arg(r, N_ref, theorem_form)[0])
        elif kind is Kind.ARG_CONVENTION:
            out.append(normalize_arg(r, N_ref, theorem_form)[1])
        else:
            raise ValueError("ZETA_ARG_SELBERG samples come from normalize_selberg")
    return out


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


class MomentAccumulator:
    """Count, mean and central power sums M_2..M_6, mergeable.

    Batches are reduced two-pass; batches combine with the pairwise
    update for arbitrary-order central sums, so shards merged in a fixed
    order give a fixed result.
    """

    ORDER = 6

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.M = [0.0] * (self.ORDER + 1)

    @classmethod
    def of(cls, values) -> "MomentAccumulator":
        acc = cls()
        x = np.asarray(values, dtype=float)
        if x.size:
            acc.n = int(x.size)
            acc.mean = float(x.mean())
            d = x - acc.mean
            acc.M = [0.0, 0.0] + [float(np.sum(d ** p)) for p in range(2, cls.ORDER + 1)]
        return acc

    def update(self, values) -> "MomentAccumulator":
        return self.merge(MomentAccumulator.of(values))

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if other.n == 0:
            return self
        if self.n == 0:
            self.n, self.mean, self.M = other.n, other.mean, list(other.M)
            return self
        na, nb = self.n, other.n
        n = na + nb
        delta = other.mean - self.mean
        A, B = self.M, other.M
        M = [0.0] * (self.ORDER + 1)
        for p in range(2, self.ORDER + 1):
            acc = A[p] + B[p]
            for k in range(1, p - 1):
                acc += comb(p, k) * delta ** k * (
                    (-nb / n) ** k * A[p - k] + (na / n) ** k * B[p - k])
            acc += (na * nb / n * delta) ** p * (1.0 / nb ** (p - 1) - (-1.0 / na) ** (p - 1))
            M[p] = acc
        self.n, self.mean, self.M = n, self.mean + delta * nb / n, M
        return self

    def report(self) -> MomentsReport:
        if self.n < 2:
            raise TooFewSamples(f"need at least 2 samples, have {self.n}")
        c = [m / self.n for m in self.M]
        return MomentsReport(self.n, self.mean, math.sqrt(c[2]), (c[3], c[4], c[5], c[6]))


def _values(samples, exclude_flagged: bool) -> np.ndarray:
    vals = []
    for s in samples:
        if isinstance(s, NormalizedSample):
            if exclude_flagged and s.excluded:
                continue
            vals.append(s.value)
        else:
            vals.append(float(s))
    return np.asarray(vals, dtype=float)


def moments(samples: Sequence, exclude_flagged: bool = True, shard: int = 1 << 16) -> MomentsReport:
    """Mean, population stdev and central moments 3..6."""
    x = _values(samples, exclude_flagged)
    acc = MomentAccumulator()
    for i in range(0, x.size, shard):
        acc.merge(MomentAccumulator.of(x[i:i + shard]))
    return acc.report()


# ---------------------------------------------------------------------------
# Histograms and tests
# ---------------------------------------------------------------------------


def histogram(samples: Sequence, spec: HistogramSpec = HistogramSpec(),
              exclude_flagged: bool = True) -> Histogram:
    """Counts on [lo, hi) bins (last bin closed), density = count/(n*width).

    ``gauss_ref`` is the mean-zero normal with the sample's stdev,
    averaged over each bin.
    """
    x = _values(samples, exclude_flagged)
    edges = np.linspace(spec.lo, spec.hi, spec.bins + 1)
    below = int(np.sum(x < spec.lo))
    above = int(np.sum(x > spec.hi))
    counts, _ = np.histogram(x, bins=edges)
    width = np.diff(edges)
    n = max(x.size, 1)
    density = counts / (n * width)
    sd = float(x.std()) if x.size else 0.0
    if sd > 0:
        cdf = sps.norm.cdf(edges, scale=sd)
        gauss = np.diff(cdf) / width
    else:
        gauss = np.zeros(spec.bins)
    return Histogram(edges, counts.astype(np.int64), density, gauss, below, above)


def uniformity_chi2(args: Sequence[float], bins: int = 36) -> tuple[float, float]:
    """Chi-square statistic and p-value of args against uniform on (-pi, pi]."""
    a = np.asarray(args, dtype=float)
    if a.size < bins:
        raise TooFewSamples(f"need at least {bins} values for the uniformity test")
    # (-pi, pi] bins: shift by -pi and use right-closed cells via ceil.
    idx = np.ceil((a + math.pi) / TWO_PI * bins).astype(int) - 1
    idx = np.clip(idx, 0, bins - 1)
    obs = np.bincount(idx, minlength=bins)
    stat, p = sps.chisquare(obs)
    return float(stat), float(p)


def joint_log_scatter(records: Iterable[PhaseRecord]) -> list[tuple[float, float]]:
    """(log|zeta'(rho)|, principal arg zeta'(rho)) for unflagged records."""
    return [(math.log(abs(r.zeta_prime)), r.principal_arg) for r in records if not r.flagged]
