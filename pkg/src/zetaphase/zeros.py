"""Zero ordinates: a Hardy-Z sign-change finder, table ingestion, gap scans."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from decimal import ROUND_FLOOR, Decimal
from typing import Iterable

import numpy as np

from .argtrack import PathConfig, track_zeta_arg
from .core import DEFAULT_CONFIG, TWO_PI, EvalConfig, _theta, hardy_Z
from .errors import (DomainError, MissedZeroSuspected, MonotonicityError, ParseError,
                     RangeNotCovered)

FINDER_T_MAX = 1e5
BISECT_WIDTH = 1e-9
GAMMA_1 = 14.134725141734693

# Dips of |Z| are re-scanned this many times finer, this many levels deep.
_DIP_SPLIT = 16
_DIP_DEPTH = 4
_DENSIFY_RETRIES = 3
WINDOW_SPAN = 1000.0


@dataclass(frozen=True, order=True)
class ZeroRecord:
    k: int
    gamma: float


@dataclass
class GapReport:
    """Smallest consecutive gaps, ascending by ``delta``.

    ``floor`` is the next gap after the reported ones rounded down to one
    significant digit: every unreported gap in the range is >= ``floor``.
    """

    entries: list[tuple[int, float]] = field(default_factory=list)
    floor: float | None = None
    next_gap: float | None = None
    k_lo: int | None = None
    k_hi: int | None = None


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


def zero_count(t: float, ecfg: EvalConfig = DEFAULT_CONFIG, cfg: PathConfig = PathConfig()) -> float:
    """N(t) = theta(t)/pi + 1 + S(t), S(t) = arg zeta(1/2+it)/pi.

    Heuristic safety net only: no Turing-method rigor.
    """
    if t < GAMMA_1 - 1:
        return 0.0
    return _theta(t) / math.pi + 1.0 + track_zeta_arg(t, cfg, ecfg) / math.pi


def _count_below(t: float, ecfg: EvalConfig) -> int:
    return int(round(zero_count(t, ecfg)))


# ---------------------------------------------------------------------------
# Finder
# ---------------------------------------------------------------------------


def _bisect(a: float, b: float, za: float, ecfg: EvalConfig) -> float:
    while b - a > BISECT_WIDTH:
        m = 0.5 * (a + b)
        zm = hardy_Z(m, ecfg)
        if zm == 0.0:
            return m
        if (zm > 0) == (za > 0):
            a, za = m, zm
        else:
            b = m
    return 0.5 * (a + b)


def _sign_changes(ts: np.ndarray, zs: np.ndarray, ecfg: EvalConfig, depth: int = 0):
    """Brackets (a, b, Z(a)) of sign changes, re-scanning near-miss dips."""
    pos = zs >= 0
    out = [(ts[i], ts[i + 1], zs[i]) for i in np.flatnonzero(pos[1:] != pos[:-1])]
    if depth >= _DIP_DEPTH:
        return out
    az = np.abs(zs)
    for i in range(1, len(ts) - 1):
        if pos[i - 1] == pos[i] == pos[i + 1] and az[i] <= az[i - 1] and az[i] <= az[i + 1]:
            fine = np.linspace(ts[i - 1], ts[i + 1], 2 * _DIP_SPLIT + 1)
            fz = np.array([zs[i - 1]] + [hardy_Z(t, ecfg) for t in fine[1:-1]] + [zs[i + 1]])
            out.extend(_sign_changes(fine, fz, ecfg, depth + 1))
    return out


def _scan(t_lo: float, t_hi: float, spacing: float, ecfg: EvalConfig):
    n = max(2, math.ceil((t_hi - t_lo) / spacing))
    ts = np.linspace(t_lo, t_hi, n + 1)
    zs = np.array([hardy_Z(t, ecfg) for t in ts])
    return sorted(_sign_changes(ts, zs, ecfg))


def find_zeros(t_lo: float, t_hi: float, ecfg: EvalConfig = DEFAULT_CONFIG) -> list[ZeroRecord]:
    """Zeros with t_lo < gamma < t_hi, located by sign changes of Z(t).

    The scan grid is a quarter of the mean gap at t_hi.  Same-sign dips of
    |Z| are re-scanned finer (close pairs hide there), and the total is
    checked against N(t_hi) - N(t_lo); on disagreement the grid is halved
    and the scan repeated before giving up.
    """
    if not 2 < t_lo < t_hi <= FINDER_T_MAX:
        raise DomainError(f"finder range must satisfy 2 < t_lo < t_hi <= {FINDER_T_MAX:g}")
    spacing = TWO_PI / max(math.log(t_hi / TWO_PI), 1.0) / 4.0
    k0 = 1 if t_lo < 14 else _count_below(t_lo, ecfg) + 1
    expected = _count_below(t_hi, ecfg) - (k0 - 1)
    for _ in range(_DENSIFY_RETRIES + 1):
        brackets = _scan(t_lo, t_hi, spacing, ecfg)
        if len(brackets) == expected:
            break
        spacing /= 2
    else:
        raise MissedZeroSuspected(
            f"found {len(brackets)} sign changes in [{t_lo}, {t_hi}], counting check says {expected}")
    gammas = [_bisect(float(a), float(b), float(za), ecfg) for a, b, za in brackets]
    return [ZeroRecord(k0 + i, g) for i, g in enumerate(gammas)]


def _find_window(args):
    lo, hi, ecfg = args
    return find_zeros(lo, hi, ecfg)


def find_zeros_parallel(t_lo: float, t_hi: float, ecfg: EvalConfig = DEFAULT_CONFIG,
                        jobs: int = 1, windows: int | None = None) -> list[ZeroRecord]:
    """find_zeros over independent windows, merged and re-validated.

    The windows depend only on the range (one per ``WINDOW_SPAN`` of
    height unless given), never on ``jobs``, so output is identical for
    every worker count.
    """
    if windows is None:
        windows = max(1, math.ceil((t_hi - t_lo) / WINDOW_SPAN))
    if windows <= 1:
        return find_zeros(t_lo, t_hi, ecfg)
    edges = np.linspace(t_lo, t_hi, windows + 1)
    parts = [(float(edges[i]), float(edges[i + 1]), ecfg) for i in range(windows)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_find_window, parts))
    else:
        chunks = [_find_window(p) for p in parts]
    out = [r for c in chunks for r in c]
    validate(out)
    return out


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def validate(records: list[ZeroRecord], lines: list[int] | None = None) -> None:
    for i, r in enumerate(records):
        line = lines[i] if lines else i + 1
        if not r.gamma > 0 or not math.isfinite(r.gamma):
            raise MonotonicityError(f"ordinate {r.gamma!r} is not positive", line)
        if i and not (r.gamma > records[i - 1].gamma and r.k > records[i - 1].k):
            prev = records[i - 1]
            raise MonotonicityError(
                f"({r.k}, {r.gamma!r}) does not follow ({prev.k}, {prev.gamma!r})", line)


def _text_lines(source) -> Iterable[str]:
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    if isinstance(source, str):
        source = io.StringIO(source)
    for raw in source:
        yield raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw


def import_zeros(source, fmt: str = "plain", first_index: int | None = None) -> list[ZeroRecord]:
    """Parse a zero table.

    ``plain``: one ordinate per line, indexed from ``first_index``.
    ``indexed``: whitespace-separated ``k gamma`` pairs.  Blank lines and
    ``#`` comments are skipped; LF and CRLF are both accepted.
    """
    if fmt not in ("plain", "indexed"):
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "plain" and first_index is None:
        raise ValueError("plain format needs first_index")
    records, lines = [], []
    k = first_index
    for lineno, raw in enumerate(_text_lines(source), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        try:
            if fmt == "plain":
                if len(parts) != 1:
                    raise ValueError
                rec = ZeroRecord(k, float(parts[0]))
                k += 1
            else:
                if len(parts) != 2:
                    raise ValueError
                rec = ZeroRecord(int(parts[0]), float(parts[1]))
        except ValueError:
            raise ParseError(f"cannot parse {text!r} as {fmt} zero record", lineno) from None
        records.append(rec)
        lines.append(lineno)
    validate(records, lines)
    return records


def export_zeros(records: Iterable[ZeroRecord]) -> str:
    """Indexed format, ordinates in 17 significant digits."""
    return "".join(f"{r.k} {r.gamma:.17g}\n" for r in records)


# ---------------------------------------------------------------------------
# Gaps
# ---------------------------------------------------------------------------


def _floor_1sig(x: float) -> float:
    # shortest repr is exact for inputs like 0.005 and never rounds up past x
    d = Decimal(repr(x))
    e = d.adjusted()
    return float(d.scaleb(-e).to_integral_value(ROUND_FLOOR).scaleb(e))


def scan_min_gaps(records: list[ZeroRecord], k_lo: int, k_hi: int, count: int) -> GapReport:
    """The ``count`` smallest gaps gamma_{k+1} - gamma_k for k_lo <= k <= k_hi."""
    if count <= 0:
        return GapReport([], None, None, k_lo, k_hi)
    if not records:
        raise RangeNotCovered("no records")
    base = records[0].k
    i_lo, i_hi = k_lo - base, k_hi + 1 - base
    if i_lo < 0 or i_hi >= len(records) or records[i_hi].k != k_hi + 1 or records[i_lo].k != k_lo:
        raise RangeNotCovered(f"records do not cover k = {k_lo} .. {k_hi + 1} consecutively")
    g = np.array([r.gamma for r in records[i_lo:i_hi + 1]])
    delta = np.diff(g)
    order = np.argsort(delta, kind="stable")
    entries = [(k_lo + int(i), float(delta[i])) for i in order[:count]]
    nxt = float(delta[order[count]]) if count < delta.size else None
    return GapReport(entries, _floor_1sig(nxt) if nxt else None, nxt, k_lo, k_hi)


def recommend_dx(report: GapReport, safety: float = 0.5) -> float:
    """safety * floor: the horizontal step the gap statistics support."""
    if not 0 < safety <= 1:
        raise ValueError("safety must lie in (0, 1]")
    if report.floor is None:
        raise ValueError("report has no gap floor")
    return safety * report.floor
