"""PhaseRecord CSV persistence with lossless float round-trip."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

from .argtrack import Flag, PhaseRecord
from .errors import ParseError
from .stats import arg_convention_raw, arg_paper_raw

COLUMNS = ["k", "gamma", "re_zp", "im_zp", "winding", "continuous_arg",
           "arg_paper_raw", "arg_convention_raw", "flags", "vertical_arg"]


def fmt(x: float) -> str:
    return f"{x:.17g}"


def write_records(records: Iterable[PhaseRecord], agrees: Sequence[bool] | None = None) -> str:
    """CSV text, rows in input order; ``agrees`` adds a winding_agrees column."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS + (["winding_agrees"] if agrees is not None else []))
    for i, r in enumerate(records):
        row = [r.k, fmt(r.gamma), fmt(r.zeta_prime.real), fmt(r.zeta_prime.imag), r.winding,
               fmt(r.continuous_arg), fmt(arg_paper_raw(r)), fmt(arg_convention_raw(r)),
               r.flags.to_str(), fmt(r.vertical_arg)]
        if agrees is not None:
            row.append(int(agrees[i]))
        w.writerow(row)
    return buf.getvalue()


def read_records(text: str) -> list[PhaseRecord]:
    rows = csv.reader(io.StringIO(text))
    header = next(rows, None)
    if header is None:
        return []
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise ParseError(f"records header lacks {', '.join(missing)}", 1)
    col = {name: i for i, name in enumerate(header)}
    out = []
    for lineno, row in enumerate(rows, start=2):
        if not row:
            continue
        try:
            out.append(PhaseRecord(
                k=int(row[col["k"]]),
                gamma=float(row[col["gamma"]]),
                zeta_prime=complex(float(row[col["re_zp"]]), float(row[col["im_zp"]])),
                winding=int(row[col["winding"]]),
                continuous_arg=float(row[col["continuous_arg"]]),
                vertical_arg=float(row[col["vertical_arg"]]),
                flags=Flag.parse(row[col["flags"]]),
            ))
        except (ValueError, IndexError, KeyError) as exc:
            raise ParseError(f"bad record row: {exc}", lineno) from None
    return out
