"""Command-line front end.

Every file-producing command writes ``<--out>.manifest.json`` recording the
resolved flags, configuration snapshots and input/output digests;
``zetaphase rerun <manifest>`` replays it and compares digests.
Flag values fall back to ``ZP_<FLAG>`` environment variables, then defaults.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .argtrack import PathConfig, phase_batch
from .core import EvalConfig, chi, hardy_Z, theta, zeta, zeta_deriv
from .errors import ZetaPhaseError
from .phaseplot import RegionSpec, render_phase
from .records import fmt, read_records, write_records
from .stats import HistogramSpec, Kind, histogram, moments, normalize
from .zeros import (export_zeros, find_zeros_parallel, import_zeros, recommend_dx,
                    scan_min_gaps)

log = logging.getLogger("zetaphase")

EXIT_OK, EXIT_DOMAIN, EXIT_STATS, EXIT_IO = 0, 2, 3, 4


@dataclass
class RunManifest:
    subcommand: str
    flags: dict
    eval_config: dict | None = None
    path_config: dict | None = None
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    version: str = __version__
    wall_time: float = 0.0
    records: int | None = None
    flagged: int | None = None

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path: Path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))


def digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def format_complex(z: complex) -> str:
    sign = "-" if math.copysign(1.0, z.imag) < 0 and z.imag != 0 else "+"
    return f"{fmt(z.real)} {sign} {fmt(abs(z.imag))}i"


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _env(name: str, conv, default):
    raw = os.environ.get("ZP_" + name.upper())
    if raw is None:
        return default
    try:
        return conv(raw)
    except ValueError:
        raise SystemExit(f"zetaphase: bad value for ZP_{name.upper()}: {raw!r}") from None


def _add_eval_flags(p):
    d = EvalConfig()
    g = p.add_argument_group("evaluation")
    g.add_argument("--em-terms-factor", type=float,
                   default=_env("em_terms_factor", float, d.em_terms_factor))
    g.add_argument("--bernoulli-depth", type=int,
                   default=_env("bernoulli_depth", int, d.bernoulli_depth))
    g.add_argument("--target-abs-error", type=float,
                   default=_env("target_abs_error", float, d.target_abs_error))


def _add_path_flags(p):
    d = PathConfig()
    g = p.add_argument_group("path")
    g.add_argument("--dx", type=float, default=_env("dx", float, d.dx))
    g.add_argument("--sigma-start", type=float, default=_env("sigma_start", float, d.sigma_start))
    g.add_argument("--slip-threshold", type=float,
                   default=_env("slip_threshold", float, d.slip_threshold))
    g.add_argument("--max-refine-depth", type=int,
                   default=_env("max_refine_depth", int, d.max_refine_depth))


def _add_source_flags(p, find: bool = True):
    src = p.add_mutually_exclusive_group(required=True)
    if find:
        src.add_argument("--find", nargs=2, type=float, metavar=("T_LO", "T_HI"))
    src.add_argument("--import", dest="import_file", metavar="FILE")
    p.add_argument("--format", choices=["plain", "indexed"], default="indexed")
    p.add_argument("--first-index", type=int, default=None)
    p.add_argument("--k-range", nargs=2, type=int, metavar=("K_LO", "K_HI"),
                   help="keep only records with K_LO <= k <= K_HI")


def _jobs(p):
    p.add_argument("--jobs", type=int, default=_env("jobs", int, 1))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zetaphase", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate zeta and friends at one point")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--s", type=parse_complex)
    where.add_argument("--t", type=float, help="point 1/2 + it on the critical line")
    for name in ("zeta", "deriv", "chi", "theta", "Z"):
        p.add_argument(f"--{name}", action="store_true")
    _add_eval_flags(p)

    p = sub.add_parser("zeros", help="find or import zero ordinates")
    _add_source_flags(p)
    p.add_argument("--out")
    _jobs(p)
    _add_eval_flags(p)

    p = sub.add_parser("phase", help="continuous arg zeta'(rho) for a batch of zeros")
    _add_source_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--dx-check", action="store_true", help="also run at dx/2 and compare windings")
    _jobs(p)
    _add_path_flags(p)
    _add_eval_flags(p)

    p = sub.add_parser("stats", help="normalized moments and histogram of a records CSV")
    p.add_argument("records")
    p.add_argument("--N-ref", dest="N_ref", type=float, default=_env("n_ref", float, None))
    p.add_argument("--kind", type=Kind, default=Kind.LOGMOD_HEJHAL,
                   choices=[Kind.LOGMOD_HEJHAL, Kind.ARG_PAPER, Kind.ARG_CONVENTION],
                   metavar="{LOGMOD_HEJHAL,ARG_PAPER,ARG_CONVENTION}")
    p.add_argument("--hist", nargs=3, metavar=("LO", "HI", "BINS"))
    p.add_argument("--out", required=True, help="output prefix")
    p.add_argument("--include-flagged", action="store_true")
    p.add_argument("--theorem-form", action="store_true", help="scale by sqrt(log log N / 2)")

    p = sub.add_parser("gaps", help="smallest consecutive gaps of a zero table")
    _add_source_flags(p, find=False)
    p.add_argument("--k", nargs=2, type=int, required=True, metavar=("K_LO", "K_HI"))
    p.add_argument("--count", type=int, default=7)
    p.add_argument("--safety", type=float, default=0.5)
    p.add_argument("--out")

    p = sub.add_parser("plot", help="phase portrait of zeta as PPM or PNG")
    p.add_argument("--region", nargs=4, type=float, required=True,
                   metavar=("SIGMA_LO", "SIGMA_HI", "T_LO", "T_HI"))
    p.add_argument("--px", nargs=2, type=int, default=[450, 450], metavar=("W", "H"))
    p.add_argument("--out", required=True)
    _jobs(p)
    _add_eval_flags(p)

    p = sub.add_parser("rerun", help="replay a run manifest and compare output digests")
    p.add_argument("manifest")
    p.add_argument("--out", help="write to this path instead of the recorded one")
    p.add_argument("--jobs", type=int, default=None)
    return ap


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _ecfg(a) -> EvalConfig:
    return EvalConfig(em_terms_factor=a.em_terms_factor, bernoulli_depth=a.bernoulli_depth,
                      target_abs_error=a.target_abs_error)


def _pcfg(a) -> PathConfig:
    return PathConfig(dx=a.dx, sigma_start=a.sigma_start, slip_threshold=a.slip_threshold,
                      max_refine_depth=a.max_refine_depth)


def _load_zeros(a, ecfg, manifest):
    if getattr(a, "find", None):
        zs = find_zeros_parallel(a.find[0], a.find[1], ecfg, jobs=a.jobs)
    else:
        if a.format == "plain" and a.first_index is None:
            raise ZetaPhaseError("--format plain needs --first-index")
        path = Path(a.import_file)
        manifest.inputs[str(path)] = digest(path)
        with open(path, "rb") as fh:
            zs = import_zeros(fh, a.format, a.first_index)
    if a.k_range:
        zs = [z for z in zs if a.k_range[0] <= z.k <= a.k_range[1]]
    return zs


def cmd_eval(a, manifest) -> list[str]:
    ecfg = _ecfg(a)
    s = a.s if a.s is not None else complex(0.5, a.t)
    want = [n for n in ("zeta", "deriv", "chi", "theta", "Z") if getattr(a, n)] or ["zeta"]
    lines = []
    for name in want:
        if name == "zeta":
            lines.append(f"zeta = {format_complex(zeta(s, ecfg))}")
        elif name == "deriv":
            lines.append(f"zeta' = {format_complex(zeta_deriv(s, ecfg))}")
        elif name == "chi":
            lines.append(f"chi = {format_complex(complex(chi(s)))}")
        else:
            if s.real != 0.5:
                raise ZetaPhaseError(f"--{name} needs a point on the critical line (use --t)")
            if name == "theta":
                lines.append(f"theta = {fmt(theta(s.imag).theta)}")
            else:
                lines.append(f"Z = {fmt(hardy_Z(s.imag, ecfg))}")
    print("\n".join(lines))
    return []


def cmd_zeros(a, manifest) -> list[Path]:
    ecfg = _ecfg(a)
    manifest.eval_config = ecfg.as_dict()
    zs = _load_zeros(a, ecfg, manifest)
    manifest.records = len(zs)
    text = export_zeros(zs)
    if a.out is None:
        sys.stdout.write(text)
        return []
    out = Path(a.out)
    out.write_text(text)
    return [out]


def cmd_phase(a, manifest) -> list[Path]:
    ecfg, pcfg = _ecfg(a), _pcfg(a)
    manifest.eval_config, manifest.path_config = ecfg.as_dict(), pcfg.as_dict()
    zs = _load_zeros(a, ecfg, manifest)
    recs = phase_batch(zs, pcfg, ecfg, jobs=a.jobs)
    agrees = None
    if a.dx_check:
        fine = phase_batch(zs, pcfg.halved(), ecfg, jobs=a.jobs)
        agrees = [r.winding == f.winding for r, f in zip(recs, fine)]
        bad = agrees.count(False)
        log.info("dx check: %d of %d windings disagree", bad, len(recs))
    manifest.records = len(recs)
    manifest.flagged = sum(r.flagged for r in recs)
    out = Path(a.out)
    out.write_text(write_records(recs, agrees))
    return [out]


def cmd_stats(a, manifest) -> list[Path]:
    if a.N_ref is None:
        raise ZetaPhaseError("--N-ref (or ZP_N_REF) is required")
    path = Path(a.records)
    manifest.inputs[str(path)] = digest(path)
    recs = read_records(path.read_text())
    manifest.records = len(recs)
    manifest.flagged = sum(r.flagged for r in recs)
    samples = normalize(recs, a.kind, a.N_ref, a.theorem_form)
    exclude = not a.include_flagged
    rep = moments(samples, exclude_flagged=exclude)
    spec = HistogramSpec(float(a.hist[0]), float(a.hist[1]), int(a.hist[2])) if a.hist else HistogramSpec()
    h = histogram(samples, spec, exclude_flagged=exclude)
    prefix = a.out
    mpath, hpath = Path(prefix + ".moments.json"), Path(prefix + ".hist.csv")
    mpath.write_text(json.dumps(rep.as_dict(), indent=2) + "\n")
    rows = ["bin_lo,bin_hi,count,density,gauss_ref"]
    for i in range(spec.bins):
        rows.append(",".join([fmt(h.edges[i]), fmt(h.edges[i + 1]), str(int(h.counts[i])),
                              fmt(h.density[i]), fmt(h.gauss_ref[i])]))
    hpath.write_text("\n".join(rows) + "\n")
    if h.below or h.above:
        log.warning("%d samples below and %d above the histogram range", h.below, h.above)
    return [mpath, hpath]


def cmd_gaps(a, manifest) -> list[Path]:
    zs = _load_zeros(a, None, manifest)
    manifest.records = len(zs)
    rep = scan_min_gaps(zs, a.k[0], a.k[1], a.count)
    by_k = {z.k: z.gamma for z in zs}
    rows = ["k,gamma_k,gamma_k_plus_1,delta"]
    for k, d in rep.entries:
        rows.append(f"{k},{fmt(by_k[k])},{fmt(by_k[k + 1])},{fmt(d)}")
    text = "\n".join(rows) + "\n"
    summary = f"floor = {rep.floor}"
    if rep.floor is not None:
        summary += f", next gap = {fmt(rep.next_gap)}, recommended dx = {fmt(recommend_dx(rep, a.safety))}"
    print(summary, file=sys.stderr)
    if a.out is None:
        sys.stdout.write(text)
        return []
    out = Path(a.out)
    out.write_text(text)
    return [out]


def cmd_plot(a, manifest) -> list[Path]:
    ecfg = _ecfg(a)
    manifest.eval_config = ecfg.as_dict()
    region = RegionSpec(*a.region, *a.px)
    portrait = render_phase(region, ecfg, jobs=a.jobs)
    out = Path(a.out)
    if out.suffix.lower() == ".png":
        portrait.save_png(out)
    else:
        out.write_bytes(portrait.to_ppm())
    manifest.records = region.width_px * region.height_px
    manifest.flagged = int(np.isnan(portrait.arg).sum())
    return [out]


COMMANDS = {"eval": cmd_eval, "zeros": cmd_zeros, "phase": cmd_phase, "stats": cmd_stats,
            "gaps": cmd_gaps, "plot": cmd_plot}


def _flags(a) -> dict:
    return {k: (v.value if isinstance(v, Kind) else v) for k, v in vars(a).items()
            if k not in ("verbose",)}


def run(a) -> int:
    manifest = RunManifest(a.command, _flags(a))
    t0 = time.perf_counter()
    outputs = COMMANDS[a.command](a, manifest)
    if not outputs:
        return EXIT_OK
    manifest.wall_time = time.perf_counter() - t0
    manifest.outputs = {str(p): digest(p) for p in outputs}
    manifest.write(Path(str(a.out) + ".manifest.json"))
    return EXIT_OK


def rerun(a) -> int:
    m = RunManifest.read(Path(a.manifest))
    for path, want in m.inputs.items():
        if digest(path) != want:
            print(f"zetaphase: input {path} changed since the recorded run", file=sys.stderr)
            return EXIT_IO
    flags = dict(m.flags)
    if "kind" in flags:
        flags["kind"] = Kind(flags["kind"])
    if a.jobs is not None and "jobs" in flags:
        flags["jobs"] = a.jobs
    recorded = list(m.outputs)
    if a.out:
        flags["out"] = a.out
    ns = argparse.Namespace(verbose=False, **flags)
    manifest = RunManifest(ns.command, _flags(ns))
    outputs = COMMANDS[ns.command](ns, manifest)
    same = True
    for old, new in zip(recorded, outputs):
        ok = digest(new) == m.outputs[old]
        same &= ok
        print(f"{new}: {'identical' if ok else 'DIFFERS'}")
    return EXIT_OK if same else EXIT_DOMAIN


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="zetaphase: %(message)s")
    try:
        return rerun(a) if a.command == "rerun" else run(a)
    except ZetaPhaseError as exc:
        print(f"zetaphase: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"zetaphase: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"zetaphase: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
