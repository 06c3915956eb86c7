"""Continuous arguments of zeta'(rho) at the nontrivial zeros of zeta."""

__version__ = "0.1.0"

from .argtrack import Flag, PathConfig, PhaseRecord, phase_at_zero, phase_batch, track_zeta_arg
from .core import EvalConfig, chi, hardy_Z, reflect_zeta, theta, zeta, zeta_deriv
from .phaseplot import RegionSpec, render_phase, verify_winding
from .stats import Kind, moments, normalize
from .zeros import ZeroRecord, find_zeros, import_zeros, scan_min_gaps

__all__ = [
    "EvalConfig", "Flag", "Kind", "PathConfig", "PhaseRecord", "RegionSpec", "ZeroRecord",
    "chi", "find_zeros", "hardy_Z", "import_zeros", "moments", "normalize", "phase_at_zero",
    "phase_batch", "reflect_zeta", "render_phase", "scan_min_gaps", "theta", "track_zeta_arg",
    "verify_winding", "zeta", "zeta_deriv",
]
