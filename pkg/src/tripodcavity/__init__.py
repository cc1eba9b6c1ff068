"""Tripod-atom dark resonances and the transmission of a ring cavity containing them."""

from .atom import (
    AtomParams,
    DensityMatrix,
    assemble_steady_state_system,
    evolve_to_steady_state,
    solve_steady_state,
    solve_weak_probe_coherences,
)
from .cavity import (
    CavityParams,
    empty_cavity_fwhm_phase,
    linewidth_ratio,
    round_trip_absorption,
    round_trip_phase,
    transmission,
)
from .spectra import Peak, ScanGrid, Spectrum, find_peaks, linewidth_report, sweep
from .susceptibility import SusceptibilityModel, chi_analytic, dispersion_slope, transparency_windows

__version__ = "0.1.0"

__all__ = [
    "AtomParams",
    "DensityMatrix",
    "assemble_steady_state_system",
    "evolve_to_steady_state",
    "solve_steady_state",
    "solve_weak_probe_coherences",
    "CavityParams",
    "empty_cavity_fwhm_phase",
    "linewidth_ratio",
    "round_trip_absorption",
    "round_trip_phase",
    "transmission",
    "Peak",
    "ScanGrid",
    "Spectrum",
    "find_peaks",
    "linewidth_report",
    "sweep",
    "SusceptibilityModel",
    "chi_analytic",
    "dispersion_slope",
    "transparency_windows",
]
