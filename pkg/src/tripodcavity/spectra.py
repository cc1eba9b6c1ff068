"""Detuning sweeps, peak finding and linewidth extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .atom import AtomParams
from .cavity import (
    CavityParams,
    linewidth_ratio,
    lock_to,
    round_trip_absorption,
    round_trip_phase,
    transmission,
)
from .errors import MissingPeak, NonFinite, TooCoarse, ValidationError
from .susceptibility import SusceptibilityModel, chi_analytic, dispersion_slope, transparency_windows

__all__ = [
    "ScanGrid",
    "Spectrum",
    "Peak",
    "LinewidthReport",
    "COLUMNS",
    "sweep",
    "find_peaks",
    "linewidth_report",
]

COLUMNS = ("delta_p", "chi_re", "chi_im", "phase", "kappa", "transmission")
REFINE_HALF_WIDTH = 0.05
MIN_SAMPLES_ABOVE_HALF = 5


@dataclass(frozen=True)
class ScanGrid:
    """Uniform detuning grid, optionally densified around transparency windows."""

    start: float = -4.0
    stop: float = 4.0
    points: int = 801
    refine_windows: bool = True
    refine_step: float = 2e-4

    def __post_init__(self):
        for name in ("start", "stop", "refine_step"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"scan.{name}", "must be a finite real number")
        if not self.start < self.stop:
            raise ValidationError("scan.start", "start < stop")
        if isinstance(self.points, bool) or not isinstance(self.points, int) or self.points < 2:
            raise ValidationError("scan.points", "integer >= 2")
        if not isinstance(self.refine_windows, bool):
            raise ValidationError("scan.refine_windows", "must be a boolean")
        if not 0 < self.refine_step <= 2e-4:
            raise ValidationError("scan.refine_step", "0 < refine_step <= 2e-4")

    def abscissae(self, windows=()) -> np.ndarray:
        """Strictly increasing sample points; dense sub-grids include each window exactly."""
        base = np.linspace(self.start, self.stop, self.points)
        if not self.refine_windows:
            return base
        n = math.ceil(REFINE_HALF_WIDTH / self.refine_step)
        offsets = np.arange(-n, n + 1) * self.refine_step
        inside = np.unique([w for w in windows if self.start <= w <= self.stop])
        if not len(inside):
            return base
        others = np.concatenate([base] + [w + offsets for w in inside])
        others = np.unique(others[(others >= self.start) & (others <= self.stop)])
        # windows are kept exactly; other samples within rounding distance of one are dropped
        idx = np.clip(np.searchsorted(inside, others), 1, max(len(inside) - 1, 1))
        nearest = np.abs(others - inside[idx - 1])
        if len(inside) > 1:
            nearest = np.minimum(nearest, np.abs(others - inside[idx]))
        others = others[nearest > 1e-9]
        others = others[np.concatenate([[True], np.diff(others) > 1e-9])]
        return np.unique(np.concatenate([inside, others]))


@dataclass(frozen=True)
class Spectrum:
    """Sampled medium and cavity response, one array per column of :data:`COLUMNS`."""

    delta_p: np.ndarray
    chi_re: np.ndarray
    chi_im: np.ndarray
    phase: np.ndarray
    kappa: np.ndarray
    transmission: np.ndarray

    def __len__(self) -> int:
        return len(self.delta_p)

    def column(self, name: str) -> np.ndarray:
        if name not in COLUMNS:
            raise KeyError(f"unknown column {name!r}; expected one of {COLUMNS}")
        return getattr(self, name)

    def rows(self):
        return zip(*(self.column(name) for name in COLUMNS))

    @classmethod
    def from_rows(cls, rows) -> Spectrum:
        data = np.asarray(list(rows), dtype=float).reshape(-1, len(COLUMNS))
        return cls(*(data[:, n].copy() for n in range(len(COLUMNS))))


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    fwhm: float | None = None
    left_half: float | None = None
    right_half: float | None = None


@dataclass(frozen=True)
class LinewidthReport:
    fwhm_s: float
    fwhm_d: float
    measured_ratio: float
    eq4_ratio: float
    slope_single: float
    slope_double: float
    center_single: float
    center_double: float
    peak_single: Peak = field(repr=False)
    peak_double: Peak = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "fwhm_s": self.fwhm_s,
            "fwhm_d": self.fwhm_d,
            "measured_ratio": self.measured_ratio,
            "eq4_ratio": self.eq4_ratio,
            "slope_single": self.slope_single,
            "slope_double": self.slope_double,
            "center_single": self.center_single,
            "center_double": self.center_double,
        }


def sweep(
    grid: ScanGrid,
    p: AtomParams,
    m: SusceptibilityModel = SusceptibilityModel(),
    c: CavityParams = CavityParams(),
) -> Spectrum:
    """Evaluate susceptibility, round-trip phase/loss and transmission on ``grid``."""
    x = grid.abscissae(transparency_windows(p))
    chi = chi_analytic(x, p, m)
    bad = ~(np.isfinite(chi.re) & np.isfinite(chi.im))
    if np.any(bad):
        where = float(x[bad][0])
        raise NonFinite(f"non-finite susceptibility at delta_p={where!r}", where)
    phase = round_trip_phase(x, chi.re, c)
    kappa = round_trip_absorption(chi.im, c)
    return Spectrum(x, chi.re, chi.im, phase, kappa, transmission(phase, kappa, c))


def _apex(x: np.ndarray, y: np.ndarray) -> float:
    """Vertex of the parabola through three points, clamped to their span."""
    (x0, x1, x2), (y0, y1, y2) = x, y
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
    if not a < 0:
        return float(x1)
    return float(min(max(-b / (2 * a), x0), x2))


def _crossing(x: np.ndarray, y: np.ndarray, i: int, level: float, step: int) -> tuple[float | None, int]:
    """Walk from sample ``i`` in direction ``step`` to the first sample below ``level``."""
    j = i
    while 0 <= j + step < len(y) and y[j + step] >= level:
        j += step
    k = j + step
    if not 0 <= k < len(y):
        return None, j
    frac = (y[j] - level) / (y[j] - y[k])
    return float(x[j] + frac * (x[k] - x[j])), j


def find_peaks(s: Spectrum, min_height_fraction: float = 0.1, column: str = "transmission") -> list[Peak]:
    """Local maxima of ``column`` above ``min_height_fraction`` of its global maximum.

    Positions are refined by a three-point parabola; FWHM uses linear
    interpolation of the half-height crossings, measured against each peak's
    own height.

    Raises
    ------
    TooCoarse
        If a peak has fewer than five samples at or above its half height.
    """
    if not 0 < min_height_fraction < 1:
        raise ValueError("min_height_fraction must lie in (0, 1)")
    x = np.asarray(s.delta_p)
    y = np.asarray(s.column(column))
    if len(y) < 3:
        return []
    threshold = min_height_fraction * np.max(y)
    interior = np.arange(1, len(y) - 1)
    is_max = (y[interior] > y[interior - 1]) & (y[interior] >= y[interior + 1]) & (y[interior] >= threshold)

    peaks = []
    for i in interior[is_max]:
        height = float(y[i])
        position = _apex(x[i - 1:i + 2], y[i - 1:i + 2])
        half = 0.5 * height
        left, jl = _crossing(x, y, i, half, -1)
        right, jr = _crossing(x, y, i, half, +1)
        above = jr - jl + 1
        if above < MIN_SAMPLES_ABOVE_HALF:
            width = (right if right is not None else x[jr]) - (left if left is not None else x[jl])
            required = width / (2 * MIN_SAMPLES_ABOVE_HALF)
            raise TooCoarse(
                f"peak at delta_p={position:.6g} has {above} samples above half height; "
                f"use a step of at most {required:.3g}",
                position,
                required,
            )
        if left is None or right is None:
            peaks.append(Peak(position, height))
        else:
            peaks.append(Peak(position, height, right - left, left, right))
    return sorted(peaks, key=lambda pk: pk.position)


def _narrow_peak(peaks: list[Peak], center: float, label: str) -> Peak:
    measured = [pk for pk in peaks if pk.fwhm is not None]
    if not measured:
        raise MissingPeak(f"{label} configuration has no peak with a measurable FWHM")
    return min(measured, key=lambda pk: abs(pk.position - center))


def _window_center(p: AtomParams, prefer: str) -> float:
    windows = {"delta1": p.delta1 if p.omega1 > 0 else None, "delta2": p.delta2 if p.omega2 > 0 else None}
    center = windows[prefer]
    if center is None:
        center = next((w for w in windows.values() if w is not None), 0.0)
    return center


def linewidth_report(
    p_single: AtomParams,
    p_double: AtomParams,
    m: SusceptibilityModel = SusceptibilityModel(),
    c: CavityParams = CavityParams(),
    grid: ScanGrid = ScanGrid(),
    lock: bool = True,
    min_height_fraction: float = 0.1,
) -> LinewidthReport:
    """Compare simulated cavity linewidths with the dispersion-slope prediction.

    The single-dark peak is analysed at its window ``delta1`` and the
    double-dark narrow peak at ``delta2``.  With ``lock`` (the default) the
    empty-cavity resonance is moved onto each window before sweeping, so both
    linewidths are measured on resonance.
    """
    center_s = _window_center(p_single, "delta1")
    center_d = _window_center(p_double, "delta2")
    c_s = lock_to(c, center_s) if lock else c
    c_d = lock_to(c, center_d) if lock else c

    peak_s = _narrow_peak(find_peaks(sweep(grid, p_single, m, c_s), min_height_fraction), center_s, "single-dark")
    peak_d = _narrow_peak(find_peaks(sweep(grid, p_double, m, c_d), min_height_fraction), center_d, "double-dark")

    slope_s = dispersion_slope(center_s, p_single, m)
    slope_d = dispersion_slope(center_d, p_double, m)
    return LinewidthReport(
        fwhm_s=peak_s.fwhm,
        fwhm_d=peak_d.fwhm,
        measured_ratio=peak_d.fwhm / peak_s.fwhm,
        eq4_ratio=linewidth_ratio(slope_s, slope_d, c.k_ratio),
        slope_single=slope_s,
        slope_double=slope_d,
        center_single=center_s,
        center_double=center_d,
        peak_single=peak_s,
        peak_double=peak_d,
    )
