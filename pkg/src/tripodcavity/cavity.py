"""Ring-cavity transmission with an intracavity dispersive medium.

The cavity is described by dimensionless couplings only: the physical cavity
length, cell length and absorption coefficient never appear separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DivisionByZero, NegativeAbsorption, ValidationError

__all__ = [
    "CavityParams",
    "round_trip_phase",
    "round_trip_absorption",
    "transmission",
    "transmission_bounds",
    "empty_cavity_fwhm_phase",
    "linewidth_ratio",
    "lock_to",
]


@dataclass(frozen=True)
class CavityParams:
    """Ring-cavity parameters.

    Attributes
    ----------
    r : float
        Amplitude reflectivity of the input and output mirrors.
    beta : float
        Empty-cavity phase slope d(phase)/d(delta_p), in 1/gamma01.
    xi : float
        Phase shift per unit chi'.
    eta : float
        Exponent of the round-trip amplitude loss per unit chi''.
    theta0 : float
        Round-trip phase at delta_p = 0 with no medium (radians).
    k_ratio : float
        Dispersive coupling of the linewidth-ratio formula, in gamma01.
    """

    r: float = 0.98
    beta: float = 1.0
    xi: float = 1.364
    eta: float = 2.0
    theta0: float = 0.0
    k_ratio: float = 1.364

    def __post_init__(self):
        for name in ("r", "beta", "xi", "eta", "theta0", "k_ratio"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(f"cavity.{name}", "must be a finite real number")
        if not 0 < self.r < 1:
            raise ValidationError("cavity.r", "0 < r < 1")
        for name in ("beta", "xi", "eta", "k_ratio"):
            if getattr(self, name) < 0:
                raise ValidationError(f"cavity.{name}", ">= 0")

    @property
    def t2(self) -> float:
        """Mirror intensity transmittance, 1 - r**2."""
        return 1.0 - self.r**2


def lock_to(c: CavityParams, delta_p: float) -> CavityParams:
    """Return ``c`` with the empty-cavity resonance moved to ``delta_p``."""
    return replace(c, theta0=-c.beta * delta_p)


def round_trip_phase(delta_p, chi_re, c: CavityParams):
    return c.theta0 + c.beta * delta_p + c.xi * chi_re


def round_trip_absorption(chi_im, c: CavityParams):
    """Round-trip amplitude factor exp(-eta * chi'')."""
    chi_im = np.asarray(chi_im, dtype=float)
    if np.any(chi_im < -1e-9):
        raise NegativeAbsorption(f"chi'' = {float(np.min(chi_im))!r} < 0 (gain is not modelled)")
    kappa = np.exp(-c.eta * chi_im)
    return float(kappa) if kappa.ndim == 0 else kappa


def transmission(phase, kappa, c: CavityParams):
    """Airy transmission t^2 / (1 + r^2 kappa^2 - 2 r kappa cos(phase))."""
    r = c.r
    return c.t2 / (1.0 + r * r * kappa * kappa - 2.0 * r * kappa * np.cos(phase))


def transmission_bounds(kappa, c: CavityParams):
    """(min, max) of :func:`transmission` over all phases for a given ``kappa``."""
    rk = c.r * np.asarray(kappa)
    return c.t2 / (1 + rk) ** 2, c.t2 / (1 - rk) ** 2


def empty_cavity_fwhm_phase(c: CavityParams) -> float:
    """Full width, in round-trip phase, of a lossless resonance at half maximum."""
    r = c.r
    return 2.0 * math.acos((4 * r - 1 - r * r) / (2 * r))


def linewidth_ratio(slope_single: float, slope_double: float, k_ratio: float) -> float:
    """Double-dark to single-dark cavity linewidth ratio.

    Evaluates ``(1 + k*ss) / (1 + k*sd)``; ``k_ratio = inf`` gives the
    dispersion-dominated limit ``ss / sd``.
    """
    if math.isinf(k_ratio):
        if not slope_double > 0:
            raise DivisionByZero(f"dispersion-limited ratio needs slope_double > 0, got {slope_double!r}")
        return slope_single / slope_double
    denominator = 1.0 + k_ratio * slope_double
    if not denominator > 0:
        raise DivisionByZero(f"1 + k*slope_double = {denominator!r} is not positive")
    return (1.0 + k_ratio * slope_single) / denominator
