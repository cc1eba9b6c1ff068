"""Linear probe susceptibility of the tripod medium.

The closed-form response is

    chi = -C * a*b * (D - i*gamma01**q * a*b) / (D**2 + gamma01**2 * a**2 * b**2)

with ``a = dp - delta1``, ``b = dp - delta2`` and
``D = dp*a*b - omega1**2 * b - omega2**2 * a``.  ``q`` is 2 for the
``paper-verbatim`` variant and 1 for ``linear-gamma``; they coincide for the
scaled rate ``gamma01 = 1``.  Dividing through by ``a*b`` gives the reduced form
``chi = C * i / (gamma01 - i*X)`` with ``X = dp - omega1**2/a - omega2**2/b``,
which is evaluated in exact rational arithmetic at removable singularities and
wherever the float expression over- or underflows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Literal

import numpy as np

from .atom import AtomParams, solve_weak_probe_coherences
from .errors import NonFinite, ValidationError

__all__ = [
    "SusceptibilityModel",
    "ComplexResponse",
    "chi_analytic",
    "transparency_windows",
    "dispersion_slope",
    "VARIANTS",
]

VARIANTS = ("paper-verbatim", "linear-gamma")


@dataclass(frozen=True)
class SusceptibilityModel:
    """Prefactor and formula options for the susceptibility.

    Attributes
    ----------
    prefactor : float
        Positive constant standing in for the density-dipole product.
    variant : {"paper-verbatim", "linear-gamma"}
        Power of gamma01 in the absorptive numerator term (2 or 1).
    include_ground_decay : bool
        Evaluate through the weak-probe linear solve, which keeps the
        ground-coherence decay rates gamma12 and gamma13.
    """

    prefactor: float = 1.0
    variant: Literal["paper-verbatim", "linear-gamma"] = "paper-verbatim"
    include_ground_decay: bool = False

    def __post_init__(self):
        if isinstance(self.prefactor, bool) or not isinstance(self.prefactor, (int, float)):
            raise ValidationError("model.prefactor", "must be a real number")
        if not (np.isfinite(self.prefactor) and self.prefactor > 0):
            raise ValidationError("model.prefactor", "> 0")
        if self.variant not in VARIANTS:
            raise ValidationError("model.variant", f"one of {', '.join(VARIANTS)}")
        if not isinstance(self.include_ground_decay, bool):
            raise ValidationError("model.include_ground_decay", "must be a boolean")


@dataclass(frozen=True)
class ComplexResponse:
    """Dispersive (``re``) and absorptive (``im``) parts; arrays for grid input."""

    re: float | np.ndarray
    im: float | np.ndarray

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self):
        return np.hypot(self.re, self.im)


def _chi_exact(dp: float, p: AtomParams, variant: str) -> complex:
    """Reduced form -(X - i gamma^q)/(X^2 + gamma^2) in exact rational arithmetic.

    Used only where the float formula is 0/0 or over/underflows.
    """
    if not np.isfinite(dp):
        return complex(np.nan, np.nan)
    x = Fraction(dp)
    for omega, delta in ((p.omega1, p.delta1), (p.omega2, p.delta2)):
        if omega > 0:
            x -= Fraction(omega) ** 2 / (Fraction(dp) - Fraction(delta))
    gamma = Fraction(p.gamma01)
    num_gamma = gamma**2 if variant == "paper-verbatim" else gamma
    denom = x * x + gamma * gamma
    return complex(float(-x / denom), float(num_gamma / denom))


def _chi_rational(dp: np.ndarray, p: AtomParams, m: SusceptibilityModel) -> np.ndarray:
    gamma = p.gamma01
    num_gamma = gamma**2 if m.variant == "paper-verbatim" else gamma
    o1sq, o2sq = p.omega1**2, p.omega2**2
    a = dp - p.delta1
    b = dp - p.delta2

    on_window = ((a == 0) & (p.omega1 > 0)) | ((b == 0) & (p.omega2 > 0))
    # 0/0 when a control is off and the probe sits on its window
    removable = (((a == 0) & (p.omega1 == 0)) | ((b == 0) & (p.omega2 == 0))) & ~on_window
    regular = ~(on_window | removable)

    chi = np.zeros(dp.shape, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ar, br, dr = a[regular], b[regular], dp[regular]
        ab = ar * br
        d = dr * ab - o1sq * br - o2sq * ar
        chi[regular] = -ab * (d - 1j * num_gamma * ab) / (d**2 + gamma**2 * ab**2)
        # (a*b)**2 under- or overflows: same value via the reduced form
        underflow = regular & ~np.isfinite(chi)
        removable = removable | underflow

    for n in np.flatnonzero(removable):
        chi.flat[n] = _chi_exact(float(dp.flat[n]), p, m.variant)
    return m.prefactor * chi


def _chi_weak_probe(dp: np.ndarray, p: AtomParams, m: SusceptibilityModel) -> np.ndarray:
    probe = p if p.g > 0 else replace(p, g=1.0)
    out = np.empty(dp.shape, dtype=complex)
    for n, value in enumerate(dp.flat):
        rho10, _, _ = solve_weak_probe_coherences(replace(probe, delta_p=float(value)))
        out.flat[n] = rho10 / probe.g
    return m.prefactor * out


def chi_analytic(delta_p, p: AtomParams, m: SusceptibilityModel = SusceptibilityModel()) -> ComplexResponse:
    """Linear susceptibility at probe detuning(s) ``delta_p``.

    ``delta_p`` may be a scalar or an array; ``p.delta_p`` is ignored.
    Exact transparency points (``a = 0`` or ``b = 0`` with the matching control
    on) return exactly zero; removable 0/0 points fall back to the reduced
    formula for the remaining Lambda or two-level system.
    """
    scalar = np.ndim(delta_p) == 0
    dp = np.atleast_1d(np.asarray(delta_p, dtype=float))
    if m.include_ground_decay:
        chi = _chi_weak_probe(dp, p, m)
    else:
        chi = _chi_rational(dp, p, m)
    if scalar:
        return ComplexResponse(float(chi[0].real), float(chi[0].imag))
    return ComplexResponse(chi.real, chi.imag)


def transparency_windows(p: AtomParams) -> list[float]:
    """Probe detunings at which a driven ground state makes the medium transparent."""
    windows = set()
    if p.omega1 > 0:
        windows.add(float(p.delta1))
    if p.omega2 > 0:
        windows.add(float(p.delta2))
    return sorted(windows)


def dispersion_slope(
    delta_p: float,
    p: AtomParams,
    m: SusceptibilityModel = SusceptibilityModel(),
    h: float = 1e-5,
) -> float:
    """Central-difference estimate of d(chi')/d(omega_p) at ``delta_p``."""
    if not h > 0:
        raise ValueError("h must be positive")
    if not np.isfinite(delta_p):
        raise NonFinite(f"non-finite probe detuning {delta_p!r}", float(delta_p))
    points = np.array([delta_p - h, delta_p + h])
    chi = chi_analytic(points, p, m)
    if not np.all(np.isfinite(chi.re)):
        bad = float(points[~np.isfinite(chi.re)][0])
        raise NonFinite(f"non-finite susceptibility at delta_p={bad!r}", bad)
    slope = (chi.re[1] - chi.re[0]) / (2 * h)
    if not np.isfinite(slope):
        raise NonFinite(f"non-finite slope at delta_p={delta_p!r}", delta_p)
    return float(slope)
