"""Density-matrix dynamics of the four-level tripod atom.

Level |0> is the excited state; |1>, |2>, |3> are ground sublevels coupled to
|0> by the probe (Rabi frequency ``g``) and the two control fields (``omega1``,
``omega2``).  All quantities are in units of the |0> -> |1> decay rate.

Three routes to the steady state are provided:

* :func:`solve_steady_state` solves the full 16x16 real linear system,
* :func:`solve_weak_probe_coherences` solves the first-order-in-probe 3x3 system,
* :func:`evolve_to_steady_state` integrates the equations of motion with a
  fixed-step RK4 scheme and serves as an independent oracle for the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import DegenerateSteadyState, InvalidStep, NotConverged, SingularWindow, ValidationError

__all__ = [
    "AtomParams",
    "DensityMatrix",
    "LinearSteadyStateSystem",
    "assemble_steady_state_system",
    "solve_steady_state",
    "solve_weak_probe_coherences",
    "liouvillian_rhs",
    "rk4_step",
    "max_stable_step",
    "evolve_to_steady_state",
    "COHERENCES",
]

# Independent off-diagonal elements, in unknown-vector order.
COHERENCES = ((1, 0), (2, 0), (3, 0), (1, 2), (1, 3), (2, 3))
N_UNKNOWNS = 16
RCOND_LIMIT = 1e-12


@dataclass(frozen=True)
class AtomParams:
    """Rates, Rabi frequencies and detunings of the tripod (units of gamma01).

    Defaults reproduce the double-dark configuration with a weak probe.
    """

    gamma01: float = 1.0
    gamma02: float = 1.0
    gamma03: float = 1.0
    gamma21: float = 1e-4
    gamma31: float = 1e-4
    gamma32: float = 1e-4
    gamma12: float = 1e-4
    gamma13: float = 1e-4
    gamma23: float = 1e-4
    g: float = 1e-3
    omega1: float = 2.0
    omega2: float = 0.3
    delta_p: float = 0.0
    delta1: float = -1.0
    delta2: float = 1.0

    RATES = ("gamma01", "gamma02", "gamma03", "gamma21", "gamma31", "gamma32", "gamma12", "gamma13", "gamma23")
    RABI = ("g", "omega1", "omega2")

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise ValidationError(f"atom.{f.name}", "must be a finite real number")
        for name in self.RATES + self.RABI:
            if getattr(self, name) < 0:
                raise ValidationError(f"atom.{name}", ">= 0")
        if self.gamma01 != 1.0:
            raise ValidationError("atom.gamma01", "fixed at 1 (all quantities are scaled by gamma01)")

    # complex decay factors of the coherences
    @property
    def Gamma10(self) -> complex:
        return complex(self.gamma01, -self.delta_p)

    @property
    def Gamma20(self) -> complex:
        return complex(self.gamma02, -self.delta1)

    @property
    def Gamma30(self) -> complex:
        return complex(self.gamma03, -self.delta2)

    @property
    def Gamma12(self) -> complex:
        return complex(self.gamma12, -(self.delta_p - self.delta1))

    @property
    def Gamma13(self) -> complex:
        return complex(self.gamma13, -(self.delta_p - self.delta2))

    @property
    def Gamma23(self) -> complex:
        return complex(self.gamma23, -(self.delta1 - self.delta2))

    def fastest_scale(self) -> float:
        """Largest rate, Rabi frequency or |detuning|, floored at 1."""
        values = [getattr(self, f.name) for f in fields(self)]
        return max(max(abs(v) for v in values), 1.0)


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 density matrix with the excited state at index 0."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got {rho.shape}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def pure(cls, level: int) -> DensityMatrix:
        rho = np.zeros((4, 4), dtype=complex)
        rho[level, level] = 1.0
        return cls(rho)

    @classmethod
    def from_vector(cls, x) -> DensityMatrix:
        """Rebuild from the 16 real unknowns (populations, then re/im pairs)."""
        x = np.asarray(x, dtype=float)
        rho = np.zeros((4, 4), dtype=complex)
        rho[np.diag_indices(4)] = x[:4]
        for n, (j, k) in enumerate(COHERENCES):
            z = complex(x[4 + 2 * n], x[5 + 2 * n])
            rho[j, k] = z
            rho[k, j] = z.conjugate()
        return cls(rho)

    def to_vector(self) -> np.ndarray:
        x = np.empty(N_UNKNOWNS)
        x[:4] = self.rho.diagonal().real
        for n, (j, k) in enumerate(COHERENCES):
            x[4 + 2 * n] = self.rho[j, k].real
            x[5 + 2 * n] = self.rho[j, k].imag
        return x

    def __getitem__(self, index) -> complex:
        return self.rho[index]

    def trace_error(self) -> float:
        return abs(np.trace(self.rho) - 1.0)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    def check(self, tol: float = 1e-12, diag_tol: float = 1e-10, populations: bool = True) -> None:
        """Raise ``ValueError`` unless Hermitian, unit-trace and with sane populations."""
        if self.hermiticity_error() > tol:
            raise ValueError(f"not Hermitian (error {self.hermiticity_error():.3g})")
        if self.trace_error() > tol:
            raise ValueError(f"trace differs from 1 by {self.trace_error():.3g}")
        diag = self.rho.diagonal()
        if np.max(np.abs(diag.imag)) > tol:
            raise ValueError("populations are not real")
        if populations and np.any(diag.real < -diag_tol) or np.any(diag.real > 1 + diag_tol):
            raise ValueError(f"populations outside [0, 1]: {diag.real}")


@dataclass(frozen=True)
class LinearSteadyStateSystem:
    """Real 16x16 system ``matrix @ x = rhs`` for the steady-state unknowns."""

    matrix: np.ndarray
    rhs: np.ndarray


def _unknown(j: int, k: int) -> tuple[int, bool]:
    """Map matrix element (j, k) to (index of its real part, conjugated?)."""
    if j == k:
        return j, False
    if (j, k) in COHERENCES:
        return 4 + 2 * COHERENCES.index((j, k)), False
    return 4 + 2 * COHERENCES.index((k, j)), True


def _equations(p: AtomParams) -> dict[tuple[int, int], list[tuple[complex, tuple[int, int]]]]:
    """Right-hand sides of the equations of motion as (coefficient, element) terms."""
    g, o1, o2 = p.g, p.omega1, p.omega2
    i = 1j
    return {
        (0, 0): [
            (-(p.gamma01 + p.gamma02 + p.gamma03), (0, 0)),
            (-i * g, (1, 0)), (i * g, (0, 1)),
            (-i * o1, (2, 0)), (i * o1, (0, 2)),
            (-i * o2, (3, 0)), (i * o2, (0, 3)),
        ],
        (1, 1): [
            (p.gamma01, (0, 0)), (p.gamma21, (2, 2)), (p.gamma31, (3, 3)),
            (-i * g, (0, 1)), (i * g, (1, 0)),
        ],
        (2, 2): [
            (p.gamma02, (0, 0)), (-p.gamma21, (2, 2)), (p.gamma32, (3, 3)),
            (-i * o1, (0, 2)), (i * o1, (2, 0)),
        ],
        (3, 3): [
            (p.gamma03, (0, 0)), (-(p.gamma31 + p.gamma32), (3, 3)),
            (-i * o2, (0, 3)), (i * o2, (3, 0)),
        ],
        (1, 0): [
            (-p.Gamma10, (1, 0)), (-i * g, (0, 0)), (i * g, (1, 1)),
            (i * o1, (1, 2)), (i * o2, (1, 3)),
        ],
        (2, 0): [
            (-p.Gamma20, (2, 0)), (-i * o1, (0, 0)), (i * g, (2, 1)),
            (i * o1, (2, 2)), (i * o2, (2, 3)),
        ],
        (3, 0): [
            (-p.Gamma30, (3, 0)), (-i * o2, (0, 0)), (i * g, (3, 1)),
            (i * o1, (3, 2)), (i * o2, (3, 3)),
        ],
        (1, 2): [(-p.Gamma12, (1, 2)), (-i * g, (0, 2)), (i * o1, (1, 0))],
        (1, 3): [(-p.Gamma13, (1, 3)), (-i * g, (0, 3)), (i * o2, (1, 0))],
        # The |2>-|3> coherence is driven by the control acting on |2>.
        (2, 3): [(-p.Gamma23, (2, 3)), (-i * o1, (0, 3)), (i * o2, (2, 0))],
    }


def assemble_steady_state_system(p: AtomParams) -> LinearSteadyStateSystem:
    """Vectorise the equations of motion into a real 16x16 linear system.

    Row ``n`` holds the time derivative of unknown ``n``; row 0 (the excited
    population) is replaced by the trace constraint.
    """
    matrix = np.zeros((N_UNKNOWNS, N_UNKNOWNS))
    for (j, k), terms in _equations(p).items():
        row, _ = _unknown(j, k)
        for c, (a, b) in terms:
            col, conj = _unknown(a, b)
            if a == b:
                matrix[row, col] += c.real
                if j != k:
                    matrix[row + 1, col] += c.imag
                continue
            s = -1.0 if conj else 1.0
            # c * (x + i s y)
            matrix[row, col] += c.real
            matrix[row, col + 1] -= s * c.imag
            if j != k:
                matrix[row + 1, col] += c.imag
                matrix[row + 1, col + 1] += s * c.real
    matrix[0, :] = 0.0
    matrix[0, :4] = 1.0
    rhs = np.zeros(N_UNKNOWNS)
    rhs[0] = 1.0
    return LinearSteadyStateSystem(matrix, rhs)


def solve_steady_state(p: AtomParams) -> DensityMatrix:
    """Exact steady state from the full linear system.

    Raises
    ------
    DegenerateSteadyState
        If the reciprocal condition number is below 1e-12, i.e. the steady
        state is not unique (e.g. no fields and no ground-state redistribution).
    """
    system = assemble_steady_state_system(p)
    rcond = 1.0 / np.linalg.cond(system.matrix)
    if not rcond > RCOND_LIMIT:
        raise DegenerateSteadyState(f"steady-state system is singular (rcond={rcond:.3g})")
    x = np.linalg.solve(system.matrix, system.rhs)
    return DensityMatrix.from_vector(x)


def solve_weak_probe_coherences(p: AtomParams) -> tuple[complex, complex, complex]:
    """First-order probe coherences (rho10, rho12, rho13) with all population in |1>."""
    if p.g <= 0:
        raise ValidationError("atom.g", "> 0 for the weak-probe solve")
    o1, o2 = p.omega1, p.omega2
    if p.Gamma12 == 0 and o1 == 0:
        raise SingularWindow("Gamma12 = 0 with omega1 = 0: rho12 is undetermined")
    if p.Gamma13 == 0 and o2 == 0:
        raise SingularWindow("Gamma13 = 0 with omega2 = 0: rho13 is undetermined")
    a = np.array([
        [-p.Gamma10, 1j * o1, 1j * o2],
        [1j * o1, -p.Gamma12, 0.0],
        [1j * o2, 0.0, -p.Gamma13],
    ])
    if not 1.0 / np.linalg.cond(a) > RCOND_LIMIT:
        raise SingularWindow("weak-probe system is singular")
    rho10, rho12, rho13 = np.linalg.solve(a, np.array([-1j * p.g, 0.0, 0.0]))
    return complex(rho10), complex(rho12), complex(rho13)


def liouvillian_rhs(p: AtomParams, rho: np.ndarray) -> np.ndarray:
    """Time derivative of a Hermitian 4x4 ``rho`` under the equations of motion."""
    r = rho
    g, o1, o2 = p.g, p.omega1, p.omega2
    d = np.empty((4, 4), dtype=complex)
    d[0, 0] = (-(p.gamma01 + p.gamma02 + p.gamma03) * r[0, 0] - 1j * g * (r[1, 0] - r[0, 1])
               - 1j * o1 * (r[2, 0] - r[0, 2]) - 1j * o2 * (r[3, 0] - r[0, 3]))
    d[1, 1] = p.gamma01 * r[0, 0] + p.gamma21 * r[2, 2] + p.gamma31 * r[3, 3] - 1j * g * (r[0, 1] - r[1, 0])
    d[2, 2] = p.gamma02 * r[0, 0] - p.gamma21 * r[2, 2] + p.gamma32 * r[3, 3] - 1j * o1 * (r[0, 2] - r[2, 0])
    d[3, 3] = p.gamma03 * r[0, 0] - (p.gamma31 + p.gamma32) * r[3, 3] - 1j * o2 * (r[0, 3] - r[3, 0])
    d[1, 0] = -p.Gamma10 * r[1, 0] - 1j * g * r[0, 0] + 1j * g * r[1, 1] + 1j * o1 * r[1, 2] + 1j * o2 * r[1, 3]
    d[2, 0] = -p.Gamma20 * r[2, 0] - 1j * o1 * r[0, 0] + 1j * g * r[2, 1] + 1j * o1 * r[2, 2] + 1j * o2 * r[2, 3]
    d[3, 0] = -p.Gamma30 * r[3, 0] - 1j * o2 * r[0, 0] + 1j * g * r[3, 1] + 1j * o1 * r[3, 2] + 1j * o2 * r[3, 3]
    d[1, 2] = -p.Gamma12 * r[1, 2] - 1j * g * r[0, 2] + 1j * o1 * r[1, 0]
    d[1, 3] = -p.Gamma13 * r[1, 3] - 1j * g * r[0, 3] + 1j * o2 * r[1, 0]
    d[2, 3] = -p.Gamma23 * r[2, 3] - 1j * o1 * r[0, 3] + 1j * o2 * r[2, 0]
    for j, k in COHERENCES:
        d[k, j] = np.conj(d[j, k])
    return d


def rk4_step(p: AtomParams, rho: np.ndarray, dt: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of length ``dt``."""
    k1 = liouvillian_rhs(p, rho)
    k2 = liouvillian_rhs(p, rho + 0.5 * dt * k1)
    k3 = liouvillian_rhs(p, rho + 0.5 * dt * k2)
    k4 = liouvillian_rhs(p, rho + dt * k3)
    return rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def max_stable_step(p: AtomParams) -> float:
    return 0.01 / p.fastest_scale()


def _residual(p: AtomParams, rho: np.ndarray) -> float:
    return float(np.max(np.abs(liouvillian_rhs(p, rho))))


def evolve_to_steady_state(
    p: AtomParams,
    rho0: DensityMatrix,
    dt: float | None = None,
    t_max: float = 1e8,
    tol: float = 1e-10,
) -> DensityMatrix:
    """Integrate with fixed-step RK4 until ``max|drho/dt| < tol``.

    The equations are linear and autonomous, so one RK4 step is a fixed linear
    map of the 16 real coordinates.  That map is obtained by applying
    :func:`rk4_step` to a Hermitian basis and then composed with itself by
    repeated squaring, which visits t = dt, 2dt, 4dt, ... along the exact
    RK4 trajectory at logarithmic cost.  The residual is checked at each
    visited time.

    Raises
    ------
    InvalidStep
        If ``dt`` exceeds ``0.01 / max(rates, Rabi frequencies, |detunings|, 1)``.
    NotConverged
        If ``t_max`` is reached with the residual still above ``tol``.
    """
    limit = max_stable_step(p)
    if dt is None:
        dt = limit
    if not 0 < dt <= limit * (1 + 1e-12):
        raise InvalidStep(f"dt={dt!r} must be in (0, {limit!r}]")

    rho0.check(tol=1e-10, populations=False)
    x = rho0.to_vector()
    residual = _residual(p, rho0.rho)
    if residual < tol:
        return rho0

    step = np.empty((N_UNKNOWNS, N_UNKNOWNS))
    for n in range(N_UNKNOWNS):
        e = np.zeros(N_UNKNOWNS)
        e[n] = 1.0
        # from_vector keeps the basis element Hermitian, as rk4_step expects
        basis = DensityMatrix.from_vector(e).rho
        step[:, n] = DensityMatrix(rk4_step(p, basis, dt)).to_vector()
    propagator, span = step, dt
    t = 0.0
    while t + span <= t_max:
        x = propagator @ x
        t += span
        residual = _residual(p, DensityMatrix.from_vector(x).rho)
        if residual < tol:
            out = DensityMatrix.from_vector(x)
            # population bounds are not enforced: the equations of motion are
            # not completely positive, so strong probes can drive them slightly negative
            out.check(tol=1e-8, populations=False)
            return out
        propagator = propagator @ propagator
        span *= 2
    raise NotConverged(f"residual {residual:.3g} above tol {tol:.3g} at t={t:.6g}", residual)
