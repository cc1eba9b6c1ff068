from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripodcavity.atom import AtomParams
from tripodcavity.errors import NonFinite, ValidationError
from tripodcavity.susceptibility import (
    SusceptibilityModel,
    chi_analytic,
    dispersion_slope,
    transparency_windows,
)

FIG2A = AtomParams(omega1=2.0, omega2=0.3, delta1=-1.0, delta2=1.0)
FIG2D = AtomParams(omega1=2.0, omega2=0.0, delta1=0.0, delta2=0.0)
BARE = AtomParams(omega1=0.0, omega2=0.0)
NO_GROUND = dict(gamma12=0.0, gamma13=0.0, gamma23=0.0)

detuning = st.floats(-5, 5, allow_nan=False)
rabi = st.floats(0, 3, allow_nan=False)


def reduced(dp, p, power=2):
    """Independent evaluation through i / (gamma - iX)."""
    x = dp - p.omega1**2 / (dp - p.delta1) - p.omega2**2 / (dp - p.delta2)
    return -(x - 1j * p.gamma01**power) / (x * x + p.gamma01**2)


class TestModel:
    def test_defaults(self):
        m = SusceptibilityModel()
        assert (m.prefactor, m.variant, m.include_ground_decay) == (1.0, "paper-verbatim", False)

    @pytest.mark.parametrize("kw", [{"prefactor": 0.0}, {"prefactor": -1.0}, {"variant": "other"}])
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            SusceptibilityModel(**kw)


class TestChiAnalytic:
    @pytest.mark.parametrize("dp", [-1.0, 1.0])
    def test_transparency_zeros(self, dp):
        chi = chi_analytic(dp, FIG2A)
        assert chi.re == 0.0 and chi.im == 0.0

    def test_golden_point(self):
        chi = complex(chi_analytic(0.0, FIG2A))
        assert chi == pytest.approx((3.91 + 1j) / 16.2881, abs=1e-15)
        assert chi.real == pytest.approx(0.240053, abs=1e-6)
        assert chi.imag == pytest.approx(0.061395, abs=1e-6)

    def test_single_dark_zero(self):
        assert complex(chi_analytic(0.0, FIG2D)) == 0

    def test_bare_resonance(self):
        assert complex(chi_analytic(0.0, BARE)) == pytest.approx(1j)

    def test_prefactor_scales(self):
        chi = complex(chi_analytic(0.3, FIG2A, SusceptibilityModel(prefactor=2.5)))
        assert chi == pytest.approx(2.5 * complex(chi_analytic(0.3, FIG2A)))

    def test_array_input(self):
        dp = np.linspace(-4, 4, 9)
        chi = chi_analytic(dp, FIG2A)
        for n, x in enumerate(dp):
            assert complex(chi.re[n], chi.im[n]) == complex(chi_analytic(float(x), FIG2A))

    def test_matches_reduced_form(self):
        dp = np.linspace(-4, 4, 1001) + 1e-3
        chi = chi_analytic(dp, FIG2A)
        np.testing.assert_allclose(chi.re + 1j * chi.im, reduced(dp, FIG2A), rtol=1e-12, atol=1e-15)

    def test_removable_point_control_off(self):
        # b = 0 with omega2 = 0 reduces to the Lambda system
        p = AtomParams(omega1=2.0, omega2=0.0, delta1=-1.0, delta2=3.0)
        at = complex(chi_analytic(3.0, p))
        near = complex(chi_analytic(3.0 + 1e-9, p))
        assert np.isfinite(at.real) and np.isfinite(at.imag)
        assert at == pytest.approx(near, abs=1e-8)

    def test_bare_removable(self):
        p = AtomParams(omega1=0.0, omega2=0.0, delta1=0.5, delta2=0.5)
        assert complex(chi_analytic(0.5, p)) == pytest.approx(1j / (1 - 0.5j))

    def test_subnormal_detunings(self):
        # a = -b subnormal: the control terms cancel exactly, leaving the bare line
        d = 2.2250738585e-313
        p = AtomParams(omega1=1.0, omega2=1.0, delta1=d, delta2=-d)
        assert complex(chi_analytic(0.0, p)) == 1j
        q = AtomParams(omega1=1.0, omega2=0.0, delta1=d)
        assert complex(chi_analytic(0.0, q)) == pytest.approx(d, rel=1e-12)

    def test_merged_windows(self):
        p = AtomParams(omega1=1.0, omega2=1.0, delta1=2.0, delta2=2.0)
        assert complex(chi_analytic(2.0, p)) == 0

    def test_ground_decay_route(self):
        m = SusceptibilityModel(include_ground_decay=True)
        chi = complex(chi_analytic(1.0, FIG2A, m))
        # finite ground decay leaves a small residual absorption at the window
        assert 0 < chi.imag < 2e-3
        assert complex(chi_analytic(0.0, replace(FIG2A, **NO_GROUND), m)) == pytest.approx(
            (3.91 + 1j) / 16.2881, rel=1e-12)


class TestWindows:
    def test_fig2a(self):
        assert transparency_windows(FIG2A) == [-1.0, 1.0]

    def test_single(self):
        assert transparency_windows(AtomParams(omega2=0.0, delta1=0.0)) == [0.0]

    def test_merged(self):
        assert transparency_windows(AtomParams(delta1=2.0, delta2=2.0)) == [2.0]

    def test_none(self):
        assert transparency_windows(BARE) == []

    def test_sorted(self):
        assert transparency_windows(AtomParams(delta1=3.0, delta2=-2.0)) == [-2.0, 3.0]


class TestDispersionSlope:
    def test_single_dark(self):
        assert dispersion_slope(0.0, FIG2D) == pytest.approx(0.25, abs=1e-4)
        assert dispersion_slope(0.0, FIG2D, h=1e-6) == pytest.approx(0.25, abs=1e-4)

    def test_narrow_window(self):
        assert dispersion_slope(1.0, FIG2A) == pytest.approx(1 / 0.09, abs=1e-2)

    def test_bare_lorentzian(self):
        assert dispersion_slope(0.0, BARE) == pytest.approx(-1.0, abs=1e-8)

    def test_matches_finite_difference_of_reduced_form(self):
        for dp in (-2.5, -0.3, 0.4, 2.2):
            h = 1e-6
            fd = (reduced(dp + h, FIG2A).real - reduced(dp - h, FIG2A).real) / (2 * h)
            assert dispersion_slope(dp, FIG2A) == pytest.approx(fd, rel=1e-5)

    def test_invalid_h(self):
        with pytest.raises(ValueError):
            dispersion_slope(0.0, FIG2A, h=0.0)

    def test_non_finite(self):
        with pytest.raises(NonFinite) as info:
            dispersion_slope(np.inf, FIG2A)
        assert info.value.delta_p is not None

    @pytest.mark.parametrize("dp", [-3.0, -0.5, 0.3, 2.0, 3.5])
    def test_step_convergence(self, dp):
        assert abs(dispersion_slope(dp, FIG2A, h=1e-4) - dispersion_slope(dp, FIG2A, h=1e-5)) < 1e-6


@settings(max_examples=100, deadline=None)
@given(detuning, detuning, detuning, rabi, rabi)
def test_detuning_inversion(dp, d1, d2, o1, o2):
    p = AtomParams(delta1=d1, delta2=d2, omega1=o1, omega2=o2)
    q = AtomParams(delta1=-d1, delta2=-d2, omega1=o1, omega2=o2)
    a, b = chi_analytic(dp, p), chi_analytic(-dp, q)
    assert b.re == pytest.approx(-a.re, abs=1e-12)
    assert b.im == pytest.approx(a.im, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(detuning, detuning, detuning, rabi, rabi)
def test_passivity(dp, d1, d2, o1, o2):
    p = AtomParams(delta1=d1, delta2=d2, omega1=o1, omega2=o2)
    assert chi_analytic(dp, p).im >= -1e-12
    m = SusceptibilityModel(include_ground_decay=True)
    assert chi_analytic(dp, p, m).im >= -1e-12


@settings(max_examples=100, deadline=None)
@given(detuning, detuning, detuning, rabi)
def test_control_off_reduction(dp, d1, d2, o1):
    p = AtomParams(delta1=d1, delta2=d2, omega1=o1, omega2=0.0)
    a = dp - d1
    # the oracle itself overflows for subnormal a
    if dp == d2 or abs(a) < 1e-150:
        return
    chi = complex(chi_analytic(dp, p))
    x = dp - o1**2 / a
    lam = -(x - 1j) / (x * x + 1)
    assert chi == pytest.approx(lam, rel=1e-9, abs=1e-12)
    assert complex(chi_analytic(dp, replace(p, delta2=d2 + 0.77))) == pytest.approx(chi, rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(detuning, detuning, detuning, rabi, rabi)
def test_variants_agree(dp, d1, d2, o1, o2):
    p = AtomParams(delta1=d1, delta2=d2, omega1=o1, omega2=o2)
    a = chi_analytic(dp, p, SusceptibilityModel(variant="paper-verbatim"))
    b = chi_analytic(dp, p, SusceptibilityModel(variant="linear-gamma"))
    assert (a.re, a.im) == (b.re, b.im)


@settings(max_examples=100, deadline=None)
@given(detuning, detuning, detuning, st.floats(0.05, 3), st.floats(0.05, 3))
def test_weak_probe_route_agrees(dp, d1, d2, o1, o2):
    p = AtomParams(delta1=d1, delta2=d2, omega1=o1, omega2=o2, **NO_GROUND)
    if min(abs(dp - d1), abs(dp - d2)) < 1e-6:
        return
    rational = complex(chi_analytic(dp, p))
    solved = complex(chi_analytic(dp, p, SusceptibilityModel(include_ground_decay=True)))
    assert abs(solved - rational) <= 1e-12 * abs(rational) + 1e-15
