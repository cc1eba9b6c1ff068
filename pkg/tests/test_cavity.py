import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripodcavity.cavity import (
    CavityParams,
    empty_cavity_fwhm_phase,
    linewidth_ratio,
    lock_to,
    round_trip_absorption,
    round_trip_phase,
    transmission,
    transmission_bounds,
)
from tripodcavity.errors import DivisionByZero, NegativeAbsorption, ValidationError

C = CavityParams()


def test_defaults():
    assert (C.r, C.beta, C.xi, C.eta, C.theta0, C.k_ratio) == (0.98, 1.0, 1.364, 2.0, 0.0, 1.364)
    assert C.t2 == pytest.approx(0.0396)


@pytest.mark.parametrize("kw", [{"r": 0.0}, {"r": 1.0}, {"r": 1.2}, {"beta": -1.0}, {"xi": -0.1},
                                {"eta": -2.0}, {"k_ratio": -1.0}, {"theta0": math.nan}])
def test_invalid(kw):
    with pytest.raises(ValidationError):
        CavityParams(**kw)


class TestPhase:
    def test_resonant_empty(self):
        assert round_trip_phase(0.0, 0.0, C) == 0.0

    def test_linear(self):
        assert round_trip_phase(0.5, 0.0, CavityParams(beta=1.0)) == 0.5

    def test_dispersive(self):
        assert round_trip_phase(0.0, 0.240053, C) == pytest.approx(0.327432, abs=1e-6)

    def test_lock(self):
        c = lock_to(CavityParams(beta=2.0), 1.5)
        assert round_trip_phase(1.5, 0.0, c) == 0.0


class TestAbsorption:
    def test_transparent(self):
        assert round_trip_absorption(0.0, CavityParams(eta=7.0)) == 1.0

    def test_value(self):
        assert round_trip_absorption(0.061395, C) == pytest.approx(math.exp(-0.12279), rel=1e-12)
        # 0.884452 as usually quoted is rounded; exp(-0.12279) = 0.8844494
        assert round_trip_absorption(0.061395, C) == pytest.approx(0.884452, abs=5e-6)

    def test_opaque(self):
        assert round_trip_absorption(1e9, C) == pytest.approx(0.0, abs=1e-300)

    def test_negative(self):
        with pytest.raises(NegativeAbsorption):
            round_trip_absorption(-1e-6, C)
        assert round_trip_absorption(-1e-12, C) == pytest.approx(1.0)

    def test_array(self):
        k = round_trip_absorption(np.array([0.0, 1.0]), C)
        np.testing.assert_allclose(k, [1.0, math.exp(-2.0)])


class TestTransmission:
    def test_resonance(self):
        assert transmission(0.0, 1.0, C) == pytest.approx((1 + 0.98) / (1 - 0.98), rel=1e-12)
        assert transmission(0.0, 1.0, C) == pytest.approx(99.0)

    def test_antiresonance(self):
        assert transmission(math.pi, 1.0, C) == pytest.approx(0.02 / 1.98, rel=1e-12)

    @pytest.mark.parametrize("phase", [0.0, 1.0, math.pi])
    def test_opaque(self, phase):
        assert transmission(phase, 0.0, C) == pytest.approx(0.0396)

    def test_maximum_on_resonance(self):
        phases = np.linspace(-3 * math.pi, 3 * math.pi, 2001)
        s = transmission(phases, 0.9, C)
        assert s.max() == pytest.approx(transmission(0.0, 0.9, C))

    def test_increasing_in_kappa(self):
        s = transmission(0.0, np.linspace(0, 1, 101), C)
        assert np.all(np.diff(s) > 0)


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20), st.floats(0, 1), st.floats(0.05, 0.995))
def test_transmission_properties(phase, kappa, r):
    c = CavityParams(r=r)
    s = transmission(phase, kappa, c)
    lo, hi = transmission_bounds(kappa, c)
    assert lo * (1 - 1e-12) <= s <= hi * (1 + 1e-12)
    assert transmission(-phase, kappa, c) == pytest.approx(s, rel=1e-12)
    assert transmission(phase + 2 * math.pi, kappa, c) == pytest.approx(s, rel=1e-9)


class TestEmptyWidth:
    def test_default(self):
        # independent high-precision evaluation
        mp.mp.dps = 40
        r = mp.mpf("0.98")
        exact = 2 * mp.acos((4 * r - 1 - r * r) / (2 * r))
        assert empty_cavity_fwhm_phase(C) == pytest.approx(float(exact), rel=1e-12)
        assert empty_cavity_fwhm_phase(C) == pytest.approx(0.0404068, abs=1e-7)
        # the commonly quoted 0.040414 agrees to 0.02 %
        assert empty_cavity_fwhm_phase(C) == pytest.approx(0.040414, rel=5e-4)

    def test_half_reflectivity(self):
        assert empty_cavity_fwhm_phase(CavityParams(r=0.5)) == pytest.approx(2 * math.acos(0.75))
        assert empty_cavity_fwhm_phase(CavityParams(r=0.5)) == pytest.approx(1.44546, abs=1e-5)

    def test_asymptote(self):
        exact = empty_cavity_fwhm_phase(C)
        approx = 2 * (1 - 0.98) / math.sqrt(0.98)
        assert approx == pytest.approx(0.040406, abs=1e-6)
        assert abs(approx - exact) / exact < 1e-3

    @pytest.mark.parametrize("r", [0.3, 0.7, 0.98])
    def test_is_half_maximum(self, r):
        c = CavityParams(r=r)
        half = empty_cavity_fwhm_phase(c) / 2
        assert transmission(half, 1.0, c) == pytest.approx(0.5 * transmission(0.0, 1.0, c), rel=1e-10)


class TestLinewidthRatio:
    def test_reported_value(self):
        assert linewidth_ratio(0.25, 11.1111, 1.364) == pytest.approx(0.083, abs=1e-3)

    @pytest.mark.parametrize("k", [0.0, 0.5, 10.0])
    def test_identical_media(self, k):
        assert linewidth_ratio(0.7, 0.7, k) == 1.0

    def test_asymptote(self):
        assert linewidth_ratio(0.25, 11.1111, math.inf) == pytest.approx(0.0225, abs=1e-4)

    def test_monotone_in_k(self):
        ks = np.linspace(0, 50, 50)
        values = [linewidth_ratio(0.25, 11.1111, k) for k in ks]
        assert values[0] == 1.0
        assert np.all(np.diff(values) < 0)
        assert values[-1] > 0.25 / 11.1111

    def test_bad_denominator(self):
        with pytest.raises(DivisionByZero):
            linewidth_ratio(0.25, -1.0, 1.0)
        with pytest.raises(ZeroDivisionError):
            linewidth_ratio(0.25, 0.0, math.inf)
