import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from ctxseg import LogSpectrum, TimeSeries, log_magnitude_spectrum, paired_t_test, taper
from ctxseg.core import SPECTRUM_FLOOR, student_t_sf


def t_density(x: float, df: int) -> float:
    lognorm = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
    return math.exp(lognorm - (df + 1) / 2 * math.log1p(x * x / df))


def t_sf_quadrature(t: float, df: int) -> float:
    """Upper-tail t probability via numerical quadrature (independent oracle)."""
    body, _ = quad(t_density, 0.0, abs(t), args=(df,), epsabs=1e-12, epsrel=1e-12)
    return 0.5 - body


class TestTimeSeries:
    def test_rejects_nonpositive_rate(self):
        with pytest.raises(ValueError):
            TimeSeries(samples=np.zeros(4), sample_rate_hz=0.0)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            TimeSeries(samples=np.array([0.0, np.nan]), sample_rate_hz=1.0)

    def test_duration(self):
        ts = TimeSeries(samples=np.zeros(512), sample_rate_hz=256.0)
        assert ts.duration_s == 2.0


class TestTaper:
    def test_rectangular_is_identity(self):
        x = np.array([1.0, -2.0, 3.5, 0.0])
        assert np.array_equal(taper(x, "rectangular"), x)

    def test_rectangular_on_ones(self):
        assert np.array_equal(taper(np.ones(7), "rectangular"), np.ones(7))

    def test_hamming_length3_endpoints(self):
        # 0.54 - 0.46*cos(2*pi*k/(L-1)) at k=0,1,2 gives [0.08, 1.0, 0.08]
        x = np.array([2.0, 3.0, -1.0])
        out = taper(x, "hamming")
        assert out == pytest.approx([0.08 * 2.0, 1.0 * 3.0, 0.08 * -1.0])

    def test_all_zero_window(self):
        assert np.array_equal(taper(np.zeros(16), "hamming"), np.zeros(16))

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty input"):
            taper(np.array([]), "hamming")

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="taper"):
            taper(np.ones(4), "kaiser")

    @given(st.integers(min_value=1, max_value=400))
    def test_rectangular_identity_property(self, n):
        x = np.arange(n, dtype=float)
        assert np.array_equal(taper(x, "rectangular"), x)


class TestLogMagnitudeSpectrum:
    def test_pure_tone_peaks_at_its_bin(self):
        fs, n, k = 256.0, 128, 10
        t = np.arange(n) / fs
        x = np.cos(2 * np.pi * (k * fs / n) * t)
        spec = log_magnitude_spectrum(x, fs)
        assert int(np.argmax(spec.bins)) == k

    def test_zero_window_hits_floor(self):
        spec = log_magnitude_spectrum(np.zeros(64), 256.0)
        assert np.allclose(spec.bins, np.log(SPECTRUM_FLOOR))

    def test_shape_and_resolution(self, rng):
        spec = log_magnitude_spectrum(rng.standard_normal(128), 256.0)
        assert spec.bins.size == 65
        assert spec.bin_resolution_hz == 256.0 / 128

    def test_too_short(self):
        with pytest.raises(ValueError, match="window too short"):
            log_magnitude_spectrum(np.array([1.0]), 256.0)

    @given(st.integers(min_value=2, max_value=300))
    @settings(max_examples=60)
    def test_bin_count_law(self, n):
        spec = log_magnitude_spectrum(np.ones(n), 100.0)
        assert spec.bins.size == n // 2 + 1
        assert isinstance(spec, LogSpectrum)


class TestPairedTTest:
    def test_identical_samples(self):
        assert paired_t_test([3.0, 1.0, -2.0], [3.0, 1.0, -2.0]) == 1.0

    def test_hand_computed_case(self):
        # diffs (-1, -1, -2): t = -4.0 on 2 df; p from the quadrature oracle
        p = paired_t_test([1.0, 2.0, 3.0], [2.0, 3.0, 5.0])
        expected = 2 * t_sf_quadrature(4.0, 2)
        assert p == pytest.approx(expected, abs=1e-9)
        assert p == pytest.approx(0.0572, abs=5e-4)

    def test_constant_nonzero_difference(self):
        assert paired_t_test([0.0, 0.0], [10.0, 10.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="invalid pairing"):
            paired_t_test([1.0, 2.0], [1.0])

    def test_too_short(self):
        with pytest.raises(ValueError, match="invalid pairing"):
            paired_t_test([1.0], [2.0])

    @given(
        st.lists(st.integers(min_value=-4000, max_value=4000), min_size=2, max_size=40),
        st.data(),
    )
    @settings(max_examples=200)
    def test_symmetry(self, a_int, data):
        b_int = data.draw(
            st.lists(
                st.integers(min_value=-4000, max_value=4000),
                min_size=len(a_int),
                max_size=len(a_int),
            )
        )
        a = np.asarray(a_int, dtype=float) / 16.0
        b = np.asarray(b_int, dtype=float) / 16.0
        assert paired_t_test(a, b) == paired_t_test(b, a)

    @given(
        st.lists(st.integers(min_value=-4000, max_value=4000), min_size=2, max_size=40),
        st.integers(min_value=-1600, max_value=1600),
        st.data(),
    )
    @settings(max_examples=200)
    def test_shift_invariance(self, a_int, shift_int, data):
        # dyadic values keep a + c exact in binary floating point
        b_int = data.draw(
            st.lists(
                st.integers(min_value=-4000, max_value=4000),
                min_size=len(a_int),
                max_size=len(a_int),
            )
        )
        a = np.asarray(a_int, dtype=float) / 16.0
        b = np.asarray(b_int, dtype=float) / 16.0
        c = shift_int / 16.0
        assert abs(paired_t_test(a + c, b + c) - paired_t_test(a, b)) <= 1e-12


class TestStudentTCdf:
    @pytest.mark.parametrize("df", [2, 63, 127])
    @pytest.mark.parametrize("t", [0.0, 1.0, 2.5, 4.0])
    def test_matches_quadrature(self, df, t):
        assert student_t_sf(t, df) == pytest.approx(t_sf_quadrature(t, df), abs=1e-8)
