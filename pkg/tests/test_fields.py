import numpy as np
import pytest

from zapsim import (
    SpectralField,
    TemporalField,
    gaussian_pulse,
    make_grid,
    pulse_area,
    pulse_energy,
    to_spectrum,
    to_time,
)

from conftest import random_field

LN2 = np.log(2.0)


def measured_fwhm(x, y):
    """Half-max width of a sampled peak via linear interpolation."""
    half = y.max() / 2.0
    above = np.nonzero(y >= half)[0]
    lo, hi = above[0], above[-1]

    def cross(i, j):
        return x[i] + (half - y[i]) * (x[j] - x[i]) / (y[j] - y[i])

    left = cross(lo - 1, lo) if lo > 0 else x[0]
    right = cross(hi + 1, hi) if hi < len(x) - 1 else x[-1]
    return right - left


class TestMakeGrid:
    def test_df_small_example(self):
        grid = make_grid(8, 1.0)
        assert grid.df == pytest.approx(0.125, rel=1e-15)

    def test_default_grid_arithmetic(self):
        grid = make_grid(2**19, 10e-15)
        assert grid.window == pytest.approx(2**19 * 10e-15, rel=1e-15)
        assert grid.df == pytest.approx(1.0 / (2**19 * 10e-15), rel=1e-15)
        # sanity on the advertised scales
        assert grid.window == pytest.approx(5.24288e-9, rel=1e-9)
        assert grid.df == pytest.approx(190.7348e6, rel=1e-6)

    @pytest.mark.parametrize("n", [0, 1, 3, 7, 100])
    def test_rejects_non_power_of_two(self, n):
        with pytest.raises(ValueError):
            make_grid(n, 1.0)

    @pytest.mark.parametrize("dt", [0.0, -1e-15, np.nan])
    def test_rejects_bad_dt(self, dt):
        with pytest.raises(ValueError):
            make_grid(8, dt)

    def test_frequency_axis(self):
        grid = make_grid(16, 0.5)
        assert grid.freqs[0] == pytest.approx(-1.0, rel=1e-15)
        assert grid.freqs[grid.zero_bin] == 0.0
        assert np.allclose(np.diff(grid.freqs), grid.df, rtol=1e-15)
        assert grid.freqs[-1] == pytest.approx(1.0 - grid.df, rel=1e-15)


class TestGaussianPulse:
    def test_intensity_fwhm_matches_request(self, small_grid):
        f = gaussian_pulse(small_grid, 100e-15)
        fwhm = measured_fwhm(small_grid.t, np.abs(f.amp) ** 2)
        assert abs(fwhm - 100e-15) <= small_grid.dt

    def test_peak_amplitude_one(self, small_grid):
        f = gaussian_pulse(small_grid, 100e-15)
        assert np.abs(f.amp).max() == pytest.approx(1.0, abs=1e-12)

    def test_zero_detuning_peaks_at_zero_bin(self, small_grid):
        spec = to_spectrum(gaussian_pulse(small_grid, 100e-15))
        assert int(np.argmax(np.abs(spec.amp))) == small_grid.zero_bin

    def test_detuned_pulse_peaks_at_detuning(self, small_grid):
        nu0 = 200 * small_grid.df
        spec = to_spectrum(gaussian_pulse(small_grid, 100e-15, detuning=nu0))
        peak_freq = small_grid.freqs[int(np.argmax(np.abs(spec.amp)))]
        assert peak_freq == pytest.approx(nu0, abs=small_grid.df / 2)

    def test_spectral_fwhm_time_bandwidth(self, small_grid):
        # transform-limited Gaussian: dnu * dt_fwhm = 2 ln2 / pi = 0.4413
        spec = to_spectrum(gaussian_pulse(small_grid, 100e-15))
        dnu = measured_fwhm(small_grid.freqs, np.abs(spec.amp) ** 2)
        expected = 2.0 * LN2 / (np.pi * 100e-15)
        assert expected == pytest.approx(4.4127e12, rel=1e-4)
        assert dnu == pytest.approx(expected, rel=1e-3)

    def test_unresolvable_pulse_rejected(self, small_grid):
        with pytest.raises(ValueError):
            gaussian_pulse(small_grid, small_grid.window * 1.5)

    def test_excess_detuning_rejected(self, small_grid):
        with pytest.raises(ValueError):
            gaussian_pulse(small_grid, 100e-15, detuning=small_grid.nyquist)


class TestTransforms:
    def test_constant_field_concentrates_at_zero_bin(self):
        grid = make_grid(64, 1.0)
        spec = to_spectrum(TemporalField(grid, np.ones(64)))
        others = np.delete(np.abs(spec.amp), grid.zero_bin)
        assert np.abs(spec.amp[grid.zero_bin]) == pytest.approx(64.0, rel=1e-12)
        assert others.max() < 1e-12 * np.abs(spec.amp[grid.zero_bin])

    def test_gaussian_maps_to_gaussian(self, small_grid):
        f = gaussian_pulse(small_grid, 200e-15)
        spec = np.abs(to_spectrum(f).amp)
        dnu = 2.0 * LN2 / (np.pi * 200e-15)
        expected = spec.max() * np.exp(-2.0 * LN2 * (small_grid.freqs / dnu) ** 2)
        assert np.max(np.abs(spec - expected)) < 1e-6 * spec.max()

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_parseval_direct_sum(self, seed):
        grid = make_grid(2**10, 2e-15)
        f = random_field(grid, seed)
        e_time = grid.dt * sum(abs(v) ** 2 for v in f.amp)  # direct summation oracle
        e_freq = pulse_energy(to_spectrum(f))
        assert e_freq == pytest.approx(e_time, rel=1e-12)

    @pytest.mark.parametrize("seed", [3, 4, 5])
    def test_round_trip(self, seed):
        grid = make_grid(2**11, 1e-15)
        f = random_field(grid, seed)
        back = to_time(to_spectrum(f))
        err = np.sqrt(np.mean(np.abs(back.amp - f.amp) ** 2))
        ref = np.sqrt(np.mean(np.abs(f.amp) ** 2))
        assert err / ref < 1e-12

    def test_single_bin_spectrum_gives_constant_magnitude(self):
        grid = make_grid(128, 1.0)
        amp = np.zeros(128, complex)
        amp[grid.zero_bin + 5] = 1.0
        f = to_time(SpectralField(grid, amp))
        mags = np.abs(f.amp)
        assert np.allclose(mags, mags[0], rtol=1e-12)

    def test_conjugate_symmetric_spectrum_is_real(self):
        grid = make_grid(2**10, 1e-15)
        n = grid.n
        rng = np.random.default_rng(11)
        amp = np.zeros(n, complex)
        pos = rng.normal(size=n // 2 - 1) + 1j * rng.normal(size=n // 2 - 1)
        amp[grid.zero_bin + 1 :] = pos
        amp[1 : grid.zero_bin] = np.conj(pos[::-1])
        amp[grid.zero_bin] = rng.normal()
        amp[0] = rng.normal()
        f = to_time(SpectralField(grid, amp))
        assert np.abs(f.amp.imag).max() < 1e-12 * np.abs(f.amp).max()


class TestAreaAndEnergy:
    def test_zero_field_zero_area(self, small_grid):
        f = TemporalField(small_grid, np.zeros(small_grid.n))
        assert pulse_area(f) == 0.0
        assert pulse_energy(f) == 0.0

    def test_gaussian_area_closed_form(self, small_grid):
        fwhm = 100e-15
        f = gaussian_pulse(small_grid, fwhm)
        # integral of exp(-2 ln2 (t/w)^2) dt = w sqrt(pi / (2 ln2))
        expected = fwhm * np.sqrt(np.pi / (2.0 * LN2))
        assert pulse_area(f) == pytest.approx(expected, rel=1e-6)

    def test_area_equals_zero_detuning_bin(self):
        grid = make_grid(2**10, 1e-15)
        f = random_field(grid, 7, offset=1.0)
        area = pulse_area(f)
        dc = to_spectrum(f).amp[grid.zero_bin]
        assert abs(area - dc) <= 1e-12 * abs(area)

    def test_energy_quadratic_scaling(self, small_grid):
        f = gaussian_pulse(small_grid, 100e-15)
        doubled = TemporalField(small_grid, 2.0 * f.amp)
        assert pulse_energy(doubled) == pytest.approx(4.0 * pulse_energy(f), rel=1e-12)

    def test_energy_parseval(self):
        grid = make_grid(2**10, 1e-15)
        f = random_field(grid, 9)
        assert pulse_energy(to_spectrum(f)) == pytest.approx(pulse_energy(f), rel=1e-12)

    def test_field_validation(self, small_grid):
        with pytest.raises(ValueError):
            TemporalField(small_grid, np.ones(3))
        bad = np.ones(small_grid.n, complex)
        bad[5] = np.nan
        with pytest.raises(ValueError):
            TemporalField(small_grid, bad)
        with pytest.raises(TypeError):
            pulse_energy(np.ones(4))
