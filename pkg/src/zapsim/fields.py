"""Uniform time/frequency grids, complex envelope fields, and transforms.

All fields are carrier-removed complex envelopes sampled on a uniform time
grid; spectra are indexed by detuning from the optical carrier in Hz.  The
transform pair is the Riemann-sum form of the continuous Fourier transform,

    E(nu) = dt * sum_t  E(t)  * exp(+2*pi*i*nu*t)
    E(t)  = df * sum_nu E(nu) * exp(-2*pi*i*nu*t)

so that a component at positive detuning nu evolves as exp(-2*pi*i*nu*t),
Parseval holds exactly between the two energy sums, and the zero-detuning
spectral sample equals the pulse area dt * sum_t E(t).  With this sign
choice the response of a passive resonant medium is causal in time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Grid",
    "TemporalField",
    "SpectralField",
    "GridAdequacyWarning",
    "make_grid",
    "gaussian_pulse",
    "to_spectrum",
    "to_time",
    "pulse_area",
    "pulse_energy",
]

LN2 = float(np.log(2.0))


class GridAdequacyWarning(UserWarning):
    """Grid sampling or windowing is marginal for the requested physics."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform time grid with its matching centered detuning grid.

    Parameters
    ----------
    n : int
        Sample count, a power of two, at least 2.
    dt : float
        Time step in seconds.

    The frequency samples are detunings from the carrier, ascending from
    -1/(2*dt) to +1/(2*dt) - df with spacing df = 1/(n*dt).  The bin at
    index ``n // 2`` sits exactly at zero detuning.
    """

    n: int
    dt: float

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or not _is_power_of_two(int(self.n)) or self.n < 2:
            raise ValueError(f"grid size must be a power of two >= 2, got {self.n!r}")
        if not (self.dt > 0.0) or not np.isfinite(self.dt):
            raise ValueError(f"time step must be positive and finite, got {self.dt!r}")

    @property
    def df(self) -> float:
        """Frequency spacing 1/(n*dt) in Hz."""
        return 1.0 / (self.n * self.dt)

    @property
    def window(self) -> float:
        """Total time window n*dt in seconds."""
        return self.n * self.dt

    @property
    def nyquist(self) -> float:
        """Largest representable |detuning|, 1/(2*dt) in Hz."""
        return 0.5 / self.dt

    @property
    def zero_bin(self) -> int:
        """Index of the zero-detuning sample in spectral arrays."""
        return self.n // 2

    @cached_property
    def t(self) -> np.ndarray:
        """Time samples, k*dt for k = 0 .. n-1."""
        arr = np.arange(self.n) * self.dt
        arr.flags.writeable = False
        return arr

    @cached_property
    def freqs(self) -> np.ndarray:
        """Detuning samples in Hz, ascending and symmetric about zero."""
        arr = np.fft.fftshift(np.fft.fftfreq(self.n, self.dt))
        arr.flags.writeable = False
        return arr

    @cached_property
    def t_signed(self) -> np.ndarray:
        """Time samples folded to (-window/2, window/2]; index 0 maps to 0."""
        arr = ((self.t + 0.5 * self.window) % self.window) - 0.5 * self.window
        arr.flags.writeable = False
        return arr


def _validate_amp(grid: Grid, amp) -> np.ndarray:
    out = np.asarray(amp, dtype=np.complex128)
    if out.shape != (grid.n,):
        raise ValueError(f"amplitude array has shape {out.shape}, expected ({grid.n},)")
    if not np.all(np.isfinite(out)):
        raise ValueError("amplitude array contains non-finite values")
    return out


@dataclass(frozen=True)
class TemporalField:
    """Complex envelope E(t) on a grid.  Treated as immutable after creation."""

    grid: Grid
    amp: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "amp", _validate_amp(self.grid, self.amp))


@dataclass(frozen=True)
class SpectralField:
    """Complex envelope E(nu) indexed by detuning, ascending frequency order."""

    grid: Grid
    amp: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "amp", _validate_amp(self.grid, self.amp))


def make_grid(n: int, dt: float) -> Grid:
    """Build a grid of ``n`` samples (power of two) with step ``dt`` seconds."""
    return Grid(int(n), float(dt))


def gaussian_pulse(
    grid: Grid,
    fwhm_t: float,
    center_t: float | None = None,
    detuning: float = 0.0,
) -> TemporalField:
    """Transform-limited Gaussian pulse with unit peak amplitude.

    Parameters
    ----------
    fwhm_t : float
        Full width at half maximum of the intensity profile |E(t)|^2, seconds.
    center_t : float, optional
        Peak time.  Defaults to one eighth of the window, which leaves most
        of the window free for the causal tail a resonant medium appends.
    detuning : float, optional
        Carrier offset in Hz; the spectral peak lands at this detuning.

    Raises
    ------
    ValueError
        If the pulse does not fit the window or the detuning exceeds Nyquist.
    """
    if not (0.0 < fwhm_t < grid.window):
        raise ValueError(f"pulse fwhm {fwhm_t!r} s must lie in (0, window={grid.window} s)")
    if abs(detuning) >= grid.nyquist:
        raise ValueError(f"detuning {detuning!r} Hz exceeds the Nyquist limit {grid.nyquist} Hz")
    if center_t is None:
        center_t = grid.window / 8.0
    x = grid.t - center_t
    env = np.exp(-2.0 * LN2 * (x / fwhm_t) ** 2)
    amp = env * np.exp(-2j * np.pi * detuning * x)
    return TemporalField(grid, amp)


def to_spectrum(f: TemporalField) -> SpectralField:
    """Forward transform; the result approximates E(nu) = integral E(t) e^{2 pi i nu t} dt."""
    amp = np.fft.fftshift(np.fft.ifft(f.amp)) * (f.grid.n * f.grid.dt)
    return SpectralField(f.grid, amp)


def to_time(F: SpectralField) -> TemporalField:
    """Inverse transform, exact round-trip partner of :func:`to_spectrum`."""
    amp = np.fft.fft(np.fft.ifftshift(F.amp)) / (F.grid.n * F.grid.dt)
    return TemporalField(F.grid, amp)


def pulse_area(f: TemporalField) -> complex:
    """Complex pulse area dt * sum_t E(t).

    Equals the zero-detuning sample of :func:`to_spectrum`, i.e. the field
    component at the carrier frequency.  For a resonant carrier this is the
    quantity the area theorem constrains.
    """
    return complex(f.grid.dt * f.amp.sum())


def pulse_energy(f: TemporalField | SpectralField) -> float:
    """Field energy, dt * sum |E(t)|^2 or df * sum |E(nu)|^2 (arbitrary units).

    The two evaluations agree exactly by Parseval under this transform
    normalization.
    """
    if isinstance(f, TemporalField):
        return float(f.grid.dt * np.sum(np.abs(f.amp) ** 2))
    if isinstance(f, SpectralField):
        return float(f.grid.df * np.sum(np.abs(f.amp) ** 2))
    raise TypeError(f"expected TemporalField or SpectralField, got {type(f).__name__}")
