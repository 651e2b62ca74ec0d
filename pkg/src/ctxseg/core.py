"""Core signal primitives: sampled series, tapers, log spectra and the paired t-test.

Everything in this module is a pure function of its inputs; values are
plain dataclasses wrapping NumPy arrays and are safe to share across
threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import stdtr

#: Magnitudes below this are clamped before taking the log, so that silent
#: windows produce finite spectra instead of -inf.
SPECTRUM_FLOOR = 1e-12

TAPER_KINDS = ("hamming", "hann", "rectangular")


@dataclass(frozen=True)
class TimeSeries:
    """A uniformly sampled real-valued signal.

    Parameters
    ----------
    samples : ndarray
        Signal values, one per sample.
    sample_rate_hz : float
        Sampling frequency in Hz, strictly positive.
    """

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")
        if samples.size and not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz


@dataclass(frozen=True)
class MultiChannelSeries:
    """A set of equally sampled channels with labels."""

    channels: tuple[TimeSeries, ...]
    channel_labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "channel_labels", tuple(self.channel_labels))
        if not self.channels:
            raise ValueError("at least one channel required")
        if len(self.channels) != len(self.channel_labels):
            raise ValueError("one label per channel required")
        n = len(self.channels[0])
        fs = self.channels[0].sample_rate_hz
        for ch in self.channels[1:]:
            if len(ch) != n or ch.sample_rate_hz != fs:
                raise ValueError("channels must share length and sample rate")

    @property
    def sample_rate_hz(self) -> float:
        return self.channels[0].sample_rate_hz

    @property
    def n_samples(self) -> int:
        return len(self.channels[0])


@dataclass(frozen=True)
class WindowView:
    """A fixed-length view [start, start + length) into a signal."""

    start: int
    length: int

    def clip_check(self, signal_length: int) -> None:
        if self.start < 0 or self.length < 1:
            raise ValueError("window out of range")
        if self.start + self.length > signal_length:
            raise ValueError("window out of range")


@dataclass(frozen=True)
class LogSpectrum:
    """One-sided log-magnitude spectrum of a window.

    ``bins`` has ``floor(window_length / 2) + 1`` entries (DC included) and
    ``bin_resolution_hz`` is ``sample_rate_hz / window_length``.
    """

    bins: np.ndarray = field(repr=False)
    bin_resolution_hz: float

    def __post_init__(self):
        object.__setattr__(self, "bins", np.asarray(self.bins, dtype=float))


def taper_coefficients(length: int, kind: str) -> np.ndarray:
    """Taper coefficients of the given length.

    ``hamming`` and ``hann`` use the symmetric convention with denominator
    ``length - 1`` (endpoints 0.08 and 0.0 respectively); ``rectangular``
    is all ones.
    """
    if length < 1:
        raise ValueError("empty input")
    if kind == "rectangular":
        return np.ones(length)
    if kind == "hamming":
        return np.hamming(length)
    if kind == "hann":
        return np.hanning(length)
    raise ValueError(f"unknown taper kind {kind!r}; expected one of {TAPER_KINDS}")


def taper(window, kind: str) -> np.ndarray:
    """Apply a taper function element-wise to a window.

    Parameters
    ----------
    window : array_like
        Non-empty sequence of samples.
    kind : str
        One of ``hamming``, ``hann``, ``rectangular``.

    Returns
    -------
    ndarray
        The tapered window, same length as the input.
    """
    w = np.asarray(window, dtype=float)
    if w.size == 0:
        raise ValueError("empty input")
    return w * taper_coefficients(w.size, kind)


def log_magnitude_spectrum(window, sample_rate_hz: float) -> LogSpectrum:
    """One-sided log-magnitude spectrum of an (already tapered) window.

    The magnitude of the real FFT is clamped at ``SPECTRUM_FLOOR`` before
    taking the natural log, so all bins are finite.

    Parameters
    ----------
    window : array_like
        At least two samples.
    sample_rate_hz : float
        Sampling frequency of the underlying signal.

    Returns
    -------
    LogSpectrum
        ``floor(len(window) / 2) + 1`` log-magnitude bins plus the bin
        resolution in Hz.
    """
    w = np.asarray(window, dtype=float)
    if w.size < 2:
        raise ValueError("window too short")
    mag = np.abs(np.fft.rfft(w))
    bins = np.log(np.maximum(mag, SPECTRUM_FLOOR))
    return LogSpectrum(bins=bins, bin_resolution_hz=sample_rate_hz / w.size)


def student_t_sf(t: float, df: int) -> float:
    """Upper-tail probability of the Student-t distribution."""
    return float(stdtr(df, -abs(t)))


def paired_t_test(a, b) -> float:
    """Two-sided paired-samples t-test p-value.

    Conventions for degenerate inputs: if every pairwise difference is
    exactly zero the samples are indistinguishable and the p-value is 1.0;
    if the differences are a nonzero constant the t statistic diverges and
    the p-value is 0.0.

    Parameters
    ----------
    a, b : array_like
        Paired samples of equal length ``n >= 2``.

    Returns
    -------
    float
        p-value in [0, 1].
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise ValueError("invalid pairing")
    d = a - b
    if np.all(d == 0.0):
        return 1.0
    sd = d.std(ddof=1)
    if sd == 0.0:
        return 0.0
    n = d.size
    t = d.mean() / (sd / np.sqrt(n))
    return min(1.0, 2.0 * student_t_sf(t, n - 1))


def paired_t_test_rows(ref: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Vectorised paired t-test of one reference row against many rows.

    Same conventions as :func:`paired_t_test`; used on batches of spectra
    where the scalar call would dominate the runtime.
    """
    d = rows - ref[None, :]
    n = d.shape[1]
    md = d.mean(axis=1)
    sd = d.std(axis=1, ddof=1)
    p = np.empty(d.shape[0])
    zero = np.all(d == 0.0, axis=1)
    degen = (sd == 0.0) & ~zero
    ok = ~zero & ~degen
    t = md[ok] / (sd[ok] / np.sqrt(n))
    p[ok] = np.minimum(1.0, 2.0 * stdtr(n - 1, -np.abs(t)))
    p[zero] = 1.0
    p[degen] = 0.0
    return p
