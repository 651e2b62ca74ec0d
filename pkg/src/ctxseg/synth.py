"""Classic synthetic test signals: piecewise harmonics and fitted AR sequences."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_toeplitz
from scipy.signal import lfilter

from .boundaries import BoundarySet
from .core import TimeSeries
from .generator import GeneratedSignal

#: Built-in seven-segment harmonics preset. Each segment is a list of
#: (amplitude, pi_multiple) cosine terms: amplitude * cos(pi_multiple * pi * t).
HARMONICS_PRESET: tuple[tuple[tuple[float, float], ...], ...] = (
    ((0.5, 1.0), (1.5, 4.0), (4.0, 5.0)),
    ((0.7, 1.0), (2.1, 4.0), (5.6, 5.0)),
    ((1.5, 2.0), (4.0, 8.0)),
    ((1.5, 1.0), (4.0, 4.0)),
    ((0.5, 1.0), (1.7, 2.0), (3.7, 5.0)),
    ((2.3, 3.0), (7.8, 8.0)),
    ((0.8, 1.0), (1.0, 3.0), (3.0, 5.0)),
)


@dataclass(frozen=True)
class HarmonicsSpec:
    """Piecewise sum-of-cosines signal: one term list per segment.

    ``reset_time_per_segment`` restarts t at 0 for each segment; by default
    t runs continuously over the whole signal, preserving phase continuity.
    """

    segments: tuple[tuple[tuple[float, float], ...], ...] = HARMONICS_PRESET
    segment_duration_s: float = 5.0
    sample_rate_hz: float = 256.0
    reset_time_per_segment: bool = False

    def __post_init__(self):
        segs = tuple(tuple((float(a), float(m)) for a, m in seg) for seg in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs or any(not seg for seg in segs):
            raise ValueError("each segment needs at least one cosine term")
        if self.segment_duration_s <= 0 or self.sample_rate_hz <= 0:
            raise ValueError("durations and sample rate must be positive")


def harmonic_value(terms, t: float) -> float:
    """Evaluate one segment's cosine sum at time t (seconds)."""
    return float(sum(a * np.cos(m * np.pi * t) for a, m in terms))


def generate_harmonics(spec: HarmonicsSpec = HarmonicsSpec()) -> GeneratedSignal:
    """Deterministic harmonics signal with ground truth at the segment joins."""
    n_per = int(round(spec.segment_duration_s * spec.sample_rate_hz))
    if n_per < 1:
        raise ValueError("segment shorter than one sample")
    n_total = n_per * len(spec.segments)
    x = np.empty(n_total)
    for k, terms in enumerate(spec.segments):
        idx = np.arange(k * n_per, (k + 1) * n_per)
        t = (idx - k * n_per if spec.reset_time_per_segment else idx) / spec.sample_rate_hz
        seg = np.zeros(n_per)
        for amp, mult in terms:
            seg += amp * np.cos(mult * np.pi * t)
        x[idx] = seg
    gt = BoundarySet(
        positions=(np.arange(1, len(spec.segments)) * n_per).astype(np.int64),
        signal_length=n_total,
    )
    return GeneratedSignal(
        series=TimeSeries(samples=x, sample_rate_hz=spec.sample_rate_hz),
        ground_truth=gt,
    )


@dataclass(frozen=True)
class ArModel:
    """Stable autoregressive model ``x_t = sum_i coef_i * x_{t-i} + eps_t``."""

    coefficients: np.ndarray
    noise_std: float

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=float).reshape(-1)
        object.__setattr__(self, "coefficients", coef)
        if coef.size < 1:
            raise ValueError("order must be >= 1")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")
        # roots of z^p - c1 z^(p-1) - ... - cp must lie inside the unit circle
        poly = np.concatenate(([1.0], -coef))
        roots = np.roots(poly)
        if roots.size and np.max(np.abs(roots)) >= 1.0:
            raise ValueError("unstable AR model")

    @property
    def order(self) -> int:
        return self.coefficients.size


def fit_ar(exemplar, order: int) -> ArModel:
    """Fit an AR model by the autocorrelation (Yule-Walker) normal equations.

    Uses biased autocovariance estimates, which keep the fitted model
    stable for non-degenerate input; the innovation scale comes from the
    residual variance.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    x = np.asarray(exemplar.samples if isinstance(exemplar, TimeSeries) else exemplar, dtype=float)
    if x.size < 2 * order + 1:
        raise ValueError("exemplar too short for the requested order")
    x = x - x.mean()
    n = x.size
    r = np.array([np.dot(x[: n - k], x[k:]) / n for k in range(order + 1)])
    if r[0] <= 0 or not np.isfinite(r[0]):
        raise ValueError("degenerate autocorrelation")
    coef = solve_toeplitz(r[:-1], r[1:])
    noise_var = max(float(r[0] - coef @ r[1:]), 0.0)
    return ArModel(coefficients=coef, noise_std=float(np.sqrt(noise_var)))


def ar_sequence(model: ArModel, n_samples: int, rng: np.random.Generator, burn_in: int | None = None) -> np.ndarray:
    """Draw ``n_samples`` from the model, starting from zeros and discarding a burn-in."""
    if burn_in is None:
        burn_in = 10 * model.order
    eps = model.noise_std * rng.standard_normal(n_samples + burn_in)
    denominator = np.concatenate(([1.0], -model.coefficients))
    x = lfilter([1.0], denominator, eps)
    return x[burn_in:]


def generate_ar_sequence(
    models: dict[str, ArModel],
    states,
    segment_duration_s: float,
    sample_rate_hz: float,
    seed: int,
) -> GeneratedSignal:
    """Concatenate per-state AR draws; ground truth at the state switches.

    Each segment restarts the recursion from zeros with a burn-in of ten
    times the model order, so switch transients do not leak across the
    boundary. Deterministic in the seed.
    """
    states = list(states)
    if not states:
        raise ValueError("at least one state required")
    missing = sorted({s for s in states if s not in models})
    if missing:
        raise ValueError(f"missing AR model(s) for state(s): {', '.join(missing)}")
    n_per = int(round(segment_duration_s * sample_rate_hz))
    if n_per < 1:
        raise ValueError("segment shorter than one sample")
    rng = np.random.default_rng(seed)
    parts = [ar_sequence(models[s], n_per, rng) for s in states]
    x = np.concatenate(parts)
    gt = BoundarySet(
        positions=(np.arange(1, len(states)) * n_per).astype(np.int64),
        signal_length=x.size,
    )
    return GeneratedSignal(
        series=TimeSeries(samples=x, sample_rate_hz=sample_rate_hz),
        ground_truth=gt,
    )
