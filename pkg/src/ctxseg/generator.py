"""Synthetic signal generation from populations of leaky integrate-and-fire neurons.

A signal is assembled from ``m`` independently simulated neurons. Each
neuron receives a binomial spike train whose per-sample firing probability
follows a user-defined schedule of firing rates; its membrane potential
leaks toward the (constant) drive, accumulates spike increments, and
resets to zero on crossing the threshold. The output signal is a fixed
normally-distributed weighted sum of the per-neuron potentials plus
additive noise. Changes of firing rate are the ground-truth segment
boundaries.

Determinism: the master seed is split into one child stream per neuron
(index-addressed, so per-neuron simulation can run in any order or in
parallel) plus one stream for the mixing weights and output noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundaries import BoundarySet
from .core import TimeSeries


@dataclass(frozen=True)
class LifParams:
    """Leaky integrate-and-fire neuron constants.

    ``leak_tau`` is the membrane time constant in seconds, ``drive`` the
    constant intrinsic stimulation the potential leaks toward, and ``dt``
    the integration step (one per output sample).
    """

    v_thresh: float = 20.0
    leak_tau: float = 0.05
    drive: float = 0.0
    dt: float = 1.0 / 256.0

    def __post_init__(self):
        if self.v_thresh <= 0 or self.leak_tau <= 0 or self.dt <= 0:
            raise ValueError("v_thresh, leak_tau and dt must be positive")


@dataclass(frozen=True)
class ContextSchedule:
    """Ordered (firing_rate_hz, duration_s) steps defining the context states."""

    steps: tuple[tuple[float, float], ...]

    def __post_init__(self):
        steps = tuple((float(r), float(d)) for r, d in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise ValueError("schedule must contain at least one step")
        for rate, duration in steps:
            if rate < 0:
                raise ValueError("firing rates must be non-negative")
            if duration <= 0:
                raise ValueError("step durations must be positive")

    @property
    def total_duration_s(self) -> float:
        return sum(d for _, d in self.steps)

    def sample_edges(self, sample_rate_hz: float) -> np.ndarray:
        """Cumulative step end positions in samples (floored prefix sums)."""
        ends = np.cumsum([d for _, d in self.steps])
        return np.floor(ends * sample_rate_hz).astype(np.int64)

    def boundary_samples(self, sample_rate_hz: float) -> np.ndarray:
        """Ground-truth boundary positions: step edges excluding the signal end."""
        return self.sample_edges(sample_rate_hz)[:-1]

    @classmethod
    def from_pairs(cls, pairs) -> "ContextSchedule":
        return cls(steps=tuple((float(r), float(d)) for r, d in pairs))


@dataclass(frozen=True)
class GeneratorConfig:
    """Population size, neuron constants, noise levels and the master seed.

    ``output_noise_std`` of ``None`` scales the additive output noise to 1%
    of the assembled signal's standard deviation; an explicit value is used
    as an absolute standard deviation.
    """

    neuron_count: int = 500
    lif: LifParams = field(default_factory=LifParams)
    sample_rate_hz: float = 256.0
    spike_noise_std: float = 0.1
    output_noise_std: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.neuron_count < 1:
            raise ValueError("neuron_count must be >= 1")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if self.spike_noise_std < 0:
            raise ValueError("spike_noise_std must be non-negative")
        if self.output_noise_std is not None and self.output_noise_std < 0:
            raise ValueError("output_noise_std must be non-negative")


@dataclass(frozen=True)
class GeneratedSignal:
    """A generated signal with its ground truth and (if applicable) schedule."""

    series: TimeSeries
    ground_truth: BoundarySet
    schedule: ContextSchedule | None = None


def sample_spike_train(f_r: float, n_samples: int, dt: float, rng: np.random.Generator) -> np.ndarray:
    """Binary spike train: each sample fires independently with probability ``f_r * dt``."""
    p = f_r * dt
    if p < 0 or f_r < 0:
        raise ValueError("firing rate must be non-negative")
    if p > 1:
        raise ValueError("firing rate exceeds sample rate")
    return (rng.random(n_samples) < p).astype(np.int64)


def _simulate_lif_matrix(params: LifParams, increments: np.ndarray) -> np.ndarray:
    """Simulate a bank of neurons; ``increments`` is (neurons, samples) spike input.

    Per sample: Euler leak toward the drive, add the spike increment, then
    reset to zero within the same sample if the threshold was reached, so
    the recorded potential is always below threshold.
    """
    m, n = increments.shape
    leak = params.dt / params.leak_tau
    v = np.zeros(m)
    out = np.empty((m, n))
    for t in range(n):
        v += leak * (params.drive - v)
        v += increments[:, t]
        v[v >= params.v_thresh] = 0.0
        out[:, t] = v
    return out


def simulate_lif_lfp(params: LifParams, spikes) -> np.ndarray:
    """Membrane potential trace of one neuron driven by per-sample spike increments.

    ``spikes`` may be a binary train or already carry per-spike amplitudes.
    """
    inc = np.asarray(spikes, dtype=float)
    if inc.size == 0:
        raise ValueError("spikes must be nonempty")
    return _simulate_lif_matrix(params, inc[None, :])[0]


def assemble_signal(
    lfps,
    rng: np.random.Generator,
    output_noise_std: float = 0.0,
    weights=None,
) -> np.ndarray:
    """Weighted sum of per-neuron potentials plus additive Gaussian noise.

    One weight per neuron is drawn from the standard normal (once per
    signal) unless ``weights`` is given explicitly.
    """
    v = np.asarray(lfps, dtype=float)
    if v.ndim != 2 or v.shape[0] < 1:
        raise ValueError("lfps must be a (neurons, samples) array")
    if weights is None:
        weights = rng.standard_normal(v.shape[0])
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (v.shape[0],):
            raise ValueError("one weight per neuron required")
    x = weights @ v
    if output_noise_std > 0:
        x = x + output_noise_std * rng.standard_normal(x.size)
    return x


def generate(schedule: ContextSchedule, config: GeneratorConfig) -> GeneratedSignal:
    """Generate a signal for a firing-rate schedule; deterministic in the seed.

    Ground-truth boundaries sit at the schedule's cumulative step edges.
    """
    fs = config.sample_rate_hz
    dt = config.lif.dt
    for rate, _ in schedule.steps:
        if rate * dt > 1:
            raise ValueError("firing rate exceeds sample rate")

    edges = schedule.sample_edges(fs)
    n_total = int(edges[-1])
    counts = np.diff(np.concatenate(([0], edges)))
    if n_total == 0 or np.any(counts == 0):
        raise ValueError("schedule step shorter than one sample")

    children = np.random.SeedSequence(config.seed).spawn(config.neuron_count + 1)
    increments = np.empty((config.neuron_count, n_total))
    for i in range(config.neuron_count):
        rng = np.random.default_rng(children[i])
        parts = [
            sample_spike_train(rate, int(cnt), dt, rng)
            for (rate, _), cnt in zip(schedule.steps, counts)
        ]
        train = np.concatenate(parts).astype(float)
        if config.spike_noise_std > 0:
            amplitudes = 1.0 + config.spike_noise_std * rng.standard_normal(n_total)
            train *= amplitudes
        increments[i] = train

    lfps = _simulate_lif_matrix(config.lif, increments)
    mix_rng = np.random.default_rng(children[config.neuron_count])
    clean = assemble_signal(lfps, mix_rng, output_noise_std=0.0)
    noise_std = config.output_noise_std
    if noise_std is None:
        noise_std = 0.01 * float(np.std(clean))
    x = clean
    if noise_std > 0:
        x = x + noise_std * mix_rng.standard_normal(n_total)

    series = TimeSeries(samples=x, sample_rate_hz=fs)
    gt = BoundarySet(positions=schedule.boundary_samples(fs), signal_length=n_total)
    return GeneratedSignal(series=series, ground_truth=gt, schedule=schedule)
