"""Fixed-length representation of signals and variable-length segments.

Covers the three ways a downstream consumer gets fixed-size windows:
arithmetic slicing of the raw signal, extraction of one representative
window per variable-length segment (first or random), and the
multi-channel boundary vote that merges per-channel segmentations.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .boundaries import BoundarySet

log = logging.getLogger(__name__)

STRATEGY_NAMES = {"fixed": "fixed", "vf": "variable_first", "vr": "variable_random"}


@dataclass(frozen=True)
class FixedSlicing:
    """Fixed window size with fractional overlap between consecutive windows."""

    window_samples: int
    overlap_fraction: float = 0.0

    def __post_init__(self):
        if self.window_samples < 1:
            raise ValueError("window_samples must be >= 1")
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise ValueError("overlap_fraction must be in [0, 1)")
        if self.stride < 1:
            raise ValueError("stride must be at least one sample")

    @property
    def stride(self) -> int:
        return int(round(self.window_samples * (1.0 - self.overlap_fraction)))


def fixed_slices(signal_length: int, slicing: FixedSlicing) -> list[tuple[int, int]]:
    """Fully contained fixed windows starting at 0 and stepping by the stride."""
    w = slicing.window_samples
    if w > signal_length:
        warnings.warn(
            f"window of {w} samples exceeds signal length {signal_length}; no slices",
            stacklevel=2,
        )
        return []
    starts = range(0, signal_length - w + 1, slicing.stride)
    return [(s, s + w) for s in starts]


@dataclass(frozen=True)
class ExtractionStrategy:
    """How to pick the fixed-size representative window of a segment."""

    kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("variable_first", "variable_random"):
            raise ValueError("kind must be 'variable_first' or 'variable_random'")


def extract_representative(
    segments: list[tuple[int, int]], window_samples: int, strategy: ExtractionStrategy
) -> list[tuple[int, int]]:
    """One window of ``window_samples`` inside each segment.

    ``variable_first`` takes the window at the segment start (the earliest
    possible presentation; the only option when the segment end is not yet
    known). ``variable_random`` draws the start uniformly, seeded for
    reproducibility. Segments shorter than the window are dropped with a
    warning.
    """
    rng = np.random.default_rng(strategy.seed)
    out: list[tuple[int, int]] = []
    dropped = 0
    for start, end in segments:
        if end - start < window_samples:
            dropped += 1
            continue
        if strategy.kind == "variable_first":
            s = start
        else:
            s = int(rng.integers(start, end - window_samples + 1))
        out.append((s, s + window_samples))
    if dropped:
        warnings.warn(f"dropped {dropped} segment(s) shorter than the window", stacklevel=2)
    return out


def multichannel_vote(
    per_channel: list[BoundarySet],
    min_channels: int,
    tolerance_samples: int,
    min_segment: int,
) -> BoundarySet:
    """Merge per-channel boundaries into one boundary set by voting.

    Boundaries from all channels are pooled and clustered greedily from the
    left: a cluster collects every boundary within ``tolerance_samples`` of
    its earliest member. Clusters backed by at least ``min_channels``
    distinct channels survive and are represented by their earliest
    position. Finally boundaries closer than ``min_segment`` to the
    previously kept one are dropped left to right.
    """
    if not per_channel:
        raise ValueError("at least one channel required")
    n = per_channel[0].signal_length
    if any(bs.signal_length != n for bs in per_channel):
        raise ValueError("all channels must share signal_length")
    if min_channels < 1 or tolerance_samples < 0 or min_segment < 0:
        raise ValueError("invalid vote parameters")

    events = sorted(
        (int(p), ch) for ch, bs in enumerate(per_channel) for p in bs.positions
    )
    clusters: list[tuple[int, set[int]]] = []  # (earliest position, channels)
    for pos, ch in events:
        if clusters and pos - clusters[-1][0] <= tolerance_samples:
            clusters[-1][1].add(ch)
        else:
            clusters.append((pos, {ch}))

    kept: list[int] = []
    for pos, channels in clusters:
        if len(channels) < min_channels:
            continue
        if kept and pos - kept[-1] < min_segment:
            continue
        kept.append(pos)
    return BoundarySet(positions=np.asarray(kept, dtype=np.int64), signal_length=n)
