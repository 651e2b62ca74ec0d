"""Adaptive segmentation with a fixed reference window and a sliding test window.

The segmenter walks the signal with two equal-size windows. The reference
window stays anchored at the start of the current segment while the test
window slides forward; the two are compared through the paired t-test of
their log-magnitude spectra. When the test rejects (p below the
significance threshold) a boundary is emitted just past the test window,
the reference re-anchors immediately after it, and the walk continues.
Each test position is visited at most once, so the number of comparisons
is bounded by the signal length.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .boundaries import BoundarySet
from .core import SPECTRUM_FLOOR, TAPER_KINDS, TimeSeries, taper_coefficients, paired_t_test_rows

log = logging.getLogger(__name__)

#: Number of window positions whose spectra are computed per batch.
_CHUNK = 2048


@dataclass(frozen=True)
class CtxsegConfig:
    """Parameters of the adaptive segmenter.

    ``window_samples`` sets both window sizes (and thereby the minimum
    segment size); ``stride_samples`` is the test window's initial offset
    from a freshly anchored reference. By default the test window then
    slides one sample at a time; with ``slide_by_stride`` it advances by
    the stride instead. ``include_dc`` drops the DC bin from the compared
    spectra when False.
    """

    window_samples: int
    stride_samples: int = 1
    alpha: float = 0.05
    taper_kind: str = "hamming"
    slide_by_stride: bool = False
    include_dc: bool = True

    def __post_init__(self):
        if self.window_samples < 2:
            raise ValueError("window_samples must be >= 2")
        if self.stride_samples < 1:
            raise ValueError("stride_samples must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if self.taper_kind not in TAPER_KINDS:
            raise ValueError(f"taper_kind must be one of {TAPER_KINDS}")


@dataclass
class SegmentationStats:
    """Diagnostics from one segmentation run."""

    comparisons: int = 0
    anchors: int = 1
    warned_short: bool = False


def _window_log_spectra(windows: np.ndarray, tap: np.ndarray, include_dc: bool) -> np.ndarray:
    mag = np.abs(np.fft.rfft(windows * tap[None, :], axis=1))
    spec = np.log(np.maximum(mag, SPECTRUM_FLOOR))
    return spec if include_dc else spec[:, 1:]


def ctxseg_segment_with_stats(signal: TimeSeries, config: CtxsegConfig) -> tuple[BoundarySet, SegmentationStats]:
    """Segment a signal, returning boundaries plus run diagnostics.

    A signal shorter than ``window_samples + stride_samples`` yields an
    empty boundary set with a warning rather than an error, so batch
    pipelines tolerate short records.
    """
    x = signal.samples
    n = x.size
    w = config.window_samples
    s = config.stride_samples
    stats = SegmentationStats()

    if n < w + s:
        stats.warned_short = True
        msg = f"signal of {n} samples is shorter than window+stride ({w}+{s}); no segmentation performed"
        warnings.warn(msg, stacklevel=2)
        log.warning(msg)
        return BoundarySet.empty(n), stats

    tap = taper_coefficients(w, config.taper_kind)
    windows = sliding_window_view(x, w)  # (n - w + 1, w), no copy
    step = s if config.slide_by_stride else 1
    limit = n - w  # test pointer must stay strictly below this

    positions: list[int] = []
    p_values: list[float] = []
    r = 0
    t = s
    ref_spec: np.ndarray | None = None

    while t < limit:
        if ref_spec is None:
            ref_spec = _window_log_spectra(windows[r : r + 1], tap, config.include_dc)[0]
        stop = min(limit, t + step * _CHUNK)
        cand = np.arange(t, stop, step)
        specs = _window_log_spectra(windows[cand], tap, config.include_dc)
        p = paired_t_test_rows(ref_spec, specs)
        hits = np.flatnonzero(p < config.alpha)
        if hits.size == 0:
            stats.comparisons += cand.size
            t = cand[-1] + step
            continue
        i = int(hits[0])
        stats.comparisons += i + 1
        b = int(cand[i]) + w
        positions.append(b)
        p_values.append(float(p[i]))
        r = b + 1
        t = r + s
        ref_spec = None
        stats.anchors += 1

    bs = BoundarySet(
        positions=np.asarray(positions, dtype=np.int64),
        signal_length=n,
        p_values=np.asarray(p_values) if p_values else None,
    )
    return bs, stats


def ctxseg_segment(signal: TimeSeries, config: CtxsegConfig) -> BoundarySet:
    """Segment a signal adaptively; see :func:`ctxseg_segment_with_stats`."""
    bs, _ = ctxseg_segment_with_stats(signal, config)
    return bs
