"""Boundary evaluation: delay, sensitivity, edit-distance similarity and reports.

Delay and sensitivity treat each ground-truth boundary's window (up to the
next ground-truth boundary, or the signal end for the last one) as its
discovery opportunity: a discovery inside the window is a hit, anything
later counts toward the next boundary. Similarity scores the agreement of
two boundary sets through a minimum-cost edit alignment where near misses
within a tolerance are cheaper than a miss plus a false alarm.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .boundaries import BoundarySet, GroundTruth


@dataclass(frozen=True)
class EvaluationReport:
    """Summary of one (ground truth, discovered boundaries) comparison."""

    boundary_count: float
    mean_delay_s: float
    sensitivity: float
    similarity: float

    def __post_init__(self):
        if not 0.0 <= self.sensitivity <= 1.0:
            raise ValueError("sensitivity out of range")
        if not 0.0 <= self.similarity <= 1.0:
            raise ValueError("similarity out of range")
        if self.mean_delay_s < 0:
            raise ValueError("delay must be non-negative")

    csv_header = "count,delay_s,sensitivity,similarity"

    def to_csv_row(self) -> str:
        return ",".join(
            format(v, ".6g")
            for v in (self.boundary_count, self.mean_delay_s, self.sensitivity, self.similarity)
        )

    def to_dict(self) -> dict:
        return {
            "count": self.boundary_count,
            "delay_s": self.mean_delay_s,
            "sensitivity": self.sensitivity,
            "similarity": self.similarity,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _windows(gt: GroundTruth) -> list[tuple[int, int]]:
    """Discovery window per ground-truth boundary: [g_i, g_{i+1}) or [g_last, end)."""
    pos = list(map(int, gt.positions))
    return [(g, nxt) for g, nxt in zip(pos, pos[1:] + [gt.signal_length])]


def boundary_delay(gt: GroundTruth, found: BoundarySet, sample_rate_hz: float) -> list[float | None]:
    """Seconds from each ground-truth boundary to its first in-window discovery.

    Returns one entry per ground-truth boundary; ``None`` marks a missed
    boundary (no discovery before the next ground-truth boundary). Later
    discoveries are never attributed backward.
    """
    if len(gt) == 0:
        raise ValueError("ground truth must be nonempty")
    f = found.positions
    delays: list[float | None] = []
    for g, nxt in _windows(gt):
        in_window = f[(f >= g) & (f < nxt)]
        delays.append(float(in_window[0] - g) / sample_rate_hz if in_window.size else None)
    return delays


def boundary_sensitivity(gt: GroundTruth, found: BoundarySet) -> float:
    """Fraction of ground-truth boundaries discovered before the next one."""
    if len(gt) == 0:
        raise ValueError("sensitivity undefined for empty ground truth")
    delays = boundary_delay(gt, found, sample_rate_hz=1.0)
    return sum(d is not None for d in delays) / len(delays)


def _edit_alignment(gt_pos: np.ndarray, f_pos: np.ndarray, tol: int) -> tuple[float, int]:
    """Minimum-cost alignment of two sorted boundary lists.

    Pairing boundaries within ``tol`` units costs ``|g - f| / (tol + 1)``
    (zero for exact matches); unpaired boundaries cost 1 each. Ties in
    cost prefer more pairs. Returns (cost, number of paired boundaries).
    Costs are linear in distance, so an optimal alignment is non-crossing
    and the sorted DP below is globally optimal.
    """
    ng, nf = gt_pos.size, f_pos.size
    big = (np.inf, 0)
    prev = [(float(j), 0) for j in range(nf + 1)]
    for i in range(1, ng + 1):
        cur = [big] * (nf + 1)
        cur[0] = (float(i), 0)
        g = int(gt_pos[i - 1])
        for j in range(1, nf + 1):
            f = int(f_pos[j - 1])
            best = min(
                (prev[j][0] + 1.0, prev[j][1]),
                (cur[j - 1][0] + 1.0, cur[j - 1][1]),
                key=lambda c: (c[0], -c[1]),
            )
            d = abs(g - f)
            if d <= tol:
                paired = (prev[j - 1][0] + d / (tol + 1.0), prev[j - 1][1] + 1)
                best = min(best, paired, key=lambda c: (c[0], -c[1]))
            cur[j] = best
        prev = cur
    return prev[nf]


def boundary_similarity(gt: GroundTruth, found: BoundarySet, tolerance_units: int) -> float:
    """Edit-distance agreement between boundary sets on a 0..1 scale.

    1 means identical; 0 means no agreement at all. Near misses within
    ``tolerance_units`` samples are matched as transpositions with cost
    proportional to their offset; everything unmatched counts as a full
    addition or deletion. The score is ``1 - cost / operations`` where
    operations counts matched pairs once and unmatched boundaries once.
    """
    if gt.signal_length != found.signal_length:
        raise ValueError("boundary sets must share signal_length")
    if tolerance_units < 0:
        raise ValueError("tolerance_units must be non-negative")
    ng, nf = len(gt), len(found)
    if ng == 0 and nf == 0:
        return 1.0
    cost, pairs = _edit_alignment(gt.positions, found.positions, int(tolerance_units))
    operations = ng + nf - pairs
    return 1.0 - cost / operations


def mean_delay_with_end_convention(gt: GroundTruth, found: BoundarySet, sample_rate_hz: float) -> float:
    """Mean seconds from each ground-truth boundary to the next discovery anywhere.

    A boundary with no later discovery at all contributes the distance to
    the signal end, so a run that finds nothing on an N-sample signal
    reports the mean distance from each true boundary to the end.
    """
    if len(gt) == 0:
        raise ValueError("ground truth must be nonempty")
    f = found.positions
    total = 0.0
    for g in map(int, gt.positions):
        later = f[f >= g]
        nxt = int(later[0]) if later.size else gt.signal_length
        total += (nxt - g) / sample_rate_hz
    return total / len(gt)


def evaluate(gt: GroundTruth, found: BoundarySet, sample_rate_hz: float, tolerance_units: int) -> EvaluationReport:
    """Assemble the per-run report: count, mean delay, sensitivity, similarity."""
    if gt.signal_length != found.signal_length:
        raise ValueError("boundary sets must share signal_length")
    return EvaluationReport(
        boundary_count=float(len(found)),
        mean_delay_s=mean_delay_with_end_convention(gt, found, sample_rate_hz),
        sensitivity=boundary_sensitivity(gt, found),
        similarity=boundary_similarity(gt, found, tolerance_units),
    )
