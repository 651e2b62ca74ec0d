"""Segment boundary containers and serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BoundarySet:
    """Strictly increasing boundary sample indices on a signal of known length.

    Positions are exclusive of the signal ends: ``0 < p < signal_length``.
    ``p_values`` optionally records the test p-value that emitted each
    boundary (diagnostics only; not part of equality semantics).
    """

    positions: np.ndarray
    signal_length: int
    p_values: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.int64).reshape(-1)
        object.__setattr__(self, "positions", pos)
        if self.signal_length < 0:
            raise ValueError("signal_length must be non-negative")
        if pos.size:
            if pos[0] <= 0 or pos[-1] >= self.signal_length:
                raise ValueError("positions must lie strictly inside the signal")
            if np.any(np.diff(pos) <= 0):
                raise ValueError("positions must be strictly increasing")
        if self.p_values is not None:
            pv = np.asarray(self.p_values, dtype=float).reshape(-1)
            if pv.size != pos.size:
                raise ValueError("one p-value per boundary required")
            object.__setattr__(self, "p_values", pv)

    def __len__(self) -> int:
        return self.positions.size

    @classmethod
    def empty(cls, signal_length: int) -> "BoundarySet":
        return cls(positions=np.empty(0, dtype=np.int64), signal_length=signal_length)

    def to_dict(self) -> dict:
        out = {
            "signal_length": int(self.signal_length),
            "positions": [int(p) for p in self.positions],
        }
        if self.p_values is not None:
            out["p_values"] = [float(p) for p in self.p_values]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "BoundarySet":
        return cls(
            positions=np.asarray(d["positions"], dtype=np.int64),
            signal_length=int(d["signal_length"]),
            p_values=None if d.get("p_values") is None else np.asarray(d["p_values"], dtype=float),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "BoundarySet":
        return cls.from_dict(json.loads(s))


#: Ground-truth boundaries share the container and invariants of discovered ones.
GroundTruth = BoundarySet


def segments_from_boundaries(bs: BoundarySet) -> list[tuple[int, int]]:
    """Partition ``[0, signal_length)`` into half-open segments at the boundaries.

    The sample at each boundary index starts the following segment. The
    result is contiguous, non-overlapping and covers the whole signal.
    """
    edges = [0, *map(int, bs.positions), bs.signal_length]
    return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]
