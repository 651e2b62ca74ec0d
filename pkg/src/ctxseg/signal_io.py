"""Reading and writing signal files, boundary sets and ground truth.

Two signal formats are supported:

* CSV: header row of channel labels, one row per sample. The sample rate
  comes from a JSON sidecar (``<file>.json``) or a caller override.
* Raw: little-endian 32-bit floats, channels concatenated sample-major
  per channel, with a mandatory JSON sidecar
  ``{"sample_rate_hz": ..., "channels": [...], "samples": N}``.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from pathlib import Path

import numpy as np

from .boundaries import BoundarySet
from .core import MultiChannelSeries, TimeSeries

log = logging.getLogger(__name__)

DEFAULT_SAMPLE_RATE_HZ = 256.0


def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def atomic_write_text(path: Path, text: str) -> None:
    """Write text via a temp file and rename, so failures leave no partial file."""
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def atomic_write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def write_signal(path, data: MultiChannelSeries) -> None:
    """Write a signal as CSV (``.csv`` suffix) or raw float32 plus sidecar."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        _write_csv(path, data)
    else:
        _write_raw(path, data)


def read_signal(path, sample_rate_hz: float | None = None) -> MultiChannelSeries:
    """Read a signal file; the declared sample rate must match any override."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if path.suffix.lower() == ".csv":
        return _read_csv(path, sample_rate_hz)
    return _read_raw(path, sample_rate_hz)


def _write_csv(path: Path, data: MultiChannelSeries) -> None:
    rows = np.column_stack([ch.samples for ch in data.channels])
    lines = [",".join(data.channel_labels)]
    lines.extend(",".join(format(v, ".17g") for v in row) for row in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")
    sidecar = {
        "sample_rate_hz": data.sample_rate_hz,
        "channels": list(data.channel_labels),
        "samples": data.n_samples,
    }
    atomic_write_text(_sidecar_path(path), json.dumps(sidecar))


def _read_csv(path: Path, sample_rate_hz: float | None) -> MultiChannelSeries:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise ValueError(f"{path}: empty CSV")
        labels = [h.strip() for h in header]
        values = [[float(v) for v in row] for row in reader if row]
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != len(labels):
        raise ValueError(f"{path}: ragged CSV rows")
    fs = _resolve_sample_rate(path, sample_rate_hz, expected_samples=arr.shape[0], labels=labels)
    channels = tuple(TimeSeries(samples=arr[:, i], sample_rate_hz=fs) for i in range(len(labels)))
    return MultiChannelSeries(channels=channels, channel_labels=tuple(labels))


def _write_raw(path: Path, data: MultiChannelSeries) -> None:
    stacked = np.concatenate([ch.samples for ch in data.channels]).astype("<f4")
    atomic_write_bytes(path, stacked.tobytes())
    sidecar = {
        "sample_rate_hz": data.sample_rate_hz,
        "channels": list(data.channel_labels),
        "samples": data.n_samples,
    }
    atomic_write_text(_sidecar_path(path), json.dumps(sidecar))


def _read_raw(path: Path, sample_rate_hz: float | None) -> MultiChannelSeries:
    sidecar_file = _sidecar_path(path)
    if not sidecar_file.exists():
        raise FileNotFoundError(f"{path}: raw signals need a {sidecar_file.name} sidecar")
    meta = json.loads(sidecar_file.read_text())
    labels = [str(c) for c in meta["channels"]]
    n = int(meta["samples"])
    fs = float(meta["sample_rate_hz"])
    if sample_rate_hz is not None and sample_rate_hz != fs:
        raise ValueError(f"{path}: declared rate {fs} Hz does not match requested {sample_rate_hz} Hz")
    flat = np.fromfile(path, dtype="<f4").astype(float)
    if flat.size != n * len(labels):
        raise ValueError(f"{path}: payload of {flat.size} values does not match declared {n}x{len(labels)}")
    channels = tuple(
        TimeSeries(samples=flat[i * n : (i + 1) * n], sample_rate_hz=fs) for i in range(len(labels))
    )
    return MultiChannelSeries(channels=channels, channel_labels=tuple(labels))


def _resolve_sample_rate(path: Path, override: float | None, expected_samples: int, labels) -> float:
    sidecar_file = _sidecar_path(path)
    if sidecar_file.exists():
        meta = json.loads(sidecar_file.read_text())
        fs = float(meta.get("sample_rate_hz", DEFAULT_SAMPLE_RATE_HZ))
        declared = meta.get("samples")
        if declared is not None and int(declared) != expected_samples:
            raise ValueError(
                f"{path}: sidecar declares {declared} samples but file holds {expected_samples}"
            )
        if override is not None and override != fs:
            raise ValueError(f"{path}: declared rate {fs} Hz does not match requested {override} Hz")
        return fs
    if override is not None:
        return override
    log.info("%s: no sample rate given; assuming %g Hz", path, DEFAULT_SAMPLE_RATE_HZ)
    return DEFAULT_SAMPLE_RATE_HZ


def write_boundaries(path, bs: BoundarySet) -> None:
    atomic_write_text(Path(path), bs.to_json())


def read_boundaries(path) -> BoundarySet:
    return BoundarySet.from_json(Path(path).read_text())


def write_multichannel_boundaries(path, per_channel: dict[str, BoundarySet], vote: BoundarySet | None = None) -> None:
    doc: dict = {"channels": {label: bs.to_dict() for label, bs in per_channel.items()}}
    if vote is not None:
        doc["vote"] = vote.to_dict()
    atomic_write_text(Path(path), json.dumps(doc))


def write_ground_truth(path, bs: BoundarySet) -> None:
    doc = {"positions": [int(p) for p in bs.positions], "signal_length": int(bs.signal_length)}
    atomic_write_text(Path(path), json.dumps(doc))


def read_ground_truth(path, signal_length: int | None = None) -> BoundarySet:
    doc = json.loads(Path(path).read_text())
    length = doc.get("signal_length", signal_length)
    if length is None:
        raise ValueError(f"{path}: ground truth lacks signal_length and none was provided")
    return BoundarySet(positions=np.asarray(doc["positions"], dtype=np.int64), signal_length=int(length))
