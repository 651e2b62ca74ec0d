"""Seeded ensemble experiments: signal generation, segmentation, evaluation.

An experiment is described by a JSON-compatible dict and produces named
tables (lists of flat dicts). Trials derive child seeds from the master
seed and their task/trial index, so any single trial is reproducible in
isolation and results are byte-identical across runs and machines; trials
may execute in parallel, and aggregation always reduces in trial order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .baselines import NleoConfig, SpsConfig, VarriConfig, nleo_segment, sps_segment, varri_segment
from .boundaries import BoundarySet, segments_from_boundaries
from .core import TimeSeries
from .generator import ContextSchedule, GeneratorConfig, LifParams, generate
from .metrics import boundary_delay, evaluate
from .segmenter import CtxsegConfig, ctxseg_segment
from .strategies import FixedSlicing, fixed_slices
from .synth import ArModel, HarmonicsSpec, generate_ar_sequence, generate_harmonics

log = logging.getLogger(__name__)

SEGMENT_METHODS = ("ctxseg", "varri", "nleo", "sps", "fixed")


def trial_seed(master_seed: int, *key: int) -> int:
    """Derive the seed of one trial from the master seed and its index path."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def build_generator_config(cfg: dict | None, seed: int, sample_rate_hz: float | None = None) -> GeneratorConfig:
    cfg = dict(cfg or {})
    fs = float(cfg.pop("sample_rate_hz", sample_rate_hz or 256.0))
    lif_cfg = dict(cfg.pop("lif", {}))
    lif_cfg.setdefault("dt", 1.0 / fs)
    return GeneratorConfig(
        neuron_count=int(cfg.pop("neuron_count", 500)),
        lif=LifParams(**lif_cfg),
        sample_rate_hz=fs,
        spike_noise_std=float(cfg.pop("spike_noise_std", 0.1)),
        output_noise_std=cfg.pop("output_noise_std", None),
        seed=seed,
        **cfg,
    )


def build_signal(source: dict, seed: int):
    """Realize one trial's signal from a source description."""
    kind = source.get("kind")
    if kind == "ctxgen":
        schedule = ContextSchedule.from_pairs(
            (step["rate_hz"], step["duration_s"]) for step in source["schedule"]
        )
        config = build_generator_config(source.get("generator"), seed)
        return generate(schedule, config)
    if kind == "harmonics":
        spec_cfg = source.get("spec") or {}
        spec = HarmonicsSpec(**{k: tuple(map(tuple, v)) if k == "segments" else v for k, v in spec_cfg.items()})
        return generate_harmonics(spec)
    if kind == "ar":
        models = {
            state: ArModel(coefficients=np.asarray(m["coefficients"], dtype=float), noise_std=float(m["noise_std"]))
            for state, m in source["models"].items()
        }
        return generate_ar_sequence(
            models,
            source["states"],
            segment_duration_s=float(source.get("segment_duration_s", 5.0)),
            sample_rate_hz=float(source.get("sample_rate_hz", 256.0)),
            seed=seed,
        )
    raise ValueError(f"unknown signal source kind {kind!r}")


def build_segmenter(cfg: dict, sample_rate_hz: float):
    """Turn a segmenter description into (label, callable TimeSeries -> BoundarySet)."""
    method = cfg.get("method")
    if method not in SEGMENT_METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {SEGMENT_METHODS}")
    w = int(round(float(cfg.get("window_s", 0.5)) * sample_rate_hz))
    label = cfg.get("label") or method

    if method == "ctxseg":
        conf = CtxsegConfig(
            window_samples=w,
            stride_samples=int(cfg.get("stride_samples", 1)),
            alpha=float(cfg.get("alpha", 0.05)),
            taper_kind=cfg.get("taper", "hamming"),
            slide_by_stride=bool(cfg.get("slide_by_stride", False)),
            include_dc=bool(cfg.get("include_dc", True)),
        )
        return label, lambda ts: ctxseg_segment(ts, conf)
    if method == "varri":
        conf = VarriConfig(
            window_samples=w,
            k_a=float(cfg.get("k_a", 1.0)),
            k_f=float(cfg.get("k_f", 7.0)),
            threshold_window_s=float(cfg.get("threshold_window_s", 8.0)),
            extrema_window_s=float(cfg.get("extrema_window_s", 0.1)),
        )
        return label, lambda ts: varri_segment(ts, conf)
    if method == "nleo":
        conf = NleoConfig(window_samples=w, extrema_window_s=float(cfg.get("extrema_window_s", 0.1)))
        return label, lambda ts: nleo_segment(ts, conf)
    if method == "sps":
        kwargs = {}
        if "bands_hz" in cfg:
            kwargs["bands_hz"] = tuple(tuple(b) for b in cfg["bands_hz"])
        conf = SpsConfig(
            window_samples=w,
            alpha=float(cfg.get("alpha", 0.05)),
            jump_after_boundary=bool(cfg.get("jump_after_boundary", False)),
            **kwargs,
        )
        return label, lambda ts: sps_segment(ts, conf)
    # fixed slicing: boundary-like positions at the window starts after 0
    slicing = FixedSlicing(window_samples=w, overlap_fraction=float(cfg.get("overlap", 0.0)))

    def run_fixed(ts: TimeSeries) -> BoundarySet:
        slices = fixed_slices(len(ts), slicing)
        starts = np.asarray([s for s, _ in slices[1:]], dtype=np.int64)
        return BoundarySet(positions=starts, signal_length=len(ts))

    return label, run_fixed


def _tolerance_units(metrics_cfg: dict | None, window_samples: int) -> int:
    if metrics_cfg and metrics_cfg.get("tolerance_units") is not None:
        return int(metrics_cfg["tolerance_units"])
    return 2 * window_samples


def _ensemble_trial(payload: dict) -> list[tuple]:
    spec = payload["spec"]
    seed = trial_seed(spec["seed"], payload["trial"])
    sig = build_signal(spec["signal"], seed)
    fs = sig.series.sample_rate_hz
    rows = []
    for seg_cfg in spec["segmenters"]:
        label, segmenter = build_segmenter(seg_cfg, fs)
        found = segmenter(sig.series)
        w = int(round(float(seg_cfg.get("window_s", 0.5)) * fs))
        tol = _tolerance_units(spec.get("metrics"), w)
        report = evaluate(sig.ground_truth, found, fs, tol)
        rows.append((label, report.boundary_count, report.mean_delay_s, report.sensitivity, report.similarity))
    return rows


def _map_trials(worker, payloads, jobs: int):
    if jobs <= 1 or len(payloads) <= 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, payloads, chunksize=max(1, len(payloads) // (4 * jobs))))


def _aggregate_rows(label: str, table: np.ndarray, trials: int) -> dict:
    names = ("count", "delay_s", "sensitivity", "similarity")
    out = {"label": label, "trials": trials}
    for i, name in enumerate(names):
        col = table[:, i]
        out[f"{name}_mean"] = float(col.mean())
        out[f"{name}_var"] = float(col.var(ddof=1)) if trials > 1 else 0.0
    return out


def run_ensemble(spec: dict, jobs: int = 1) -> dict[str, list[dict]]:
    """Evaluate one or more segmenters over seeded trials of one signal source."""
    spec = dict(spec)
    if "segmenters" not in spec:
        spec["segmenters"] = [spec.pop("segmenter")]
    trials = int(spec.get("trials", 1))
    payloads = [{"spec": spec, "trial": k} for k in range(trials)]
    results = _map_trials(_ensemble_trial, payloads, jobs)

    labels = [cfg.get("label") or cfg["method"] for cfg in spec["segmenters"]]
    aggregate = []
    per_trial = []
    for j, label in enumerate(labels):
        table = np.asarray([[r[j][1], r[j][2], r[j][3], r[j][4]] for r in results])
        aggregate.append(_aggregate_rows(label, table, trials))
        if spec.get("emit_trials"):
            for k, row in enumerate(table):
                per_trial.append(
                    {
                        "label": label,
                        "trial": k,
                        "count": float(row[0]),
                        "delay_s": float(row[1]),
                        "sensitivity": float(row[2]),
                        "similarity": float(row[3]),
                    }
                )
    tables = {"aggregate": aggregate}
    if spec.get("emit_trials"):
        tables["trials"] = per_trial
    return tables


def _window_sweep_trial(payload: dict) -> list[tuple]:
    spec = payload["spec"]
    seed = trial_seed(spec["seed"], payload["trial"])
    sig = build_signal(spec["signal"], seed)
    fs = sig.series.sample_rate_hz
    rows = []
    for window_s in spec["windows_s"]:
        for alpha in spec["alphas"]:
            _, segmenter = build_segmenter(
                {"method": "ctxseg", "window_s": window_s, "alpha": alpha, **spec.get("ctxseg", {})}, fs
            )
            found = segmenter(sig.series)
            rows.append((float(window_s), float(alpha), len(found)))
    return rows


def run_window_sweep(spec: dict, jobs: int = 1) -> dict[str, list[dict]]:
    """Boundary/segment counts across window sizes and significance levels."""
    spec = dict(spec)
    spec.setdefault("alphas", [0.05, 0.01, 0.001])
    spec.setdefault("seed", 0)
    trials = int(spec.get("trials", 1))
    payloads = [{"spec": spec, "trial": k} for k in range(trials)]
    results = _map_trials(_window_sweep_trial, payloads, jobs)
    rows = []
    for i, (window_s, alpha) in enumerate(
        (w, a) for w in spec["windows_s"] for a in spec["alphas"]
    ):
        counts = np.asarray([r[i][2] for r in results], dtype=float)
        rows.append(
            {
                "window_s": window_s,
                "alpha": alpha,
                "boundary_count_mean": float(counts.mean()),
                "segment_count_mean": float(counts.mean()) + 1.0,
            }
        )
    return {"window_sweep": rows}


def _step_schedule(rate_from: float, rate_to: float, pre_s: float, post_s: float) -> list[dict]:
    return [
        {"rate_hz": rate_from, "duration_s": pre_s},
        {"rate_hz": rate_to, "duration_s": post_s},
    ]


def _delay_grid_trial(payload: dict) -> tuple:
    spec = payload["spec"]
    seed = trial_seed(spec["seed"], payload["task"], payload["trial"])
    rate_from, rate_to = payload["pair"]
    source = {
        "kind": "ctxgen",
        "schedule": _step_schedule(rate_from, rate_to, spec.get("pre_s", 1.0), spec.get("post_s", 5.0)),
        "generator": spec.get("generator"),
    }
    sig = build_signal(source, seed)
    fs = sig.series.sample_rate_hz
    _, segmenter = build_segmenter(
        {"method": "ctxseg", "window_s": spec.get("window_s", 0.5), "alpha": spec.get("alpha", 0.05)}, fs
    )
    found = segmenter(sig.series)
    delays = boundary_delay(sig.ground_truth, found, fs)
    d = delays[0]
    return (d is not None, d if d is not None else np.nan)


def run_delay_grid(spec: dict, jobs: int = 1) -> dict[str, list[dict]]:
    """Mean detection delay for step changes between all ordered rate pairs."""
    spec = dict(spec)
    spec.setdefault("seed", 0)
    rates = spec.get("rates", [2, 6, 10, 20, 40])
    trials = int(spec.get("trials", 100))
    pairs = [(a, b) for a in rates for b in rates if a != b]
    payloads = [
        {"spec": spec, "task": t, "trial": k, "pair": pair}
        for t, pair in enumerate(pairs)
        for k in range(trials)
    ]
    results = _map_trials(_delay_grid_trial, payloads, jobs)
    rows = []
    for t, (rate_from, rate_to) in enumerate(pairs):
        chunk = results[t * trials : (t + 1) * trials]
        hits = np.asarray([c[0] for c in chunk], dtype=bool)
        delays = np.asarray([c[1] for c in chunk], dtype=float)
        present = delays[hits]
        rows.append(
            {
                "rate_from_hz": rate_from,
                "rate_to_hz": rate_to,
                "sensitivity": float(hits.mean()),
                "mean_delay_s": float(present.mean()) if present.size else float("nan"),
            }
        )
    return {"delay_grid": rows}


def _oscillation_trial(payload: dict) -> dict:
    spec = payload["spec"]
    seed = trial_seed(spec["seed"], payload["task"], payload["trial"])
    period_s = payload["period_s"]
    lo, hi = spec.get("rates", [20, 40])
    states = int(spec.get("states", 6))
    schedule = [
        {"rate_hz": (lo if i % 2 == 0 else hi), "duration_s": period_s} for i in range(states)
    ]
    sig = build_signal({"kind": "ctxgen", "schedule": schedule, "generator": spec.get("generator")}, seed)
    fs = sig.series.sample_rate_hz
    out = {}
    for alpha in spec["alphas"]:
        _, segmenter = build_segmenter(
            {"method": "ctxseg", "window_s": spec.get("window_s", 0.5), "alpha": alpha}, fs
        )
        found = segmenter(sig.series)
        delays = boundary_delay(sig.ground_truth, found, fs)
        present = [d for d in delays if d is not None]
        sizes = [(e - s) / fs for s, e in segments_from_boundaries(found)]
        out[alpha] = {
            "sensitivity": len(present) / len(delays),
            "present_delays": present,
            "segment_sizes": sizes,
        }
    return out


def run_oscillation(spec: dict, jobs: int = 1) -> dict[str, list[dict]]:
    """Sensitivity, delays and segment sizes for alternating-rate schedules."""
    spec = dict(spec)
    spec.setdefault("seed", 0)
    spec.setdefault("alphas", [0.05])
    periods = spec.get("periods_s", [1, 2, 3, 4, 5, 6])
    trials = int(spec.get("trials", 100))
    payloads = [
        {"spec": spec, "task": t, "trial": k, "period_s": float(p)}
        for t, p in enumerate(periods)
        for k in range(trials)
    ]
    results = _map_trials(_oscillation_trial, payloads, jobs)

    summary_rows = []
    size_rows = []
    for t, period_s in enumerate(periods):
        chunk = results[t * trials : (t + 1) * trials]
        for alpha in spec["alphas"]:
            sens = np.asarray([c[alpha]["sensitivity"] for c in chunk])
            delays = np.concatenate([np.asarray(c[alpha]["present_delays"], dtype=float) for c in chunk]) \
                if any(c[alpha]["present_delays"] for c in chunk) else np.empty(0)
            sizes = np.concatenate([np.asarray(c[alpha]["segment_sizes"], dtype=float) for c in chunk])
            summary_rows.append(
                {
                    "period_s": float(period_s),
                    "alpha": float(alpha),
                    "sensitivity_mean": float(sens.mean()),
                    "delay_mean_s": float(delays.mean()) if delays.size else float("nan"),
                    "delay_p95_s": float(np.percentile(delays, 95)) if delays.size else float("nan"),
                    "n_delays": int(delays.size),
                }
            )
            size_rows.extend(
                {"period_s": float(period_s), "alpha": float(alpha), "segment_size_s": float(sz)}
                for sz in sizes
            )
    return {"oscillation": summary_rows, "segment_sizes": size_rows}


_KINDS = {
    "ensemble": run_ensemble,
    "window_sweep": run_window_sweep,
    "delay_grid": run_delay_grid,
    "oscillation": run_oscillation,
}


def run_experiment(spec: dict, jobs: int = 1) -> dict[str, list[dict]]:
    """Dispatch an experiment spec to its runner; returns named tables."""
    kind = spec.get("kind", "ensemble")
    if kind not in _KINDS:
        raise ValueError(f"unknown experiment kind {kind!r}; expected one of {sorted(_KINDS)}")
    if "seed" not in spec:
        raise ValueError("experiment spec needs a master seed")
    trials = int(spec.get("trials", 1))
    if trials < 1:
        raise ValueError("trials must be >= 1")
    log.info("running %s experiment: %d trial(s), %d job(s)", kind, trials, jobs)
    return _KINDS[kind](spec, jobs=jobs)


def format_table_csv(rows: list[dict]) -> str:
    """Render a table as locale-independent CSV with 6 significant digits."""
    if not rows:
        return ""
    cols = list(rows[0].keys())
    lines = [",".join(cols)]
    for row in rows:
        cells = []
        for c in cols:
            v = row[c]
            cells.append(format(v, ".6g") if isinstance(v, float) else str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
