"""Command-line harness: generate, segment, evaluate, experiment.

Diagnostics go to stderr at the level set by the ``CTXSEG_LOG`` environment
variable (error, warn, info, debug). Output files are written atomically;
any error exits nonzero without leaving partial outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import signal_io
from .boundaries import BoundarySet
from .core import MultiChannelSeries, TimeSeries
from .experiments import SEGMENT_METHODS, build_segmenter, format_table_csv, run_experiment, trial_seed
from .generator import ContextSchedule, generate
from .experiments import build_generator_config
from .metrics import evaluate
from .strategies import multichannel_vote
from .synth import HarmonicsSpec, fit_ar, generate_ar_sequence, generate_harmonics

log = logging.getLogger("ctxseg")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging() -> None:
    level = os.environ.get("CTXSEG_LOG", "warn").lower()
    if level not in _LOG_LEVELS:
        level = "warn"
    logging.basicConfig(stream=sys.stderr, level=_LOG_LEVELS[level], format="%(levelname)s %(name)s: %(message)s")


def _single_channel(path: Path, sample_rate: float | None) -> MultiChannelSeries:
    return signal_io.read_signal(path, sample_rate)


def _write_generated(output: Path, series_list: list[TimeSeries], labels: list[str], gt: BoundarySet) -> Path:
    data = MultiChannelSeries(channels=tuple(series_list), channel_labels=tuple(labels))
    signal_io.write_signal(output, data)
    gt_path = output.with_name(output.stem + ".gt.json")
    signal_io.write_ground_truth(gt_path, gt)
    return gt_path


def _cmd_generate(args: argparse.Namespace) -> int:
    output = Path(args.output)
    if args.source == "ctxgen":
        doc = json.loads(Path(args.schedule).read_text())
        steps = doc["schedule"] if isinstance(doc, dict) else doc
        schedule = ContextSchedule.from_pairs((s["rate_hz"], s["duration_s"]) for s in steps)
        gen_cfg = dict(doc.get("generator", {})) if isinstance(doc, dict) else {}
        if args.generator:
            gen_cfg.update(json.loads(Path(args.generator).read_text()))
        config = build_generator_config(gen_cfg, seed=args.seed, sample_rate_hz=args.sample_rate)
        sig = generate(schedule, config)
    elif args.source == "harmonics":
        spec = HarmonicsSpec(sample_rate_hz=args.sample_rate or 256.0)
        sig = generate_harmonics(spec)
    else:  # ar
        exemplars = {}
        if args.exemplar_a:
            exemplars["A"] = args.exemplar_a
        if args.exemplar_e:
            exemplars["E"] = args.exemplar_e
        for item in args.exemplar or []:
            key, _, path = item.partition("=")
            if not path:
                raise ValueError(f"--exemplar expects KEY=PATH, got {item!r}")
            exemplars[key] = path
        states = list(args.states)
        missing = sorted({s for s in states if s not in exemplars})
        if missing:
            raise ValueError(f"no exemplar given for state(s): {', '.join(missing)}")
        fs = args.sample_rate or 256.0
        models = {}
        for state, path in exemplars.items():
            data = signal_io.read_signal(Path(path), None)
            models[state] = fit_ar(data.channels[0], order=args.order)
        sig = generate_ar_sequence(
            models, states, segment_duration_s=args.segment_duration, sample_rate_hz=fs, seed=args.seed
        )

    gt_path = _write_generated(output, [sig.series], ["ch0"], sig.ground_truth)
    log.info("wrote %s and %s", output, gt_path)
    print(f"{output}")
    return 0


def _cmd_segment(args: argparse.Namespace) -> int:
    data = _single_channel(Path(args.input), args.sample_rate)
    fs = data.sample_rate_hz
    cfg = {
        "method": args.method,
        "window_s": args.window_s,
        "alpha": args.alpha,
        "stride_samples": args.stride,
        "taper": args.taper,
        "overlap": args.overlap,
    }
    _, segmenter = build_segmenter(cfg, fs)
    per_channel = {label: segmenter(ch) for label, ch in zip(data.channel_labels, data.channels)}

    output = Path(args.output)
    if len(per_channel) == 1 and not args.vote:
        signal_io.write_boundaries(output, next(iter(per_channel.values())))
    else:
        vote = None
        if args.vote:
            w = int(round(args.window_s * fs))
            vote = multichannel_vote(
                list(per_channel.values()),
                min_channels=args.min_channels,
                tolerance_samples=args.tolerance_samples,
                min_segment=w,
            )
        signal_io.write_multichannel_boundaries(output, per_channel, vote)
    counts = {label: len(bs) for label, bs in per_channel.items()}
    log.info("boundary counts: %s", counts)
    print(f"{output}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    found = signal_io.read_boundaries(Path(args.found))
    gt = signal_io.read_ground_truth(Path(args.ground_truth), signal_length=found.signal_length)
    tolerance = args.tolerance_units
    if tolerance is None:
        tolerance = 2 * int(round(args.window_s * args.sample_rate)) if args.window_s else 256
    report = evaluate(gt, found, args.sample_rate, tolerance)
    output = Path(args.output)
    if args.format == "json":
        signal_io.atomic_write_text(output, report.to_json() + "\n")
    else:
        signal_io.atomic_write_text(output, report.csv_header + "\n" + report.to_csv_row() + "\n")
    print(f"{output}")
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    spec = json.loads(Path(args.spec).read_text())
    if args.seed is not None:
        spec["seed"] = args.seed
    tables = run_experiment(spec, jobs=args.jobs)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, rows in tables.items():
        signal_io.atomic_write_text(out_dir / f"{name}.csv", format_table_csv(rows))
        print(f"{out_dir / (name + '.csv')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctxseg", description="Adaptive time-series segmentation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="generate a synthetic signal plus ground truth")
    gen_sub = p_gen.add_subparsers(dest="source", required=True)

    p_ctxgen = gen_sub.add_parser("ctxgen", help="spiking-neuron signal from a firing-rate schedule")
    p_ctxgen.add_argument("--schedule", required=True, help="JSON file with [{rate_hz, duration_s}, ...]")
    p_ctxgen.add_argument("--generator", help="JSON file with generator overrides")
    p_ctxgen.add_argument("--seed", type=int, default=0)
    p_ctxgen.add_argument("--sample-rate", type=float, default=None)
    p_ctxgen.add_argument("--output", required=True)
    p_ctxgen.set_defaults(func=_cmd_generate)

    p_harm = gen_sub.add_parser("harmonics", help="built-in seven-segment harmonics signal")
    p_harm.add_argument("--sample-rate", type=float, default=None)
    p_harm.add_argument("--output", required=True)
    p_harm.set_defaults(func=_cmd_generate, seed=0)

    p_ar = gen_sub.add_parser("ar", help="autoregressive signal fitted to exemplar recordings")
    p_ar.add_argument("--states", required=True, help="state sequence, e.g. AEAEAEA")
    p_ar.add_argument("--exemplar-a", help="exemplar signal file for state A")
    p_ar.add_argument("--exemplar-e", help="exemplar signal file for state E")
    p_ar.add_argument("--exemplar", action="append", help="KEY=PATH exemplar for other states")
    p_ar.add_argument("--order", type=int, default=8)
    p_ar.add_argument("--segment-duration", type=float, default=5.0)
    p_ar.add_argument("--seed", type=int, default=0)
    p_ar.add_argument("--sample-rate", type=float, default=None)
    p_ar.add_argument("--output", required=True)
    p_ar.set_defaults(func=_cmd_generate)

    p_seg = sub.add_parser("segment", help="discover segment boundaries in a signal file")
    p_seg.add_argument("input")
    p_seg.add_argument("--method", required=True, choices=SEGMENT_METHODS)
    p_seg.add_argument("--window-s", type=float, default=0.5)
    p_seg.add_argument("--alpha", type=float, default=0.05)
    p_seg.add_argument("--stride", type=int, default=1)
    p_seg.add_argument("--taper", default="hamming", choices=("hamming", "hann", "rectangular"))
    p_seg.add_argument("--overlap", type=float, default=0.0, help="overlap fraction for --method fixed")
    p_seg.add_argument("--sample-rate", type=float, default=None)
    p_seg.add_argument("--vote", action="store_true", help="add the multi-channel boundary vote")
    p_seg.add_argument("--min-channels", type=int, default=2)
    p_seg.add_argument("--tolerance-samples", type=int, default=2)
    p_seg.add_argument("--output", required=True)
    p_seg.set_defaults(func=_cmd_segment)

    p_eval = sub.add_parser("evaluate", help="score discovered boundaries against ground truth")
    p_eval.add_argument("--ground-truth", required=True)
    p_eval.add_argument("--found", required=True)
    p_eval.add_argument("--sample-rate", type=float, default=256.0)
    p_eval.add_argument("--tolerance-units", type=int, default=None)
    p_eval.add_argument("--window-s", type=float, default=0.5, help="window used to derive the default tolerance")
    p_eval.add_argument("--format", choices=("csv", "json"), default="csv")
    p_eval.add_argument("--output", required=True)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_exp = sub.add_parser("experiment", help="run a seeded ensemble experiment from a JSON spec")
    p_exp.add_argument("spec")
    p_exp.add_argument("--jobs", type=int, default=1)
    p_exp.add_argument("--seed", type=int, default=None, help="override the spec's master seed")
    p_exp.add_argument("--output", required=True, help="directory for the result tables")
    p_exp.set_defaults(func=_cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"ctxseg: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
