"""Command-line pipeline: localize, track, eval, synth.

Exit codes: 0 success, 2 file IO failure, 3 schema violation,
4 invalid configuration, 5 empty ground truth after filtering.
"""

import argparse
import dataclasses
import json
import os
import sys

from .errors import (
    ConfigInvalid,
    DegenerateHeight,
    EmptyGroundTruth,
    InsufficientKeypoints,
    NonPositiveHeight,
    SchemaError,
)
from .geometry import load_rig, merge_cross_view_duplicates
from .metrics import evaluate
from .synth import generate_scene
from .tracker import Tracker, TrackerConfig, localize_detection
from . import wire

EXIT_OK = 0
EXIT_IO = 2
EXIT_SCHEMA = 3
EXIT_CONFIG = 4
EXIT_EMPTY_GT = 5

_LOCALIZE_FAILURES = (InsufficientKeypoints, NonPositiveHeight, DegenerateHeight)


def _warn(message):
    print(f"warning: {message}", file=sys.stderr)


def _localize_file(rig, detections_path, tau):
    """Localize every parsable detection, warning about skipped lines."""
    localized = []
    for lineno, det in wire.read_detections_with_lines(detections_path):
        try:
            localized.append(localize_detection(rig, det, tau))
        except _LOCALIZE_FAILURES as exc:
            _warn(f"{detections_path}:{lineno}: skipped ({exc})")
    return localized


def cmd_localize(args) -> int:
    rig = load_rig(args.rig)
    localized = _localize_file(rig, args.detections, args.tau)
    records = [
        wire.LocalizationRecord(d.frame_id, d.view_id, d.location.x, d.location.z)
        for d in localized
    ]
    wire.write_localizations(args.out, records)
    return EXIT_OK


def cmd_track(args) -> int:
    rig = load_rig(args.rig)
    if args.h_body is not None:
        rig.body_height_m = args.h_body
    config = TrackerConfig(
        epsilon=args.epsilon,
        max_lifespan=args.lifespan,
        merge_radius=args.merge_radius,
        visibility_tau=args.tau,
        body_height_m=rig.body_height_m,
        use_appearance=not args.no_appearance,
    )
    localized = _localize_file(rig, args.detections, args.tau)
    by_frame = {}
    for det in localized:
        by_frame.setdefault(det.frame_id, []).append(det)
    tracker = Tracker(config)
    records = []
    if by_frame:
        for frame_id in range(min(by_frame), max(by_frame) + 1):
            frame = by_frame.get(frame_id, [])
            if config.merge_radius > 0:
                frame = merge_cross_view_duplicates(frame, rig, config.merge_radius)
            records.extend(tracker.step(frame, frame_id))
    wire.write_tracklets(args.out, records)
    print(
        f"frames={tracker.frames} tracks_created={tracker.created} "
        f"tracks_retired={tracker.retired}",
        file=sys.stderr,
    )
    return EXIT_OK


def _format_report(report) -> str:
    lines = [
        f"MOTA        {report.mota:8.4f}",
        f"MT          {report.mt_fraction:8.4f}",
        f"ML          {report.ml_fraction:8.4f}",
        f"FP          {report.fp:8d}",
        f"FN          {report.fn:8d}",
        f"IDSW        {report.idsw:8d}",
        f"gt points   {report.total_gt:8d}",
        f"frames      {report.frames:8d}",
        "localization precision:",
    ]
    for threshold, fraction in sorted(report.loc_precision.items()):
        lines.append(f"  within {threshold:<6g} m {100.0 * fraction:7.2f}%")
    return "\n".join(lines)


def cmd_eval(args) -> int:
    gt = wire.read_ground_truth(args.ground_truth)
    pred = wire.read_tracklets(args.predictions)
    thresholds = [float(t) for t in args.loc_thresholds.split(",") if t]
    report = evaluate(
        gt,
        pred,
        dist_threshold_m=args.dist_threshold,
        loc_thresholds=thresholds,
        eval_radius_m=args.radius,
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(_format_report(report))
    return EXIT_OK


def cmd_synth(args) -> int:
    config = wire.read_scene_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    rig = load_rig(args.rig)
    ground_truth, detections = generate_scene(config, rig)
    os.makedirs(args.out_dir, exist_ok=True)
    wire.write_detections(os.path.join(args.out_dir, "detections.jsonl"), detections)
    wire.write_ground_truth(os.path.join(args.out_dir, "ground_truth.jsonl"), ground_truth)
    print(
        f"agents={config.n_agents} frames={config.n_frames} "
        f"detections={len(detections)}",
        file=sys.stderr,
    )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="panotrack",
        description="Ground-plane multi-person localization and tracking for panoramic rigs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("localize", help="turn per-frame poses into 3D ground-plane positions")
    p.add_argument("rig", help="rig configuration JSON")
    p.add_argument("detections", help="detections JSONL")
    p.add_argument("out", help="output localizations JSONL")
    p.add_argument("--tau", type=float, default=0.3, help="keypoint visibility threshold")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("track", help="localize and track a detection stream")
    p.add_argument("rig")
    p.add_argument("detections")
    p.add_argument("out", help="output tracklets JSONL")
    p.add_argument("--epsilon", type=float, default=1.0, help="matching cost threshold")
    p.add_argument("--lifespan", type=int, default=10, help="frames a track survives unmatched")
    p.add_argument("--merge-radius", type=float, default=0.0, help="cross-view merge radius, m")
    p.add_argument("--h-body", type=float, default=None, help="override the rig height prior, m")
    p.add_argument("--tau", type=float, default=0.3)
    p.add_argument(
        "--no-appearance",
        action="store_true",
        help="ablation: match on trajectory cost alone",
    )
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("eval", help="score tracklets against ground truth")
    p.add_argument("ground_truth")
    p.add_argument("predictions")
    p.add_argument("--dist-threshold", type=float, default=1.0, help="match gate, m")
    p.add_argument("--loc-thresholds", default="0.5,1.0,2.0", help="comma-separated meters")
    p.add_argument("--radius", type=float, default=10.0, help="evaluation radius, m (inf disables)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic scene with ground truth")
    p.add_argument("config", help="scene configuration JSON")
    p.add_argument("rig")
    p.add_argument("out_dir")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ConfigInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmptyGroundTruth as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_GT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
