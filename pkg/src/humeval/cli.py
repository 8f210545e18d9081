"""Command-line entry point: calibrate -> score -> correlate / leaderboard.

Numeric knobs resolve in three layers: built-in defaults, then the flat
key = value config file named by HUMEVAL_CONFIG, then explicit flags.
Runtime failures print a machine-readable JSON summary on stderr and exit 1;
argparse usage errors keep the conventional exit 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import formats, harness, pipeline, synth
from .anatomy import AnatConfig
from .kinematics import KinConfig

CONFIG_ENV = "HUMEVAL_CONFIG"
_CONFIG_KEYS = ("tau", "sigma", "truncate", "lambda_local", "lambda_global", "jobs")


def _parse_config_file(path: str) -> dict:
    """Flat key = value file; # starts a comment, strings may be quoted."""
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip().strip("\"'")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r} (allowed: {', '.join(_CONFIG_KEYS)})")
        values[key] = int(value) if key == "jobs" else float(value)
    return values


def _resolve_configs(args) -> tuple[AnatConfig, KinConfig, int | None]:
    merged: dict = {}
    config_path = os.environ.get(CONFIG_ENV)
    if config_path:
        merged.update(_parse_config_file(config_path))
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    anat_cfg = AnatConfig(tau=merged.get("tau", AnatConfig().tau))
    kin_defaults = KinConfig()
    kin_cfg = KinConfig(
        gaussian_sigma_frames=merged.get("sigma", kin_defaults.gaussian_sigma_frames),
        gaussian_truncate=merged.get("truncate", kin_defaults.gaussian_truncate),
        phi_lambda_local=merged.get("lambda_local", kin_defaults.phi_lambda_local),
        phi_lambda_global=merged.get("lambda_global", kin_defaults.phi_lambda_global),
    )
    jobs = merged.get("jobs")
    return anat_cfg, kin_cfg, (int(jobs) if jobs is not None else None)


def _add_metric_flags(parser):
    parser.add_argument("--tau", type=float, help="part-visibility confidence threshold")
    parser.add_argument("--sigma", type=float, help="temporal Gaussian sigma in frames")
    parser.add_argument("--truncate", type=float, help="Gaussian kernel truncation radius in sigmas")
    parser.add_argument("--lambda-local", dest="lambda_local", type=float, help="local jerk scale, rad/s^3")
    parser.add_argument("--lambda-global", dest="lambda_global", type=float, help="orientation deviation scale")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="humeval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="fit min/max bounds over a real-motion corpus")
    p.add_argument("corpus_dir")
    p.add_argument("--out", required=True, help="output calibration.json")
    p.add_argument("--corpus-id", default=None)
    p.add_argument("--percentile", type=float, default=None,
                   help="robust bounds at p / 100-p percentiles instead of extrema")
    _add_metric_flags(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("score", help="score every video in a feature directory")
    p.add_argument("features_dir")
    p.add_argument("--calibration", required=True)
    p.add_argument("--out", required=True, help="output reports.ndjson")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    _add_metric_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("correlate", help="rank correlation of reports against human ratings")
    p.add_argument("reports")
    p.add_argument("ratings")
    p.add_argument("--out", default=None, help="output correlations.csv (default: stdout only)")
    p.add_argument("--ablation", action="store_true", help="also correlate each component alone")
    p.add_argument("--allow-missing", action="store_true",
                   help="drop rated videos that have no report instead of aborting")
    p.add_argument("--per-model", action="store_true",
                   help="extension: correlate within each model instead of pooling all videos")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("leaderboard", help="per-model mean quality table")
    p.add_argument("reports")
    p.add_argument("ratings", help="ratings.csv supplying the video -> model mapping")
    p.add_argument("--out", default=None, help="output leaderboard.csv")
    p.set_defaults(func=cmd_leaderboard)

    p = sub.add_parser("categories", help="per-category per-model breakdown")
    p.add_argument("reports")
    p.add_argument("ratings")
    p.add_argument("--out", default=None, help="output categories.csv")
    p.add_argument("--plotdata", default=None, help="output plot-data JSON")
    p.set_defaults(func=cmd_categories)

    p = sub.add_parser("synth", help="generate synthetic feature files")
    synth_sub = p.add_subparsers(dest="synth_command", required=True)

    g = synth_sub.add_parser("gen", help="emit one synthetic video's feature files")
    g.add_argument("--kind", required=True, choices=("smooth", "jitter", "flip", "kps"))
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--video-id", default="synthetic")
    g.add_argument("--frames", type=int, default=120)
    g.add_argument("--fps", type=float, default=30.0)
    g.add_argument("--joints", type=int, default=22)
    g.add_argument("--amplitude", type=float, default=0.05, help="jitter amplitude, rad")
    g.add_argument("--flip-angle", type=float, default=180.0)
    g.add_argument("--flip-frame", type=int, default=None, help="default: middle frame")
    g.add_argument("--flip-axis", default="forward", choices=sorted(synth._AXES))
    g.add_argument("--persons", type=int, default=1)
    g.add_argument("--base-conf", type=float, default=0.9)
    g.add_argument("--degrade-part", default=None)
    g.add_argument("--degrade-conf", type=float, default=0.1)
    g.set_defaults(func=cmd_synth_gen)

    c = synth_sub.add_parser("corpus", help="emit a full synthetic benchmark corpus")
    c.add_argument("--out", required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--flavor", choices=("benchmark", "ablation"), default="benchmark")
    c.add_argument("--videos-per-model", type=int, default=10)
    c.add_argument("--calib-videos", type=int, default=10)
    c.add_argument("--videos", type=int, default=40, help="video count for the ablation flavor")
    c.set_defaults(func=cmd_synth_corpus)

    p = sub.add_parser("validate", help="parse feature files and report schema errors")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)

    return parser


def cmd_calibrate(args) -> int:
    anat_cfg, kin_cfg, _ = _resolve_configs(args)
    from .calibration import save_bounds

    bounds, counts = pipeline.calibrate_directory(
        args.corpus_dir,
        corpus_id=args.corpus_id,
        anat_cfg=anat_cfg,
        kin_cfg=kin_cfg,
        percentile=args.percentile,
    )
    save_bounds(bounds, args.out)
    for name in sorted(counts):
        print(f"{name}: n={counts[name]} bounds=[{bounds[name].min_real:.6g}, {bounds[name].max_real:.6g}]")
    return 0


def cmd_score(args) -> int:
    anat_cfg, kin_cfg, jobs = _resolve_configs(args)
    if args.jobs is not None:
        jobs = args.jobs
    from .calibration import load_bounds

    bounds = load_bounds(args.calibration)
    reports = pipeline.score_directory(
        args.features_dir, bounds, anat_cfg=anat_cfg, kin_cfg=kin_cfg, jobs=jobs
    )
    Path(args.out).write_bytes(formats.serialize_reports(reports))
    print(f"scored {len(reports)} videos -> {args.out}")
    return 0


def _load_join_inputs(args):
    reports = formats.parse_reports(Path(args.reports).read_bytes())
    ratings = formats.parse_ratings(Path(args.ratings).read_bytes())
    return reports, ratings


def cmd_correlate(args) -> int:
    reports, ratings = _load_join_inputs(args)
    if args.per_model:
        rows = harness.correlate_per_model(
            reports, ratings, ablation=args.ablation, allow_missing=args.allow_missing
        )
        text = harness.per_model_correlations_csv(rows)
    else:
        results = harness.correlate(
            reports, ratings, ablation=args.ablation, allow_missing=args.allow_missing
        )
        text = harness.correlations_csv(results)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


def cmd_leaderboard(args) -> int:
    reports, ratings = _load_join_inputs(args)
    rows = harness.leaderboard(reports, ratings)
    if args.out:
        Path(args.out).write_text(harness.leaderboard_csv(rows), encoding="utf-8")
    sys.stdout.write(harness.leaderboard_table(rows))
    return 0


def cmd_categories(args) -> int:
    reports, ratings = _load_join_inputs(args)
    rows = harness.category_breakdown(reports, ratings)
    text = harness.categories_csv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    if args.plotdata:
        Path(args.plotdata).write_text(harness.categories_plotdata(rows), encoding="utf-8")
    sys.stdout.write(text)
    return 0


def cmd_synth_gen(args) -> int:
    out = Path(args.out)
    if args.kind == "kps":
        degrade = None
        if args.degrade_part is not None:
            degrade = synth.PartDegrade(part=args.degrade_part, confidence=args.degrade_conf)
        stream = synth.gen_keypoint_stream(
            seed=args.seed, n_frames=args.frames, persons=args.persons,
            base_conf=args.base_conf, degrade=degrade, fps=args.fps, video_id=args.video_id,
        )
        synth.write_video_features(out, args.video_id, stream=stream)
    else:
        track = synth.gen_smooth_track(
            seed=args.seed, n_frames=args.frames, fps=args.fps,
            joints=args.joints, video_id=args.video_id,
        )
        if args.kind == "jitter":
            track = synth.inject_jitter(track, args.amplitude, seed=args.seed + 1)
        elif args.kind == "flip":
            frame = args.flip_frame if args.flip_frame is not None else args.frames // 2
            track = synth.inject_flip(track, frame, args.flip_angle, args.flip_axis)
        synth.write_video_features(out, args.video_id, tracks=[track])
    print(f"wrote {args.kind} features for {args.video_id} -> {out}")
    return 0


def cmd_synth_corpus(args) -> int:
    if args.flavor == "benchmark":
        paths = synth.make_benchmark_corpus(
            args.out, seed=args.seed,
            videos_per_model=args.videos_per_model, calib_videos=args.calib_videos,
        )
    else:
        paths = synth.make_ablation_corpus(args.out, seed=args.seed, n_videos=args.videos)
    for key, value in sorted(paths.items()):
        print(f"{key}: {value}")
    return 0


def cmd_validate(args) -> int:
    failures = 0
    for name in args.files:
        path = Path(name)
        try:
            data = path.read_bytes()
            if name.endswith(formats.KEYPOINT_SUFFIX):
                formats.parse_keypoint_stream(data)
            elif name.endswith(formats.MOTION_SUFFIX):
                formats.parse_motion_track(data)
            elif name.endswith(formats.PRIOR_SUFFIX):
                formats.parse_vlm_record(data)
            elif name.endswith(".csv"):
                formats.parse_ratings(data)
            elif name.endswith(".ndjson"):
                formats.parse_reports(data)
            else:
                raise ValueError(f"unrecognized feature file suffix: {name}")
        except Exception as exc:
            print(f"{name}: ERROR: {exc}")
            failures += 1
        else:
            print(f"{name}: ok")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        summary = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
