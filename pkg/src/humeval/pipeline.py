"""Per-directory workflows: discover feature files, calibrate, score.

Discovery groups files by the video_id in their headers, not by filename, so
multi-person videos can ship one motion file per track under any naming.
Scoring a video touches no shared state, which is what makes the worker-pool
fan-out safe.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import formats
from .anatomy import AnatConfig, COCO_WHOLEBODY, video_anat_score
from .calibration import fit_bounds, normalize
from .errors import SchemaError, SequenceTooShortError
from .kinematics import (
    KinConfig,
    MotionScores,
    global_consistency,
    local_stability,
    q_mot,
    score_video_motion,
)
from .prior import prior_score
from .types import ScoreReport

FLAG_NO_PRIOR = "no-prior"
FLAG_NO_KEYPOINTS = "no-keypoints"
FLAG_NO_MOTION = "no-motion"


@dataclass(frozen=True)
class VideoFeatureSet:
    video_id: str
    keypoints: Path | None
    motions: tuple[Path, ...]
    prior: Path | None


def _header_video_id(path: Path) -> str:
    with open(path, "rb") as fh:
        first = fh.readline()
    obj = formats._loads(first.decode("utf-8", errors="replace"), line=1)
    if not isinstance(obj, dict) or not isinstance(obj.get("video_id"), str):
        raise SchemaError(f"{path}: header has no video_id")
    return obj["video_id"]


def discover_features(directory) -> list[VideoFeatureSet]:
    """Scan a directory for feature files and group them by video."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"feature directory not found: {directory}")
    kps: dict[str, Path] = {}
    mots: dict[str, list[Path]] = {}
    priors: dict[str, Path] = {}
    for path in sorted(directory.iterdir()):
        name = path.name
        if name.endswith(formats.KEYPOINT_SUFFIX):
            vid = _header_video_id(path)
            if vid in kps:
                raise SchemaError(f"duplicate keypoint stream for video {vid!r}")
            kps[vid] = path
        elif name.endswith(formats.MOTION_SUFFIX):
            mots.setdefault(_header_video_id(path), []).append(path)
        elif name.endswith(formats.PRIOR_SUFFIX):
            vid = formats.parse_vlm_record(path.read_bytes()).video_id
            if vid in priors:
                raise SchemaError(f"duplicate prior record for video {vid!r}")
            priors[vid] = path
    ids = sorted(set(kps) | set(mots) | set(priors))
    if not ids:
        raise FileNotFoundError(f"no feature files in {directory}")
    return [
        VideoFeatureSet(
            video_id=vid,
            keypoints=kps.get(vid),
            motions=tuple(mots.get(vid, ())),
            prior=priors.get(vid),
        )
        for vid in ids
    ]


@dataclass(frozen=True)
class RawMetrics:
    """Per-video raw scores used to fit calibration bounds."""

    video_id: str
    anat: float | None
    local: float | None
    glob: float | None


def compute_raw_metrics(fs: VideoFeatureSet, anat_cfg: AnatConfig, kin_cfg: KinConfig) -> RawMetrics:
    anat = None
    if fs.keypoints is not None:
        stream = formats.parse_keypoint_stream(fs.keypoints.read_bytes())
        anat = video_anat_score(stream, COCO_WHOLEBODY, anat_cfg).score
    local = glob = None
    if fs.motions:
        locals_, globals_ = [], []
        for path in fs.motions:
            track = formats.parse_motion_track(path.read_bytes())
            try:
                locals_.append(local_stability(track, kin_cfg))
                globals_.append(global_consistency(track, kin_cfg))
            except SequenceTooShortError:
                continue
        if locals_:
            local = sum(locals_) / len(locals_)
            glob = sum(globals_) / len(globals_)
    return RawMetrics(video_id=fs.video_id, anat=anat, local=local, glob=glob)


def calibrate_directory(
    directory,
    corpus_id: str | None = None,
    anat_cfg: AnatConfig = AnatConfig(),
    kin_cfg: KinConfig = KinConfig(),
    percentile: float | None = None,
):
    """Fit bounds for all three metrics over a corpus directory.

    Returns (bounds_map, counts) where counts holds per-metric sample sizes.
    """
    directory = Path(directory)
    corpus_id = corpus_id if corpus_id is not None else directory.name
    raws = [compute_raw_metrics(fs, anat_cfg, kin_cfg) for fs in discover_features(directory)]
    samples = {
        "anat": [r.anat for r in raws if r.anat is not None],
        "local": [r.local for r in raws if r.local is not None],
        "global": [r.glob for r in raws if r.glob is not None],
    }
    bounds = {
        name: fit_bounds(values, name, corpus_id, percentile=percentile)
        for name, values in samples.items()
    }
    counts = {name: len(values) for name, values in samples.items()}
    return bounds, counts


def score_video(
    fs: VideoFeatureSet,
    bounds,
    anat_cfg: AnatConfig = AnatConfig(),
    kin_cfg: KinConfig = KinConfig(),
) -> ScoreReport:
    """Full coarse-to-fine report for one video.

    A missing prior file scores the structural components on their own
    (prior treated as 1.0, flagged), so the engine runs without any VLM.
    Missing keypoints or motion zero the affected branch and flag it.
    """
    flags: list[str] = []

    if fs.prior is not None:
        s_prior = prior_score(formats.parse_vlm_record(fs.prior.read_bytes()))
    else:
        s_prior = 1.0
        flags.append(FLAG_NO_PRIOR)

    s_anat_raw = s_anat_norm = q_anat_value = 0.0
    if fs.keypoints is not None:
        stream = formats.parse_keypoint_stream(fs.keypoints.read_bytes())
        result = video_anat_score(stream, COCO_WHOLEBODY, anat_cfg)
        flags.extend(result.flags)
        s_anat_raw = result.score
        s_anat_norm = normalize(s_anat_raw, bounds["anat"])
        q_anat_value = s_prior * s_anat_norm
    else:
        flags.append(FLAG_NO_KEYPOINTS)

    if fs.motions:
        tracks = [formats.parse_motion_track(p.read_bytes()) for p in fs.motions]
        motion = score_video_motion(tracks, kin_cfg, bounds)
        flags.extend(f for f in motion.flags if f not in flags)
        q_mot_value = q_mot(s_prior, motion.s_mot)
    else:
        motion = MotionScores()
        q_mot_value = 0.0
        flags.append(FLAG_NO_MOTION)

    return ScoreReport(
        video_id=fs.video_id,
        s_prior=s_prior,
        s_anat_raw=s_anat_raw,
        s_anat_norm=s_anat_norm,
        q_anat=q_anat_value,
        s_local_raw=motion.s_local_raw,
        s_local_norm=motion.s_local_norm,
        s_global_raw=motion.s_global_raw,
        s_global_norm=motion.s_global_norm,
        s_mot=motion.s_mot,
        q_mot=q_mot_value,
        flags=tuple(flags),
    )


def _score_one(args):
    fs, bounds, anat_cfg, kin_cfg = args
    return score_video(fs, bounds, anat_cfg, kin_cfg)


def score_directory(
    directory,
    bounds,
    anat_cfg: AnatConfig = AnatConfig(),
    kin_cfg: KinConfig = KinConfig(),
    jobs: int | None = None,
) -> list[ScoreReport]:
    """Score every video in a directory; reports come back sorted by video_id."""
    feature_sets = discover_features(directory)
    jobs = jobs if jobs is not None else (os.cpu_count() or 1)
    jobs = max(1, min(jobs, len(feature_sets)))
    work = [(fs, bounds, anat_cfg, kin_cfg) for fs in feature_sets]
    if jobs == 1:
        return [_score_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_score_one, work, chunksize=max(1, len(work) // jobs)))
