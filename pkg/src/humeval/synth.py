"""Synthetic keypoint streams and motion tracks with controlled artifacts.

Ground truth for every discrimination test: generators are deterministic
under a fixed seed and injectors are exact identities at zero magnitude.

Randomness comes from numpy's default PCG64 generator seeded directly with
the integer seed argument; draw order inside each function is fixed, so the
same seed reproduces the same bytes on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import formats
from .anatomy import COCO_WHOLEBODY
from .kinematics import quat_from_axis_angle, quat_multiply
from .types import (
    DEFAULT_JOINT_COUNT,
    KEYPOINT_COUNT,
    HumanRatingRecord,
    KeypointFrame,
    KeypointStream,
    MotionTrack,
    VlmPriorRecord,
    readonly_array,
)

_AXES = {
    "up": (0.0, 1.0, 0.0),
    "forward": (0.0, 0.0, 1.0),
    "side": (1.0, 0.0, 0.0),
}

MIN_SMOOTH_FRAMES = 8


@dataclass(frozen=True)
class SmoothTrackParams:
    """Trajectory shape for generated motion: sums of slow sinusoids.

    Periods stay at or above half a second and the root yaw rate is capped,
    so a default-parameter track is comfortably inside the stable regime.
    """

    amp_range: tuple[float, float] = (0.02, 0.12)  # rad
    period_range_s: tuple[float, float] = (1.0, 4.0)
    max_harmonics: int = 3
    yaw_rate_max_dps: float = 20.0
    tilt_max_deg: float = 5.0
    tilt_period_s: float = 3.0

    def __post_init__(self):
        if self.period_range_s[0] < 0.5:
            raise ValueError("periods below 0.5 s are outside the smooth-track contract")
        if not 1 <= self.max_harmonics <= 3:
            raise ValueError("max_harmonics must be in 1..3")


DEFAULT_SMOOTH_PARAMS = SmoothTrackParams()


def gen_smooth_track(
    seed: int,
    n_frames: int = 120,
    fps: float = 30.0,
    joints: int = DEFAULT_JOINT_COUNT,
    params: SmoothTrackParams = DEFAULT_SMOOTH_PARAMS,
    video_id: str = "synthetic",
    person_id: str = "p0",
) -> MotionTrack:
    """Smooth articulated motion with a slowly yawing, slightly tilting root."""
    if n_frames < MIN_SMOOTH_FRAMES:
        raise ValueError(f"need at least {MIN_SMOOTH_FRAMES} frames, got {n_frames}")
    rng = np.random.default_rng(seed)
    t = np.arange(n_frames, dtype=np.float64) / fps

    H = params.max_harmonics
    counts = rng.integers(1, H + 1, size=(joints, 3))
    offsets = rng.uniform(-0.5, 0.5, size=(joints, 3))
    periods = rng.uniform(*params.period_range_s, size=(joints, 3, H))
    amps = rng.uniform(*params.amp_range, size=(joints, 3, H))
    phases = rng.uniform(0.0, 2.0 * math.pi, size=(joints, 3, H))
    active = np.arange(H)[None, None, :] < counts[:, :, None]

    waves = amps * active * np.sin(
        2.0 * math.pi * t[:, None, None, None] / periods + phases
    )
    angles = offsets[None, :, :] + waves.sum(axis=3)

    yaw0 = rng.uniform(0.0, 2.0 * math.pi)
    yaw_rate = math.radians(rng.uniform(-params.yaw_rate_max_dps, params.yaw_rate_max_dps))
    tilt_amp = math.radians(rng.uniform(0.0, params.tilt_max_deg))
    tilt_phase = rng.uniform(0.0, 2.0 * math.pi)

    quats = np.empty((n_frames, 4), dtype=np.float64)
    for i in range(n_frames):
        yaw = yaw0 + yaw_rate * t[i]
        tilt = tilt_amp * math.sin(2.0 * math.pi * t[i] / params.tilt_period_s + tilt_phase)
        q = quat_multiply(
            quat_from_axis_angle(_AXES["up"], yaw), quat_from_axis_angle(_AXES["forward"], tilt)
        )
        quats[i] = q / np.linalg.norm(q)

    return MotionTrack(
        video_id=video_id,
        person_id=person_id,
        fps=float(fps),
        root_rotations=readonly_array(quats, name="root_rotations"),
        joint_angles=readonly_array(angles, name="joint_angles"),
    )


def inject_jitter(track: MotionTrack, amplitude_rad: float, seed: int) -> MotionTrack:
    """Add i.i.d. uniform noise in [-a, a] to every joint-angle component."""
    if amplitude_rad < 0:
        raise ValueError("amplitude must be non-negative")
    if amplitude_rad == 0.0:
        return track
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-amplitude_rad, amplitude_rad, size=track.joint_angles.shape)
    return MotionTrack(
        video_id=track.video_id,
        person_id=track.person_id,
        fps=track.fps,
        root_rotations=track.root_rotations,
        joint_angles=readonly_array(track.joint_angles + noise, name="joint_angles"),
    )


def inject_flip(track: MotionTrack, frame_index: int, angle_deg: float, axis) -> MotionTrack:
    """Compose an instantaneous world-frame rotation onto the root from ``frame_index`` on."""
    if not 0 <= frame_index < track.frame_count:
        raise ValueError(f"frame_index {frame_index} outside track of {track.frame_count} frames")
    if angle_deg == 0.0:
        return track
    if isinstance(axis, str):
        axis = _AXES[axis]
    flip = quat_from_axis_angle(axis, math.radians(angle_deg))
    quats = np.array(track.root_rotations)
    for t in range(frame_index, track.frame_count):
        q = quat_multiply(flip, quats[t])
        quats[t] = q / np.linalg.norm(q)
    return MotionTrack(
        video_id=track.video_id,
        person_id=track.person_id,
        fps=track.fps,
        root_rotations=readonly_array(quats, name="root_rotations"),
        joint_angles=track.joint_angles,
    )


@dataclass(frozen=True)
class PartDegrade:
    part: str
    confidence: float


def gen_keypoint_stream(
    seed: int,
    n_frames: int = 60,
    persons: int = 1,
    base_conf: float = 0.9,
    degrade: PartDegrade | None = None,
    fps: float = 30.0,
    video_id: str = "synthetic",
) -> KeypointStream:
    """Keypoints on a random walk; confidences are flat except a degraded part."""
    if not 0.0 <= base_conf <= 1.0:
        raise ValueError("base_conf must be in [0, 1]")
    rng = np.random.default_rng(seed)
    conf = np.full(KEYPOINT_COUNT, base_conf)
    if degrade is not None:
        start, stop = COCO_WHOLEBODY.range_of(degrade.part)
        conf[start:stop] = degrade.confidence

    frames = []
    pos = rng.uniform([300.0, 200.0], [1600.0, 900.0], size=(persons, 2))
    for t in range(n_frames):
        pos = pos + rng.normal(0.0, 3.0, size=pos.shape)
        people = []
        for p in range(persons):
            xy = pos[p] + rng.normal(0.0, 40.0, size=(KEYPOINT_COUNT, 2))
            person = np.column_stack([xy, conf])
            people.append(readonly_array(person, name="person"))
        frames.append(KeypointFrame(frame_index=t, persons=tuple(people)))
    return KeypointStream(video_id=video_id, fps=float(fps), frames=tuple(frames))


def make_vlm_record(video_id: str, probability: float) -> VlmPriorRecord:
    """Logit pair whose softmax reproduces ``probability`` exactly."""
    if not 0.0 < probability < 1.0:
        raise ValueError("probability must be in (0, 1)")
    return VlmPriorRecord(
        video_id=video_id,
        positive_logit=math.log(probability / (1.0 - probability)),
        negative_logit=0.0,
    )


# --------------------------------------------------------------------------
# corpus builders


def write_video_features(directory, video_id, stream=None, tracks=(), vlm=None) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if stream is not None:
        (directory / f"{video_id}{formats.KEYPOINT_SUFFIX}").write_bytes(
            formats.serialize_keypoint_stream(stream)
        )
    for track in tracks:
        name = f"{video_id}.{track.person_id}{formats.MOTION_SUFFIX}"
        (directory / name).write_bytes(formats.serialize_motion_track(track))
    if vlm is not None:
        (directory / f"{video_id}{formats.PRIOR_SUFFIX}").write_bytes(
            formats.serialize_vlm_record(vlm)
        )


def _rating_from_latents(rng, prior, anat01, motion01):
    acs = 1.0 + 4.0 * min(max(prior * anat01 + rng.normal(0.0, 0.05), 0.0), 1.0)
    mss = 1.0 + 4.0 * min(max(prior * motion01 + rng.normal(0.0, 0.05), 0.0), 1.0)
    return acs, mss


_CATEGORY_CYCLE = ("BMO_SIMPLE", "BMO_SKILL", "HOI", "HHI")

# (model_id, prior prob range, base confidence range, jitter range, flip?, degraded part?)
_MODEL_PROFILES = (
    ("alpha", (0.80, 0.95), (0.82, 0.92), (0.0, 0.0), False, None),
    ("beta", (0.50, 0.80), (0.60, 0.80), (0.004, 0.015), False, None),
    ("gamma", (0.15, 0.45), (0.38, 0.55), (0.04, 0.08), True, PartDegrade("left_hand", 0.12)),
)

_CALIB_CONF_RANGE = (0.30, 0.96)
_CALIB_JITTER_RANGE = (0.0, 0.02)


def make_benchmark_corpus(
    out_dir,
    seed: int = 0,
    videos_per_model: int = 10,
    calib_videos: int = 10,
    fps: float = 30.0,
    kps_frames: int = 45,
    mot_frames: int = 90,
) -> dict:
    """Three-model synthetic benchmark: a clean model, a mildly noisy one and
    an artifact-injected bad one, plus a calibration corpus and ratings.

    Returns the written paths: {"calib_dir", "eval_dir", "ratings"}.
    """
    out = Path(out_dir)
    calib_dir = out / "calib"
    eval_dir = out / "eval"
    rng = np.random.default_rng(seed)

    for i in range(calib_videos):
        vid = f"calib_{i:02d}"
        conf = rng.uniform(*_CALIB_CONF_RANGE)
        jitter = rng.uniform(*_CALIB_JITTER_RANGE)
        turn_deg = rng.uniform(0.0, 10.0)  # spread of turn sharpness, so the
        # fitted global bounds span more than the smooth-yaw noise floor
        stream = gen_keypoint_stream(
            seed=int(rng.integers(2**32)), n_frames=kps_frames, base_conf=conf,
            fps=fps, video_id=vid,
        )
        track = gen_smooth_track(
            seed=int(rng.integers(2**32)), n_frames=mot_frames, fps=fps, video_id=vid
        )
        track = inject_jitter(track, jitter, seed=int(rng.integers(2**32)))
        track = inject_flip(track, mot_frames // 2, turn_deg, "up")
        write_video_features(calib_dir, vid, stream=stream, tracks=[track])

    ratings = []
    for model, prior_rng, conf_rng, jitter_rng, flipped, degrade in _MODEL_PROFILES:
        for i in range(videos_per_model):
            vid = f"{model}_{i:02d}"
            category = _CATEGORY_CYCLE[i % len(_CATEGORY_CYCLE)]
            persons = 2 if category == "HHI" else 1
            prior = float(rng.uniform(*prior_rng))
            conf = float(rng.uniform(*conf_rng))
            jitter = float(rng.uniform(*jitter_rng))

            stream = gen_keypoint_stream(
                seed=int(rng.integers(2**32)), n_frames=kps_frames, persons=persons,
                base_conf=conf, degrade=degrade, fps=fps, video_id=vid,
            )
            tracks = []
            for p in range(persons):
                track = gen_smooth_track(
                    seed=int(rng.integers(2**32)), n_frames=mot_frames, fps=fps,
                    video_id=vid, person_id=f"p{p}",
                )
                track = inject_jitter(track, jitter, seed=int(rng.integers(2**32)))
                if flipped:
                    track = inject_flip(track, mot_frames // 2, 180.0, "forward")
                tracks.append(track)
            vlm = make_vlm_record(vid, prior)
            write_video_features(eval_dir, vid, stream=stream, tracks=tracks, vlm=vlm)

            span = _CALIB_CONF_RANGE[1] - _CALIB_CONF_RANGE[0]
            anat01 = min(max((conf - _CALIB_CONF_RANGE[0]) / span, 0.0), 1.0)
            if degrade is not None:
                anat01 *= 0.75
            motion01 = min(max(1.0 - jitter / 0.08, 0.0), 1.0)
            if flipped:
                motion01 *= 0.15
            acs, mss = _rating_from_latents(rng, prior, anat01, motion01)
            ratings.append(
                HumanRatingRecord(
                    video_id=vid, model_id=model, category=category, acs=acs, mss=mss
                )
            )

    ratings_path = out / "ratings.csv"
    out.mkdir(parents=True, exist_ok=True)
    ratings_path.write_bytes(formats.serialize_ratings(ratings))
    return {"calib_dir": calib_dir, "eval_dir": eval_dir, "ratings": ratings_path}


def make_ablation_corpus(
    out_dir,
    seed: int = 0,
    n_videos: int = 40,
    fps: float = 30.0,
    kps_frames: int = 30,
    mot_frames: int = 60,
) -> dict:
    """Corpus with continuous artifact magnitudes and ratings that depend on
    the product of visual quality and physical plausibility, so fusing the
    prior with a structural score should beat either alone.
    """
    out = Path(out_dir)
    eval_dir = out / "eval"
    rng = np.random.default_rng(seed)
    models = ("genA", "genB")

    ratings = []
    for i in range(n_videos):
        vid = f"vid_{i:03d}"
        prior = float(rng.uniform(0.25, 0.95))
        conf = float(rng.uniform(0.40, 0.92))
        jitter = float(rng.uniform(0.0, 0.05))
        turn_deg = float(rng.uniform(0.0, 40.0))

        stream = gen_keypoint_stream(
            seed=int(rng.integers(2**32)), n_frames=kps_frames, base_conf=conf,
            fps=fps, video_id=vid,
        )
        track = gen_smooth_track(
            seed=int(rng.integers(2**32)), n_frames=mot_frames, fps=fps, video_id=vid
        )
        track = inject_jitter(track, jitter, seed=int(rng.integers(2**32)))
        track = inject_flip(track, mot_frames // 2, turn_deg, "up")
        write_video_features(eval_dir, vid, stream=stream, tracks=[track], vlm=make_vlm_record(vid, prior))

        anat01 = (conf - 0.40) / 0.52
        motion01 = (1.0 - jitter / 0.05) * (1.0 - 0.6 * turn_deg / 40.0)
        acs, mss = _rating_from_latents(rng, prior, anat01, motion01)
        ratings.append(
            HumanRatingRecord(
                video_id=vid,
                model_id=models[i % len(models)],
                category=_CATEGORY_CYCLE[i % len(_CATEGORY_CYCLE)],
                acs=acs,
                mss=mss,
            )
        )

    out.mkdir(parents=True, exist_ok=True)
    ratings_path = out / "ratings.csv"
    ratings_path.write_bytes(formats.serialize_ratings(ratings))
    return {"eval_dir": eval_dir, "ratings": ratings_path}
