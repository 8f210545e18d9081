"""Motion stability scoring from 3D joint kinematics.

Local stability looks at angular jerk (third time derivative, rad/s^3) and
penalizes its deviation from a Gaussian-smoothed trend, which separates
unnatural per-frame noise from legitimately fast motion.  Global consistency
tracks the body's up axis and horizontal heading between adjacent frames and
penalizes sudden orientation jumps.  Both raw scores pass through the
perceptual map phi(x) = 1 / (1 + x / lambda), a strictly decreasing map into
(0, 1]; its exact shape only sets the scale, rankings survive the later
min-max calibration for any lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .calibration import normalize
from .errors import SequenceTooShortError
from .types import MotionTrack

FLAG_SHORT_SEQUENCE = "short-sequence"

MIN_FRAMES_LOCAL = 4  # third difference needs 4 samples
MIN_FRAMES_GLOBAL = 2  # adjacent-pair deviation needs 2


@dataclass(frozen=True)
class KinConfig:
    """Knobs for the motion-stability pipeline (units noted per field)."""

    gaussian_sigma_frames: float = 2.0
    gaussian_truncate: float = 3.0
    phi_lambda_local: float = 100.0  # rad/s^3 at which the local score halves
    phi_lambda_global: float = 0.5  # dimensionless deviation at which it halves
    heading_epsilon: float = 1e-6
    world_up: tuple[float, float, float] = (0.0, 1.0, 0.0)
    forward_axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        for name in ("gaussian_sigma_frames", "gaussian_truncate", "phi_lambda_local", "phi_lambda_global"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        up = np.asarray(self.world_up, dtype=np.float64)
        fwd = np.asarray(self.forward_axis, dtype=np.float64)
        for name, v in (("world_up", up), ("forward_axis", fwd)):
            if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-9:
                raise ValueError(f"{name} must be a 3D unit vector")
        if abs(float(up @ fwd)) > 1.0 - 1e-9:
            raise ValueError("world_up and forward_axis must not be parallel")


def phi(x: float, lam: float) -> float:
    """Map a non-negative raw deviation into (0, 1], higher = more stable."""
    return 1.0 / (1.0 + x / lam)


# --------------------------------------------------------------------------
# quaternion helpers, (w, x, y, z) convention


def quat_multiply(q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    w1, x1, y1, z1 = q1
    w2, x2, y2, z2 = q2
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ]
    )


def quat_from_axis_angle(axis, angle_rad: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    norm = np.linalg.norm(axis)
    if norm == 0:
        raise ValueError("rotation axis must be nonzero")
    axis = axis / norm
    half = 0.5 * angle_rad
    return np.concatenate(([math.cos(half)], math.sin(half) * axis))


def rotate_vectors(quats: np.ndarray, vec) -> np.ndarray:
    """Apply each unit quaternion in (T, 4) to one 3-vector; returns (T, 3)."""
    q = np.asarray(quats, dtype=np.float64)
    v = np.asarray(vec, dtype=np.float64)
    w, u = q[:, :1], q[:, 1:]
    uv = np.cross(u, v[None, :])
    return v[None, :] + 2.0 * (w * uv + np.cross(u, uv))


# --------------------------------------------------------------------------
# local stability


def joint_jerk(track: MotionTrack) -> np.ndarray:
    """Per-frame jerk of the flattened joint angles, (T-3, 3J), rad/s^3."""
    if track.frame_count < MIN_FRAMES_LOCAL:
        raise SequenceTooShortError(
            f"{track.video_id}/{track.person_id}: jerk needs at least "
            f"{MIN_FRAMES_LOCAL} frames, got {track.frame_count}"
        )
    flat = track.joint_angles.reshape(track.frame_count, -1)
    return kernels.third_difference(flat, track.fps)


def gaussian_smooth(signal: np.ndarray, cfg: KinConfig = KinConfig()) -> np.ndarray:
    """Per-column Gaussian smoothing with edge-inclusive reflect padding."""
    kernel = kernels.gaussian_kernel(cfg.gaussian_sigma_frames, cfg.gaussian_truncate)
    return kernels.smooth_columns(np.asarray(signal, dtype=np.float64), kernel)


def local_deviation(track: MotionTrack, cfg: KinConfig = KinConfig()) -> float:
    """Mean norm of the jerk residual after removing its smoothed trend."""
    jerk = joint_jerk(track)
    trend = gaussian_smooth(jerk, cfg)
    return kernels.residual_mean_norm(jerk, trend)


def local_stability(track: MotionTrack, cfg: KinConfig = KinConfig()) -> float:
    """Raw local stability in (0, 1]; 1.0 means jerk exactly follows its trend."""
    return phi(local_deviation(track, cfg), cfg.phi_lambda_local)


# --------------------------------------------------------------------------
# global consistency


def orientation_vectors(track: MotionTrack, cfg: KinConfig = KinConfig()):
    """Per-frame body up axis and horizontal heading, both unit (T, 3) arrays.

    The heading is the rotated forward axis with its world-up component
    removed.  When the body axis is parallel to world up (lying, handstand)
    the heading is undefined; the previous frame's heading is carried
    forward, so orientation-consistent poses do not produce fake spikes.
    """
    up_world = np.asarray(cfg.world_up, dtype=np.float64)
    forward = np.asarray(cfg.forward_axis, dtype=np.float64)
    ups = rotate_vectors(track.root_rotations, up_world)
    raw = rotate_vectors(track.root_rotations, forward)
    horiz = raw - (raw @ up_world)[:, None] * up_world[None, :]
    norms = np.linalg.norm(horiz, axis=1)

    fallback = forward - float(forward @ up_world) * up_world
    fallback = fallback / np.linalg.norm(fallback)

    heads = np.empty_like(horiz)
    previous = fallback
    for t in range(horiz.shape[0]):
        if norms[t] < cfg.heading_epsilon:
            heads[t] = previous
        else:
            heads[t] = horiz[t] / norms[t]
            previous = heads[t]
    return ups, heads


def max_orientation_deviation(track: MotionTrack, cfg: KinConfig = KinConfig()) -> float:
    """Worst adjacent-frame deviation of up axis or heading, in [0, 2]."""
    if track.frame_count < MIN_FRAMES_GLOBAL:
        raise SequenceTooShortError(
            f"{track.video_id}/{track.person_id}: orientation deviation needs at least "
            f"{MIN_FRAMES_GLOBAL} frames, got {track.frame_count}"
        )
    ups, heads = orientation_vectors(track, cfg)
    up_dev = 1.0 - np.sum(ups[:-1] * ups[1:], axis=1)
    head_dev = 1.0 - np.sum(heads[:-1] * heads[1:], axis=1)
    worst = float(np.maximum(up_dev, head_dev).max())
    return min(max(worst, 0.0), 2.0)


def global_consistency(track: MotionTrack, cfg: KinConfig = KinConfig()) -> float:
    """Raw global consistency in (0, 1]; 1.0 means orientation never jumps."""
    return phi(max_orientation_deviation(track, cfg), cfg.phi_lambda_global)


# --------------------------------------------------------------------------
# fusion


def s_mot(local_norm: float, global_norm: float) -> float:
    """Motion stability: product of the normalized local and global scores."""
    for name, v in (("local_norm", local_norm), ("global_norm", global_norm)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {v}")
    return local_norm * global_norm


def q_mot(s_prior: float, s_mot_value: float) -> float:
    """Motion quality: stability as a multiplicative penalty on the prior."""
    for name, v in (("s_prior", s_prior), ("s_mot", s_mot_value)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {v}")
    return s_prior * s_mot_value


@dataclass(frozen=True)
class MotionScores:
    """Motion fields of a score report, before the prior is applied."""

    s_local_raw: float = 0.0
    s_local_norm: float = 0.0
    s_global_raw: float = 0.0
    s_global_norm: float = 0.0
    s_mot: float = 0.0
    flags: tuple[str, ...] = ()


def score_track(track: MotionTrack, cfg: KinConfig, bounds) -> MotionScores:
    """Score one track; ``bounds`` maps "local"/"global" to CalibrationBounds."""
    try:
        local_raw = local_stability(track, cfg)
        global_raw = global_consistency(track, cfg)
    except SequenceTooShortError:
        return MotionScores(flags=(FLAG_SHORT_SEQUENCE,))
    local_norm = normalize(local_raw, bounds["local"])
    global_norm = normalize(global_raw, bounds["global"])
    return MotionScores(
        s_local_raw=local_raw,
        s_local_norm=local_norm,
        s_global_raw=global_raw,
        s_global_norm=global_norm,
        s_mot=s_mot(local_norm, global_norm),
    )


def score_video_motion(tracks, cfg: KinConfig, bounds) -> MotionScores:
    """Average track scores for one video; short tracks are flagged and excluded.

    Multi-person videos average stability across person tracks, mirroring the
    multi-person rule on the anatomical side.
    """
    scored = [score_track(t, cfg, bounds) for t in tracks]
    flags = []
    for s in scored:
        for f in s.flags:
            if f not in flags:
                flags.append(f)
    valid = [s for s in scored if FLAG_SHORT_SEQUENCE not in s.flags]
    if not valid:
        return MotionScores(flags=tuple(flags))

    def mean(field):
        return float(sum(getattr(s, field) for s in valid) / len(valid))

    return MotionScores(
        s_local_raw=mean("s_local_raw"),
        s_local_norm=mean("s_local_norm"),
        s_global_raw=mean("s_global_raw"),
        s_global_norm=mean("s_global_norm"),
        s_mot=mean("s_mot"),
        flags=tuple(flags),
    )
