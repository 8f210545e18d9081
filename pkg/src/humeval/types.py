"""Domain types for the scoring engine.

All types are immutable value objects: numpy arrays are stored C-contiguous,
float64 and write-protected, so instances can be shared freely across
worker processes and threads.

Conventions frozen here because every downstream metric depends on them:

* keypoints follow the COCO-WholeBody ordering with 133 points per person
  (body 1-17, feet 18-23, face 24-91, left hand 92-112, right hand 113-133);
* rotations are unit quaternions in (w, x, y, z) order, right-handed,
  y-up world frame;
* joint angles are axis-angle radians, 22 body joints per frame by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OrderingError, RangeError, SchemaError

KEYPOINT_COUNT = 133
DEFAULT_JOINT_COUNT = 22
QUAT_UNIT_TOL = 1e-6

CATEGORIES = ("BMO_SIMPLE", "BMO_SKILL", "HOI", "HHI")
RATING_MIN, RATING_MAX = 1.0, 5.0

METRIC_NAMES = ("anat", "local", "global")


def readonly_array(values, shape=None, name="array") -> np.ndarray:
    """Return a float64 C-contiguous write-protected copy of ``values``."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if shape is not None and arr.shape != shape:
        raise SchemaError(f"{name}: expected shape {shape}, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise RangeError(f"{name}: non-finite value")
    arr.flags.writeable = False
    return arr


def _check_fps(fps) -> float:
    fps = float(fps)
    if not math.isfinite(fps) or fps <= 0:
        raise RangeError(f"fps must be finite and positive, got {fps}")
    return fps


@dataclass(frozen=True)
class KeypointFrame:
    """2D keypoints with confidences for every person in one frame.

    ``persons`` holds one (133, 3) array per person, columns (x, y, confidence).
    """

    frame_index: int
    persons: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not isinstance(self.frame_index, int) or self.frame_index < 0:
            raise SchemaError(f"frame_index must be a non-negative integer, got {self.frame_index!r}")
        for p in self.persons:
            if p.shape != (KEYPOINT_COUNT, 3):
                raise SchemaError(
                    f"frame {self.frame_index}: person must have {KEYPOINT_COUNT} keypoints, got shape {p.shape}"
                )
            conf = p[:, 2]
            if (conf < 0.0).any() or (conf > 1.0).any():
                raise RangeError(f"frame {self.frame_index}: confidence outside [0, 1]")


@dataclass(frozen=True)
class KeypointStream:
    """Per-frame keypoints for one video."""

    video_id: str
    fps: float
    frames: tuple[KeypointFrame, ...]

    def __post_init__(self):
        if not self.video_id:
            raise SchemaError("video_id must be non-empty")
        object.__setattr__(self, "fps", _check_fps(self.fps))
        if not self.frames:
            raise SchemaError(f"{self.video_id}: stream has no frames")
        indices = [f.frame_index for f in self.frames]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise OrderingError(f"{self.video_id}: frame_index not strictly increasing")


@dataclass(frozen=True)
class MotionTrack:
    """3D joint angles and global root orientation for one person.

    ``root_rotations`` is (T, 4) unit quaternions (w, x, y, z);
    ``joint_angles`` is (T, J, 3) axis-angle radians.
    """

    video_id: str
    person_id: str
    fps: float
    root_rotations: np.ndarray
    joint_angles: np.ndarray

    def __post_init__(self):
        if not self.video_id:
            raise SchemaError("video_id must be non-empty")
        object.__setattr__(self, "fps", _check_fps(self.fps))
        rot, ang = self.root_rotations, self.joint_angles
        if rot.ndim != 2 or rot.shape[1] != 4 or rot.shape[0] == 0:
            raise SchemaError(f"root_rotations must be (T, 4), got {rot.shape}")
        if ang.ndim != 3 or ang.shape[2] != 3 or ang.shape[0] != rot.shape[0]:
            raise SchemaError(f"joint_angles must be (T, J, 3) with T == {rot.shape[0]}, got {ang.shape}")
        norms = np.linalg.norm(rot, axis=1)
        worst = np.abs(norms - 1.0).max()
        if worst > QUAT_UNIT_TOL:
            raise RangeError(f"{self.video_id}/{self.person_id}: quaternion norm off unit by {worst:.3g}")

    @property
    def frame_count(self) -> int:
        return self.root_rotations.shape[0]

    @property
    def joint_count(self) -> int:
        return self.joint_angles.shape[1]


@dataclass(frozen=True)
class VlmPriorRecord:
    """Stored yes/no logit pair for one video."""

    video_id: str
    positive_logit: float
    negative_logit: float

    def __post_init__(self):
        if not self.video_id:
            raise SchemaError("video_id must be non-empty")
        for name in ("positive_logit", "negative_logit"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise RangeError(f"{self.video_id}: {name} must be finite")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class CalibrationBounds:
    """Empirical raw-score bounds measured on a real-motion corpus."""

    metric_name: str
    min_real: float
    max_real: float
    corpus_id: str
    sample_count: int

    def __post_init__(self):
        if self.metric_name not in METRIC_NAMES:
            raise SchemaError(f"unknown metric {self.metric_name!r}, expected one of {METRIC_NAMES}")
        lo, hi = float(self.min_real), float(self.max_real)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise RangeError(f"{self.metric_name}: bounds must be finite")
        if not lo < hi:
            raise RangeError(f"{self.metric_name}: min_real must be < max_real, got [{lo}, {hi}]")
        if self.sample_count < 1:
            raise RangeError(f"{self.metric_name}: sample_count must be positive")
        object.__setattr__(self, "min_real", lo)
        object.__setattr__(self, "max_real", hi)


@dataclass(frozen=True)
class HumanRatingRecord:
    """One annotated video: mean anatomical-correctness and motion-smoothness ratings."""

    video_id: str
    model_id: str
    category: str
    acs: float
    mss: float

    def __post_init__(self):
        if not self.video_id or not self.model_id:
            raise SchemaError("video_id and model_id must be non-empty")
        if self.category not in CATEGORIES:
            raise SchemaError(f"unknown category {self.category!r}, expected one of {CATEGORIES}")
        for name in ("acs", "mss"):
            v = float(getattr(self, name))
            if not (RATING_MIN <= v <= RATING_MAX):
                raise RangeError(f"{self.video_id}: {name}={v} outside [{RATING_MIN}, {RATING_MAX}]")
            object.__setattr__(self, name, v)


_UNIT = ("s_prior", "s_anat_norm", "q_anat", "s_local_norm", "s_global_norm", "s_mot", "q_mot")


@dataclass(frozen=True)
class ScoreReport:
    """All intermediate and final scores for one video."""

    video_id: str
    s_prior: float = 1.0
    s_anat_raw: float = 0.0
    s_anat_norm: float = 0.0
    q_anat: float = 0.0
    s_local_raw: float = 0.0
    s_local_norm: float = 0.0
    s_global_raw: float = 0.0
    s_global_norm: float = 0.0
    s_mot: float = 0.0
    q_mot: float = 0.0
    flags: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.video_id:
            raise SchemaError("video_id must be non-empty")
        for name in _UNIT:
            v = float(getattr(self, name))
            if not (0.0 <= v <= 1.0):
                raise RangeError(f"{self.video_id}: {name}={v} outside [0, 1]")
            object.__setattr__(self, name, v)
        if self.q_anat > min(self.s_prior, self.s_anat_norm):
            raise RangeError(f"{self.video_id}: q_anat exceeds min(s_prior, s_anat_norm)")
        if self.q_mot > min(self.s_prior, self.s_mot):
            raise RangeError(f"{self.video_id}: q_mot exceeds min(s_prior, s_mot)")
        object.__setattr__(self, "flags", tuple(self.flags))
