"""Deterministic scoring engine and benchmark harness for human-centric
generated video: a coarse perceptual prior fused with fine-grained
anatomical-structure and motion-stability scores."""

from .anatomy import AnatConfig, COCO_WHOLEBODY, PartGrouping, frame_anat_score, q_anat, video_anat_score
from .calibration import fit_bounds, load_bounds, normalize, save_bounds
from .harness import category_breakdown, correlate, leaderboard, spearman_rho
from .kinematics import (
    KinConfig,
    global_consistency,
    joint_jerk,
    local_stability,
    orientation_vectors,
    q_mot,
    s_mot,
    score_track,
)
from .prior import prior_score
from .types import (
    CalibrationBounds,
    HumanRatingRecord,
    KeypointFrame,
    KeypointStream,
    MotionTrack,
    ScoreReport,
    VlmPriorRecord,
)

__version__ = "0.1.0"

__all__ = [
    "AnatConfig",
    "COCO_WHOLEBODY",
    "CalibrationBounds",
    "HumanRatingRecord",
    "KeypointFrame",
    "KeypointStream",
    "KinConfig",
    "MotionTrack",
    "PartGrouping",
    "ScoreReport",
    "VlmPriorRecord",
    "category_breakdown",
    "correlate",
    "fit_bounds",
    "frame_anat_score",
    "global_consistency",
    "joint_jerk",
    "leaderboard",
    "load_bounds",
    "local_stability",
    "normalize",
    "orientation_vectors",
    "prior_score",
    "q_anat",
    "q_mot",
    "s_mot",
    "save_bounds",
    "score_track",
    "spearman_rho",
    "video_anat_score",
    "__version__",
]
