"""Anatomical structure scoring from 2D keypoint confidences.

A part is visible when the mean confidence of its keypoints strictly
exceeds the threshold; ties at exactly the threshold count as invisible.
Keypoint coordinates never enter the score, only confidences do.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SchemaError
from .types import KEYPOINT_COUNT, KeypointFrame, KeypointStream

DEFAULT_TAU = 0.3

FLAG_NO_PERSON_VISIBLE = "no-person-visible"
FLAG_NO_PERSON_DETECTED = "no-person-detected"


def _shifted_mean(values) -> float:
    """Mean computed against the first element as base point.

    Exact on constant inputs (a uniform-confidence stream must score exactly
    that confidence) and better conditioned when values cluster.
    """
    arr = np.asarray(values, dtype=np.float64)
    base = float(arr[0])
    return base + float((arr - base).mean())


@dataclass(frozen=True)
class PartGrouping:
    """Named half-open keypoint index ranges; must tile [0, 133) exactly."""

    parts: tuple[tuple[str, int, int], ...]

    def __post_init__(self):
        covered = []
        for name, start, stop in self.parts:
            if not 0 <= start < stop <= KEYPOINT_COUNT:
                raise SchemaError(f"part {name!r}: bad range [{start}, {stop})")
            covered.extend(range(start, stop))
        if sorted(covered) != list(range(KEYPOINT_COUNT)):
            raise SchemaError("part ranges must be disjoint and cover all keypoints")

    def range_of(self, name: str) -> tuple[int, int]:
        for part, start, stop in self.parts:
            if part == name:
                return start, stop
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _, _ in self.parts)


# COCO-WholeBody layout: 0-based, matching the 133-point topology.
COCO_WHOLEBODY = PartGrouping(
    parts=(
        ("body", 0, 17),
        ("feet", 17, 23),
        ("face", 23, 91),
        ("left_hand", 91, 112),
        ("right_hand", 112, 133),
    )
)


@dataclass(frozen=True)
class AnatConfig:
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must be in (0, 1), got {self.tau}")


def person_anat_score(confidences: np.ndarray, grouping: PartGrouping, tau: float) -> float | None:
    """Mean confidence over keypoints of visible parts; None when nothing is visible.

    Visibility compares the part's mean strictly against tau, so a part whose
    mean lands exactly on the threshold stays invisible.
    """
    visible = []
    for _, start, stop in grouping.parts:
        if _shifted_mean(confidences[start:stop]) > tau:
            visible.append((start, stop))
    if not visible:
        return None
    chunks = np.concatenate([confidences[s:e] for s, e in visible])
    return _shifted_mean(chunks)


def frame_anat_score(
    frame: KeypointFrame, grouping: PartGrouping = COCO_WHOLEBODY, cfg: AnatConfig = AnatConfig()
) -> float:
    """Mean person score over persons with at least one visible part, else 0."""
    scores = [
        s
        for p in frame.persons
        if (s := person_anat_score(p[:, 2], grouping, cfg.tau)) is not None
    ]
    if not scores:
        return 0.0
    return _shifted_mean(scores)


@dataclass(frozen=True)
class AnatResult:
    score: float
    flags: tuple[str, ...]


def video_anat_score(
    stream: KeypointStream, grouping: PartGrouping = COCO_WHOLEBODY, cfg: AnatConfig = AnatConfig()
) -> AnatResult:
    """Unweighted mean of frame scores over the whole stream.

    Frames where no person has a visible part contribute 0 rather than being
    skipped: a human video whose humans vanish is a quality failure, and
    skipping such frames would reward it.
    """
    if not stream.frames:
        raise SchemaError(f"{stream.video_id}: empty stream")
    frame_scores = []
    blank = 0
    for frame in stream.frames:
        person_scores = [
            s
            for p in frame.persons
            if (s := person_anat_score(p[:, 2], grouping, cfg.tau)) is not None
        ]
        if not person_scores:
            blank += 1
            frame_scores.append(0.0)
        else:
            frame_scores.append(_shifted_mean(person_scores))
    flags = []
    if blank == len(stream.frames):
        flags.append(FLAG_NO_PERSON_DETECTED)
    elif blank:
        flags.append(FLAG_NO_PERSON_VISIBLE)
    return AnatResult(score=_shifted_mean(frame_scores), flags=tuple(flags))


def q_anat(s_prior: float, s_anat_norm: float) -> float:
    """Anatomical quality: the coarse prior modulated by the normalized score."""
    for name, v in (("s_prior", s_prior), ("s_anat_norm", s_anat_norm)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {v}")
    return s_prior * s_anat_norm
