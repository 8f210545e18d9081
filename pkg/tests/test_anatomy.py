import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from humeval.anatomy import (
    COCO_WHOLEBODY,
    AnatConfig,
    AnatResult,
    PartGrouping,
    frame_anat_score,
    person_anat_score,
    q_anat,
    video_anat_score,
)
from humeval.errors import SchemaError
from humeval.types import KEYPOINT_COUNT, KeypointFrame, KeypointStream, readonly_array

from helpers import anat_frame_oracle


def person(conf):
    conf = np.asarray(conf, dtype=float)
    xy = np.zeros((KEYPOINT_COUNT, 2))
    return readonly_array(np.column_stack([xy, conf]), name="person")


def uniform_person(value):
    return person(np.full(KEYPOINT_COUNT, value))


def frame(index, *persons):
    return KeypointFrame(frame_index=index, persons=persons)


def stream(*frames, video_id="v", fps=30.0):
    return KeypointStream(video_id=video_id, fps=fps, frames=frames)


class TestPartGrouping:
    def test_default_covers_all_keypoints(self):
        sizes = {name: stop - start for name, start, stop in COCO_WHOLEBODY.parts}
        assert sizes == {"body": 17, "feet": 6, "face": 68, "left_hand": 21, "right_hand": 21}

    def test_gap_rejected(self):
        with pytest.raises(SchemaError):
            PartGrouping(parts=(("body", 0, 17), ("rest", 18, 133)))

    def test_overlap_rejected(self):
        with pytest.raises(SchemaError):
            PartGrouping(parts=(("a", 0, 20), ("b", 17, 133)))


class TestFrameScore:
    def test_uniform_confidence(self):
        assert frame_anat_score(frame(0, uniform_person(0.8))) == pytest.approx(0.8, abs=1e-15)

    def test_threshold_excludes_low_parts(self):
        conf = np.full(KEYPOINT_COUNT, 0.1)
        conf[0:17] = 0.9  # body above tau, everything else below
        assert frame_anat_score(frame(0, person(conf))) == pytest.approx(0.9, abs=1e-15)

    def test_two_person_mean(self):
        # persons with flat 0.6 and 0.8 confidences average to 0.7
        f = frame(0, uniform_person(0.6), uniform_person(0.8))
        assert frame_anat_score(f) == pytest.approx(0.7, abs=1e-15)

    def test_tie_at_threshold_is_invisible(self):
        # exactly representable 0.5 == tau must not count as visible
        conf = np.full(KEYPOINT_COUNT, 0.015625)
        conf[0:17] = 0.5
        cfg = AnatConfig(tau=0.5)
        assert frame_anat_score(frame(0, person(conf)), cfg=cfg) == 0.0

    def test_no_person_scores_zero(self):
        assert frame_anat_score(frame(0)) == 0.0

    def test_positions_do_not_matter(self):
        conf = np.linspace(0.2, 0.95, KEYPOINT_COUNT)
        a = person(conf)
        moved = np.array(a)
        moved[:, 0] += 500.0
        moved[:, 1] *= -3.0
        b = readonly_array(moved, name="person")
        assert frame_anat_score(frame(0, a)) == frame_anat_score(frame(0, b))


class TestVideoScore:
    def test_mean_over_frames(self):
        s = stream(
            frame(0, uniform_person(0.6)),
            frame(1, uniform_person(0.7)),
            frame(2, uniform_person(0.8)),
        )
        result = video_anat_score(s)
        assert result.score == pytest.approx(0.7, abs=1e-15)
        assert result.flags == ()

    def test_all_frames_empty(self):
        result = video_anat_score(stream(frame(0), frame(1)))
        assert result.score == 0.0
        assert result.flags == ("no-person-detected",)

    def test_some_frames_empty(self):
        result = video_anat_score(stream(frame(0, uniform_person(0.8)), frame(1)))
        assert result.score == pytest.approx(0.4, abs=1e-15)
        assert result.flags == ("no-person-visible",)

    def test_matches_bruteforce_oracle_on_random_streams(self):
        rng = np.random.default_rng(1234)
        for _ in range(100):
            n_frames = int(rng.integers(1, 8))
            frames = []
            expected = []
            for t in range(n_frames):
                n_persons = int(rng.integers(0, 3))
                confs = [rng.uniform(0.0, 1.0, KEYPOINT_COUNT) for _ in range(n_persons)]
                frames.append(frame(t, *[person(c) for c in confs]))
                expected.append(anat_frame_oracle([list(c) for c in confs], COCO_WHOLEBODY.parts, 0.3))
            result = video_anat_score(stream(*frames))
            assert result.score == pytest.approx(sum(expected) / len(expected), abs=1e-12)

    def test_frame_permutation_invariant(self):
        rng = np.random.default_rng(7)
        frames = [frame(t, person(rng.uniform(0, 1, KEYPOINT_COUNT))) for t in range(6)]
        forward = video_anat_score(stream(*frames)).score
        shuffled = [frames[i] for i in [3, 0, 5, 1, 4, 2]]
        reindexed = [
            KeypointFrame(frame_index=t, persons=f.persons) for t, f in enumerate(shuffled)
        ]
        assert video_anat_score(stream(*reindexed)).score == pytest.approx(forward, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31), bump=st.floats(min_value=1e-4, max_value=0.05))
def test_raising_confidence_monotone_within_fixed_visibility(seed, bump):
    rng = np.random.default_rng(seed)
    conf = rng.uniform(0.45, 0.90, KEYPOINT_COUNT)  # all parts visible at tau=0.3
    idx = int(rng.integers(0, KEYPOINT_COUNT))
    raised = conf.copy()
    raised[idx] = min(raised[idx] + bump, 0.95)  # stays within the visible regime
    base = person_anat_score(conf, COCO_WHOLEBODY, 0.3)
    higher = person_anat_score(raised, COCO_WHOLEBODY, 0.3)
    assert higher >= base


class TestQAnat:
    def test_identity_prior(self):
        assert q_anat(1.0, 0.7) == 0.7

    def test_zero_anat_gates(self):
        assert q_anat(0.5, 0.0) == 0.0

    def test_product(self):
        assert q_anat(0.8, 0.75) == pytest.approx(0.6, abs=1e-15)

    def test_bounded_by_min(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a, b = rng.uniform(0, 1, 2)
            assert q_anat(a, b) <= min(a, b)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            q_anat(1.2, 0.5)
        with pytest.raises(ValueError):
            q_anat(0.5, -0.1)


def test_result_type_is_frozen():
    r = AnatResult(score=0.5, flags=())
    with pytest.raises(AttributeError):
        r.score = 0.9
