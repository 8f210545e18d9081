import numpy as np
import pytest

from humeval import synth
from humeval.anatomy import video_anat_score
from humeval.kinematics import joint_jerk, local_deviation, local_stability
from humeval.synth import (
    PartDegrade,
    SmoothTrackParams,
    gen_keypoint_stream,
    gen_smooth_track,
    inject_flip,
    inject_jitter,
)


class TestSmoothTrack:
    def test_deterministic_under_seed(self):
        a = gen_smooth_track(7, n_frames=120)
        b = gen_smooth_track(7, n_frames=120)
        np.testing.assert_array_equal(a.joint_angles, b.joint_angles)
        np.testing.assert_array_equal(a.root_rotations, b.root_rotations)

    def test_different_seed_differs(self):
        a = gen_smooth_track(7, n_frames=40)
        b = gen_smooth_track(8, n_frames=40)
        assert not np.array_equal(a.joint_angles, b.joint_angles)

    def test_zero_amplitude_constant_track(self):
        params = SmoothTrackParams(amp_range=(0.0, 0.0), yaw_rate_max_dps=0.0, tilt_max_deg=0.0)
        track = gen_smooth_track(3, n_frames=20, params=params)
        assert (track.joint_angles == track.joint_angles[0]).all()
        assert (joint_jerk(track) == 0.0).all()

    def test_default_params_comfortably_stable(self):
        # regression margin for the default generator, not a claim about real data
        for seed in range(10):
            d = local_deviation(gen_smooth_track(seed, n_frames=90))
            assert d < 10.0

    def test_short_period_params_rejected(self):
        with pytest.raises(ValueError):
            SmoothTrackParams(period_range_s=(0.1, 2.0))

    def test_too_few_frames_rejected(self):
        with pytest.raises(ValueError):
            gen_smooth_track(0, n_frames=7)


class TestInjectJitter:
    def test_zero_amplitude_is_identity(self):
        track = gen_smooth_track(1, n_frames=30)
        assert inject_jitter(track, 0.0, seed=9) is track

    def test_jitter_lowers_local_stability(self):
        wins = 0
        for seed in range(100):
            clean = gen_smooth_track(seed, n_frames=60)
            noisy = inject_jitter(clean, 0.05, seed=seed + 1)
            wins += local_stability(clean) > local_stability(noisy)
        assert wins == 100

    def test_mean_stability_monotone_over_amplitude(self):
        amplitudes = [0.01 * k for k in range(11)]
        means = []
        for a in amplitudes:
            vals = []
            for seed in range(50):
                track = gen_smooth_track(seed, n_frames=60)
                vals.append(local_stability(inject_jitter(track, a, seed=seed + 999)))
            means.append(sum(vals) / len(vals))
        assert all(m1 >= m2 for m1, m2 in zip(means, means[1:]))

    def test_noise_bounded(self):
        track = gen_smooth_track(2, n_frames=30)
        noisy = inject_jitter(track, 0.02, seed=5)
        assert np.abs(noisy.joint_angles - track.joint_angles).max() <= 0.02


class TestInjectFlip:
    def test_zero_angle_is_identity(self):
        track = gen_smooth_track(4, n_frames=30)
        assert inject_flip(track, 15, 0.0, "forward") is track

    def test_flip_then_inverse_restores(self):
        track = gen_smooth_track(5, n_frames=30)
        flipped = inject_flip(track, 10, 180.0, "forward")
        restored = inject_flip(flipped, 10, -180.0, "forward")
        np.testing.assert_allclose(restored.root_rotations, track.root_rotations, atol=1e-9)

    def test_flip_out_of_range_rejected(self):
        track = gen_smooth_track(5, n_frames=30)
        with pytest.raises(ValueError):
            inject_flip(track, 30, 90.0, "up")


class TestKeypointStream:
    def test_uniform_confidence_scores_base(self):
        stream = gen_keypoint_stream(seed=1, n_frames=10, base_conf=0.9)
        assert video_anat_score(stream).score == pytest.approx(0.9, abs=1e-12)

    def test_degraded_hand_excluded(self):
        stream = gen_keypoint_stream(
            seed=1, n_frames=10, base_conf=0.9, degrade=PartDegrade("left_hand", 0.1)
        )
        assert video_anat_score(stream).score == pytest.approx(0.9, abs=1e-12)

    def test_degraded_body_visible_but_low(self):
        stream = gen_keypoint_stream(
            seed=1, n_frames=10, base_conf=0.9, degrade=PartDegrade("body", 0.5)
        )
        score = video_anat_score(stream).score
        expected = (17 * 0.5 + 116 * 0.9) / 133
        assert score == pytest.approx(expected, abs=1e-12)
        assert score < 0.9

    def test_deterministic(self):
        a = gen_keypoint_stream(seed=11, n_frames=5, persons=2)
        b = gen_keypoint_stream(seed=11, n_frames=5, persons=2)
        for fa, fb in zip(a.frames, b.frames):
            for pa, pb in zip(fa.persons, fb.persons):
                np.testing.assert_array_equal(pa, pb)


class TestCorpusBuilders:
    def test_benchmark_corpus_layout(self, tmp_path):
        paths = synth.make_benchmark_corpus(tmp_path, seed=1, videos_per_model=2, calib_videos=3)
        assert sorted(p.name for p in paths["calib_dir"].iterdir())[0] == "calib_00.kps.ndjson"
        eval_files = sorted(p.name for p in paths["eval_dir"].iterdir())
        assert "alpha_00.vlm.json" in eval_files
        assert "gamma_01.kps.ndjson" in eval_files
        assert paths["ratings"].exists()

    def test_corpus_deterministic(self, tmp_path):
        a = synth.make_benchmark_corpus(tmp_path / "a", seed=3, videos_per_model=2, calib_videos=2)
        b = synth.make_benchmark_corpus(tmp_path / "b", seed=3, videos_per_model=2, calib_videos=2)
        for pa, pb in zip(sorted((tmp_path / "a").rglob("*")), sorted((tmp_path / "b").rglob("*"))):
            if pa.is_file():
                assert pa.read_bytes() == pb.read_bytes(), pa.name

    def test_hhi_videos_have_two_tracks(self, tmp_path):
        synth.make_benchmark_corpus(tmp_path, seed=1, videos_per_model=4, calib_videos=2)
        eval_dir = tmp_path / "eval"
        hhi_tracks = [p for p in eval_dir.iterdir() if p.name.startswith("alpha_03") and "mot" in p.name]
        assert len(hhi_tracks) == 2
