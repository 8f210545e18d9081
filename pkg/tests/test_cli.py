import json

import pytest

from humeval import cli, formats, synth


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def corpus(tmp_path):
    return synth.make_benchmark_corpus(tmp_path / "corpus", seed=7, videos_per_model=2, calib_videos=4)


class TestUsage:
    def test_invalid_flag_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["score", "--definitely-not-a-flag"])
        assert exc.value.code == 2

    def test_missing_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 2


class TestErrorContract:
    def test_missing_calibration_file_machine_readable(self, tmp_path, capsys, corpus):
        code, _, err = run(
            ["score", str(corpus["eval_dir"]), "--calibration", str(tmp_path / "nope.json"),
             "--out", str(tmp_path / "r.ndjson")],
            capsys,
        )
        assert code == 1
        summary = json.loads(err.strip().splitlines()[-1])
        assert summary["error"] == "FileNotFoundError"

    def test_degenerate_corpus_error(self, tmp_path, capsys):
        synth.write_video_features(
            tmp_path / "one", "only",
            stream=synth.gen_keypoint_stream(seed=1, n_frames=5, video_id="only"),
            tracks=[synth.gen_smooth_track(1, n_frames=30, video_id="only")],
        )
        code, _, err = run(
            ["calibrate", str(tmp_path / "one"), "--out", str(tmp_path / "c.json")], capsys
        )
        assert code == 1
        assert json.loads(err.strip().splitlines()[-1])["error"] == "DegenerateCalibrationError"


class TestPipelineCommands:
    def test_calibrate_score_correlate(self, tmp_path, capsys, corpus):
        calib = tmp_path / "calibration.json"
        reports = tmp_path / "reports.ndjson"
        code, out, _ = run(["calibrate", str(corpus["calib_dir"]), "--out", str(calib)], capsys)
        assert code == 0
        assert "anat: n=4" in out

        code, out, _ = run(
            ["score", str(corpus["eval_dir"]), "--calibration", str(calib),
             "--out", str(reports), "--jobs", "1"],
            capsys,
        )
        assert code == 0
        assert len(formats.parse_reports(reports.read_bytes())) == 6

        code, out, _ = run(
            ["correlate", str(reports), str(corpus["ratings"]), "--ablation"], capsys
        )
        assert code == 0
        assert out.startswith("metric,dimension,rho,n")
        assert len(out.strip().splitlines()) == 9

        code, out, _ = run(["leaderboard", str(reports), str(corpus["ratings"])], capsys)
        assert code == 0
        assert out.splitlines()[0].startswith("model")

        code, out, _ = run(
            ["categories", str(reports), str(corpus["ratings"]),
             "--out", str(tmp_path / "cat.csv"), "--plotdata", str(tmp_path / "plot.json")],
            capsys,
        )
        assert code == 0
        payload = json.loads((tmp_path / "plot.json").read_text())
        assert payload["categories"][0] == "BMO_SIMPLE"

    def test_rerun_calibrate_byte_identical(self, tmp_path, capsys, corpus):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(["calibrate", str(corpus["calib_dir"]), "--out", str(a)], capsys)[0] == 0
        assert run(["calibrate", str(corpus["calib_dir"]), "--out", str(b)], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()


class TestSynthCommands:
    @pytest.mark.parametrize("kind,suffix", [
        ("smooth", ".p0.mot.ndjson"),
        ("jitter", ".p0.mot.ndjson"),
        ("flip", ".p0.mot.ndjson"),
        ("kps", ".kps.ndjson"),
    ])
    def test_gen_kinds_emit_parsable_files(self, tmp_path, capsys, kind, suffix):
        code, _, _ = run(
            ["synth", "gen", "--kind", kind, "--out", str(tmp_path), "--seed", "3",
             "--video-id", "demo", "--frames", "24"],
            capsys,
        )
        assert code == 0
        path = tmp_path / f"demo{suffix}"
        assert path.exists()
        if suffix.endswith(".kps.ndjson"):
            formats.parse_keypoint_stream(path.read_bytes())
        else:
            formats.parse_motion_track(path.read_bytes())

    def test_gen_degraded_kps(self, tmp_path, capsys):
        code, _, _ = run(
            ["synth", "gen", "--kind", "kps", "--out", str(tmp_path), "--video-id", "d",
             "--degrade-part", "left_hand", "--degrade-conf", "0.05", "--frames", "6"],
            capsys,
        )
        assert code == 0
        stream = formats.parse_keypoint_stream((tmp_path / "d.kps.ndjson").read_bytes())
        assert stream.frames[0].persons[0][91:112, 2].max() == 0.05


class TestValidate:
    def test_good_and_bad_files(self, tmp_path, capsys, corpus):
        good = next(corpus["eval_dir"].glob("*.kps.ndjson"))
        bad = tmp_path / "bad.kps.ndjson"
        bad.write_text('{"fps": 30, "video_id": "x"}\n{"frame_index": 0, "persons": [[[0,0,2.0]]]}\n')
        code, out, _ = run(["validate", str(good), str(bad)], capsys)
        assert code == 1
        lines = out.strip().splitlines()
        assert lines[0].endswith(": ok")
        assert "ERROR" in lines[1]


class TestConfigFile:
    def test_env_config_applies_and_flags_override(self, tmp_path, capsys, monkeypatch, corpus):
        cfg = tmp_path / "kin.toml"
        cfg.write_text("tau = 0.9  # absurdly high: nothing is visible\nlambda_local = 50\n")
        monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
        calib = tmp_path / "c.json"
        code, _, err = run(["calibrate", str(corpus["calib_dir"]), "--out", str(calib)], capsys)
        # tau 0.9 hides most parts; some calib videos score 0 but bounds still fit
        assert code in (0, 1)

        code, out, _ = run(
            ["calibrate", str(corpus["calib_dir"]), "--out", str(calib), "--tau", "0.3"], capsys
        )
        assert code == 0

    def test_unknown_config_key_rejected(self, tmp_path, capsys, monkeypatch, corpus):
        cfg = tmp_path / "kin.toml"
        cfg.write_text("banana = 1\n")
        monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
        code, _, err = run(
            ["calibrate", str(corpus["calib_dir"]), "--out", str(tmp_path / "c.json")], capsys
        )
        assert code == 1
        assert "banana" in json.loads(err.strip().splitlines()[-1])["message"]
