import json
import os

import pytest

from emgcore.configs import AcquisitionConfig, PipelineConfig, ProtocolConfig
from learn import ForestParams, Scheme, evaluate
from silentSpeechDecoder import build_parser, main
from storage import is_oracle_store, load_dataset, load_features_csv, load_report_json, load_run_manifest
from synth import SynthConfig, generate_dataset, shuffle_labels_within_batches


def _manifest(out_dir):
    return load_run_manifest(os.path.join(out_dir, "run_manifest.json"))


@pytest.fixture
def store(config_file, tmp_path):
    out = str(tmp_path / "store")
    assert main(["simulate", "--config", config_file, "--seed", "7", "--out", out]) == 0
    return out


def test_parser_requires_out():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["simulate"])


def test_simulate_writes_a_store(store):
    dataset = load_dataset(store)
    assert len(dataset) == 168
    assert dataset.session_ids() == ["S1", "S2", "S3"]
    assert all(len(dataset.batch_ids(sid)) == 7 for sid in dataset.session_ids())
    manifest = _manifest(store)
    assert manifest.command == "simulate"
    assert manifest.seeds == {"synth": 7}
    assert "S1/manifest.json" in manifest.checksums
    assert manifest.configs["forest"]["n_trees"] == 10


def test_simulate_is_reproducible(store, config_file, tmp_path):
    again = str(tmp_path / "again")
    assert main(["simulate", "--config", config_file, "--seed", "7", "--threads", "3", "--out", again]) == 0
    assert _manifest(again).checksums == _manifest(store).checksums


def test_capture_ingest_reproduces_the_store(config_file, tmp_path):
    out = str(tmp_path / "sim")
    assert main(["simulate", "--config", config_file, "--seed", "2", "--emit-capture", "--out", out]) == 0
    captures = os.path.join(out, "captures")
    assert sorted(os.listdir(captures)) == ["S1.emgcap", "S1_schedule.json", "S2.emgcap", "S2_schedule.json",
                                            "S3.emgcap", "S3_schedule.json"]

    ingested = str(tmp_path / "ingested")
    assert main(["ingest", "--config", config_file, "--out", ingested,
                 "--capture", os.path.join(captures, "S2.emgcap"),
                 "--schedule", os.path.join(captures, "S2_schedule.json")]) == 0
    direct = load_dataset(out)
    assert load_dataset(ingested).same_as(direct.subset(direct.indices_where(session_id="S2")))
    assert _manifest(ingested).command == "ingest"


def test_ingest_of_truncated_capture_fails(config_file, tmp_path, caplog):
    out = str(tmp_path / "sim")
    assert main(["simulate", "--config", config_file, "--emit-capture", "--out", out]) == 0
    capture = os.path.join(out, "captures", "S1.emgcap")
    with open(capture, "rb") as f:
        data = f.read()
    truncated = str(tmp_path / "truncated.emgcap")
    with open(truncated, "wb") as f:
        f.write(data[:-5])

    code = main(["ingest", "--config", config_file, "--out", str(tmp_path / "ingested"), "--capture", truncated,
                 "--schedule", os.path.join(out, "captures", "S1_schedule.json")])
    assert code == 1
    assert "ingest failed" in caplog.text
    assert "truncated frame" in caplog.text


def test_ingest_of_empty_schedule_warns(config_file, tmp_path, caplog):
    schedule = tmp_path / "schedule.json"
    schedule.write_text(json.dumps({"session_id": "S9", "condition": "silent", "events": []}), encoding="utf-8")
    capture = tmp_path / "empty.emgcap"
    capture.write_bytes(b"")
    out = str(tmp_path / "ingested")
    assert main(["ingest", "--config", config_file, "--out", out, "--capture", str(capture),
                 "--schedule", str(schedule)]) == 0
    assert "has no events" in caplog.text
    assert len(load_dataset(out)) == 0


def test_featurize_writes_the_feature_csv(store, config_file, tmp_path):
    out = str(tmp_path / "features")
    assert main(["featurize", "--config", config_file, "--store", store, "--out", out]) == 0
    keys, X, names = load_features_csv(os.path.join(out, "features.csv"))
    assert X.shape == (168, 3 * 7 * 21)
    assert names[0] == "ch00_w1_rms"
    assert keys[0][:2] == ("S1", "1")
    assert "features.csv" in _manifest(out).checksums


def test_evaluate_oracle_store(config_file, tmp_path, caplog):
    store = str(tmp_path / "oracle")
    assert main(["simulate", "--config", config_file, "--oracle", "1000", "--out", store]) == 0
    out = str(tmp_path / "eval")
    caplog.set_level("INFO")
    assert main(["evaluate", "--config", config_file, "--store", store, "--scheme", "global", "--trees", "25",
                 "--no-filters", "--out", out]) == 0
    assert "overall accuracy 1.000 ± 0.000" in caplog.text
    assert "chance = 0.125" in caplog.text
    for name in ("report_global.json", "report_global.csv", "report_global.md", "run_manifest.json"):
        assert os.path.exists(os.path.join(out, name))
    assert len(os.listdir(os.path.join(out, "confusion_global"))) == 5
    report = load_report_json(os.path.join(out, "report_global.json"))
    assert report.aggregate.overall_mean == 1.0
    assert report.n_trees == 25


def test_evaluate_oracle_store_switches_filters_off(config_file, tmp_path, caplog):
    store = str(tmp_path / "oracle")
    assert main(["simulate", "--config", config_file, "--oracle", "1000", "--out", store]) == 0
    assert is_oracle_store(store)
    out = str(tmp_path / "eval")
    caplog.set_level("INFO")
    assert main(["evaluate", "--config", config_file, "--store", store, "--scheme", "global", "--trees", "25",
                 "--out", out]) == 0
    assert "holds the oracle dataset; running with filters off" in caplog.text
    assert load_report_json(os.path.join(out, "report_global.json")).aggregate.overall_mean == 1.0
    assert _manifest(out).configs["pipeline"]["apply_filters"] is False


def test_synthetic_store_keeps_filters_on(store, config_file, tmp_path, caplog):
    assert not is_oracle_store(store)
    out = str(tmp_path / "features")
    assert main(["featurize", "--config", config_file, "--store", store, "--out", out]) == 0
    assert "holds the oracle dataset" not in caplog.text
    assert _manifest(out).configs["pipeline"]["apply_filters"] is True


def test_evaluate_reports_are_byte_identical(store, config_file, tmp_path):
    def run(name, threads):
        out = str(tmp_path / name)
        assert main(["evaluate", "--config", config_file, "--store", store, "--scheme", "loso", "--seed", "3",
                     "--threads", threads, "--out", out]) == 0
        with open(os.path.join(out, "report_loso.json"), "rb") as f:
            return f.read()

    assert run("first", "1") == run("second", "4")


def test_evaluate_missing_store_fails(config_file, tmp_path, caplog):
    assert main(["evaluate", "--config", config_file, "--store", str(tmp_path / "nowhere"),
                 "--out", str(tmp_path / "eval")]) == 1
    assert "evaluate failed" in caplog.text


def test_report_renders_a_saved_report(config_file, tmp_path, capsys):
    store = str(tmp_path / "oracle")
    assert main(["simulate", "--config", config_file, "--oracle", "1000", "--out", store]) == 0
    evaluated = str(tmp_path / "eval")
    assert main(["evaluate", "--config", config_file, "--store", store, "--scheme", "session", "--trees", "5",
                 "--no-filters", "--out", evaluated]) == 0
    capsys.readouterr()
    out = str(tmp_path / "rendered")
    assert main(["report", "--config", config_file, "--report", os.path.join(evaluated, "report_session.json"),
                 "--out", out]) == 0
    printed = capsys.readouterr().out
    assert "chance = 0.125" in printed
    assert "S3" in printed
    assert os.path.exists(os.path.join(out, "report_session.md"))


def test_zero_threads_are_rejected(config_file, tmp_path):
    assert main(["simulate", "--config", config_file, "--threads", "0", "--out", str(tmp_path / "x")]) == 1


def _quarter_scale():
    return ProtocolConfig(reps_per_batch=5), AcquisitionConfig()


@pytest.mark.slow
def test_shuffled_labels_give_chance_accuracy():
    proto, acq = _quarter_scale()
    dataset = shuffle_labels_within_batches(generate_dataset(proto, acq, SynthConfig(seed=1), threads=4), seed=1)
    report = evaluate(dataset, Scheme.GLOBAL_5FOLD, ForestParams(seed=1), threads=4)
    assert report.aggregate.overall_mean == pytest.approx(0.125, abs=0.05)


@pytest.mark.slow
@pytest.mark.parametrize("scheme", list(Scheme))
def test_full_scale_oracle_is_decoded_perfectly(scheme, tmp_path):
    store = str(tmp_path / "oracle")
    assert main(["simulate", "--oracle", "1000", "--threads", "4", "--config", str(tmp_path / "cfg.json"),
                 "--out", store]) == 0
    report = evaluate(load_dataset(store), scheme, ForestParams(n_trees=25, seed=2),
                      PipelineConfig(apply_filters=False), threads=4)
    assert report.aggregate.overall_mean == 1.0


def _accuracy(scheme, snr_db, seed):
    proto, acq = _quarter_scale()
    dataset = generate_dataset(proto, acq, SynthConfig(seed=seed, snr_db=snr_db, repositioning_strength=0.5),
                               threads=4)
    return evaluate(dataset, scheme, ForestParams(seed=seed), threads=4).aggregate.overall_mean


@pytest.mark.slow
def test_global_folds_beat_held_out_sessions():
    wins = 0
    for seed in (1, 2, 3):
        global_acc = _accuracy(Scheme.GLOBAL_5FOLD, 10.0, seed)
        loso_acc = _accuracy(Scheme.LOSO, 10.0, seed)
        wins += global_acc >= loso_acc and loso_acc > 0.225
    assert wins >= 2


@pytest.mark.slow
@pytest.mark.parametrize("loud_db, quiet_db, quiet_floor", [(10.0, 3.0, 0.225), (3.0, 0.0, 0.15)])
def test_higher_snr_decodes_better(loud_db, quiet_db, quiet_floor):
    wins = 0
    for seed in (1, 2, 3):
        loud = _accuracy(Scheme.GLOBAL_5FOLD, loud_db, seed)
        quiet = _accuracy(Scheme.GLOBAL_5FOLD, quiet_db, seed)
        wins += loud >= quiet and quiet > quiet_floor
    assert wins >= 2


@pytest.mark.slow
def test_full_pipeline_runs_are_byte_identical(tmp_path):
    config = str(tmp_path / "cfg.json")

    def run(name):
        store = str(tmp_path / f"{name}_store")
        out = str(tmp_path / f"{name}_eval")
        assert main(["simulate", "--config", config, "--seed", "5", "--threads", "4", "--out", store]) == 0
        assert main(["evaluate", "--config", config, "--store", store, "--scheme", "global", "--seed", "5",
                     "--threads", "4", "--out", out]) == 0
        with open(os.path.join(out, "report_global.json"), "rb") as f:
            return f.read()

    first = run("first")
    assert first == run("second")
    assert 0.125 < json.loads(first)["aggregate"]["overall_mean"] <= 1.0
