import csv
import json

import numpy as np
import pytest

from conftest import make_noisy_dataset
from fswad.cli import main


@pytest.fixture
def prepared(toy_csv, tmp_path):
    csv_path, schema_path = toy_csv
    out = tmp_path / "prepared.npz"
    code = main(
        ["prepare", "--data", str(csv_path), "--schema", str(schema_path), "--out", str(out)]
    )
    assert code == 0
    return out


@pytest.fixture
def manifest(prepared, tmp_path):
    out_dir = tmp_path / "manifests"
    code = main(
        [
            "sample", "--prepared", str(prepared),
            "--normal-count", "80", "--anomaly-total", "10",
            "--labelled-anomaly-count", "4", "--anomaly-percent", "7.0",
            "--count", "1", "--seed", "3", "--out", str(out_dir),
        ]
    )
    assert code == 0
    return out_dir / "sampleset_0.manifest.json"


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "fswad" in capsys.readouterr().out


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--nonsense", "1"])
    assert exc.value.code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_prepare_reports_shape(toy_csv, tmp_path, capsys):
    csv_path, schema_path = toy_csv
    out = tmp_path / "prepared.npz"
    assert main(["prepare", "--data", str(csv_path), "--schema", str(schema_path),
                 "--out", str(out)]) == 0
    message = capsys.readouterr().out
    assert "100 rows" in message and out.is_file()


def test_prepare_csv_format(toy_csv, tmp_path):
    csv_path, schema_path = toy_csv
    out = tmp_path / "prepared.csv"
    assert main(["prepare", "--data", str(csv_path), "--schema", str(schema_path),
                 "--format", "csv", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][-1] == "truth"
    assert len(rows) == 101


def test_prepare_missing_file(tmp_path, capsys):
    code = main(["prepare", "--data", str(tmp_path / "nope.csv"), "--schema", "nslkdd",
                 "--out", str(tmp_path / "x.npz")])
    assert code == 1
    assert "nope.csv" in capsys.readouterr().err


def test_sample_spec_file_and_flag_override(prepared, tmp_path, capsys):
    spec = tmp_path / "spec.cfg"
    spec.write_text(
        "normal_count = 80\nanomaly_total = 10\nlabelled_anomaly_count = 4\n"
        "anomaly_percent = 7.0\n"
    )
    out_dir = tmp_path / "m2"
    code = main(["sample", "--prepared", str(prepared), "--spec", str(spec),
                 "--count", "1", "--out", str(out_dir)])
    assert code == 0
    err = capsys.readouterr().err
    assert "normal_count = 80 (file)" in err
    assert "test_fraction = 0.2222" in err  # default, printed with provenance
    assert (out_dir / "sampleset_0.manifest.json").is_file()


def test_config_file_unknown_key(prepared, tmp_path, capsys):
    spec = tmp_path / "spec.cfg"
    spec.write_text("normal_count = 80\nbogus_key = 1\n")
    code = main(["sample", "--prepared", str(prepared), "--spec", str(spec),
                 "--count", "1", "--out", str(tmp_path / "m3")])
    assert code == 1
    assert "bogus_key" in capsys.readouterr().err


def test_augment_prints_batch(prepared, manifest, capsys):
    code = main(["augment", "--prepared", str(prepared), "--sampleset", str(manifest),
                 "--dry-run", "--batch-size", "8", "--seed", "1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "label" in out
    assert out.count("AAA") >= 1 and out.count("UUU") >= 1


def test_train_score_eval_round_trip(prepared, manifest, tmp_path, capsys):
    model_path = tmp_path / "model.json"
    log_path = tmp_path / "log.csv"
    code = main(["train", "--prepared", str(prepared), "--sampleset", str(manifest),
                 "--epochs", "3", "--steps-per-epoch", "4", "--seed", "5",
                 "--out", str(model_path), "--log", str(log_path)])
    assert code == 0
    assert model_path.is_file()
    with open(log_path) as fh:
        log_rows = list(csv.reader(fh))
    assert log_rows[0] == ["epoch", "mean_objective"]
    assert len(log_rows) == 4

    scores_path = tmp_path / "scores.csv"
    code = main(["score", "--prepared", str(prepared), "--model", str(model_path),
                 "--sampleset", str(manifest), "--seed", "6", "--out", str(scores_path)])
    assert code == 0
    with open(scores_path) as fh:
        rows = list(csv.DictReader(fh))
    assert set(rows[0]) == {"row_id", "score", "predicted", "truth"}

    capsys.readouterr()
    assert main(["eval", "--scores", str(scores_path), "--threshold", "12"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["tp"] + report["tn"] + report["fp"] + report["fn"] == len(rows)


def test_score_explicit_rows(prepared, manifest, tmp_path):
    model_path = tmp_path / "model.json"
    assert main(["train", "--prepared", str(prepared), "--sampleset", str(manifest),
                 "--epochs", "1", "--steps-per-epoch", "2", "--out", str(model_path)]) == 0
    rows_path = tmp_path / "rows.json"
    rows_path.write_text("[0, 1, 2]")
    scores_path = tmp_path / "scores.csv"
    assert main(["score", "--prepared", str(prepared), "--model", str(model_path),
                 "--sampleset", str(manifest), "--test", str(rows_path),
                 "--out", str(scores_path)]) == 0
    with open(scores_path) as fh:
        rows = list(csv.DictReader(fh))
    assert [r["row_id"] for r in rows] == ["0", "1", "2"]


def test_eval_missing_scores(tmp_path, capsys):
    code = main(["eval", "--scores", str(tmp_path / "missing.csv")])
    assert code == 1
    assert "missing.csv" in capsys.readouterr().err


def test_experiment_missing_dataset(tmp_path, capsys):
    code = main(["experiment", "--id", "1", "--dataset", "nslkdd",
                 "--data-dir", str(tmp_path), "--out", str(tmp_path / "out")])
    assert code == 1
    err = capsys.readouterr().err
    assert "KDDTrain+.txt" in err and str(tmp_path) in err


def test_experiment_on_prepared_cache(tmp_path, capsys):
    dataset = make_noisy_dataset(n_normal=4200, n_anomaly=700, dim=5, separation=1.0)
    cache = tmp_path / "prepared"
    cache.mkdir(parents=True)
    dataset.save(cache / "toniot.npz")
    out = tmp_path / "out"
    code = main(["experiment", "--id", "1", "--dataset", "toniot",
                 "--data-dir", str(tmp_path), "--methods", "triplet",
                 "--sample-sets", "2",
                 "--epochs", "2", "--steps-per-epoch", "3", "--repetitions", "3",
                 "--seed", "9", "--out", str(out)])
    assert code == 0
    assert (out / "aggregate.csv").is_file()
    stdout = capsys.readouterr().out
    assert "AUROC" in stdout and "base seed 9" in stdout
    with open(out / "aggregate.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["base_seed"] == "9"


def test_extract_subset(tmp_path, capsys):
    raw = tmp_path / "raw.csv"
    rng = np.random.default_rng(0)
    lines = ["f1,f2,label"]
    for i in range(200):
        lines.append(f"{rng.random():.4f},{rng.random():.4f},normal")
    for i in range(60):
        lines.append(f"{rng.random():.4f},{rng.random():.4f},attack")
    lines.append("oops,1.0,normal")  # unparseable numeric, must be skipped
    lines.append("inf,1.0,attack")  # non-finite, must be skipped
    raw.write_text("\n".join(lines) + "\n")
    schema = tmp_path / "schema.yaml"
    schema.write_text(
        "columns:\n  - {name: label, role: label}\n"
        "label_negative_values: [normal]\nother_columns: numeric\n"
    )
    out = tmp_path / "subset.csv"
    code = main(["extract", "--inputs", str(raw), "--schema", str(schema),
                 "--normals", "50", "--anomalies", "20", "--seed", "1",
                 "--out", str(out)])
    assert code == 0
    assert "2 unusable rows skipped" in capsys.readouterr().out
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    labels = [r["label"] for r in rows]
    assert labels.count("normal") == 50 and labels.count("attack") == 20


def test_extract_insufficient_rows(tmp_path, capsys):
    raw = tmp_path / "raw.csv"
    raw.write_text("f1,label\n1.0,normal\n2.0,attack\n")
    schema = tmp_path / "schema.yaml"
    schema.write_text(
        "columns:\n  - {name: label, role: label}\n"
        "label_negative_values: [normal]\nother_columns: numeric\n"
    )
    code = main(["extract", "--inputs", str(raw), "--schema", str(schema),
                 "--normals", "5", "--anomalies", "5", "--out", str(tmp_path / "s.csv")])
    assert code == 1
    assert "usable rows" in capsys.readouterr().err


def test_infer_schema_command(toy_csv, tmp_path):
    csv_path, _ = toy_csv
    out = tmp_path / "draft.yaml"
    code = main(["infer-schema", "--data", str(csv_path), "--label-column", "label",
                 "--negative", "normal", "--out", str(out)])
    assert code == 0
    from fswad import FeatureSchema

    schema = FeatureSchema.from_yaml(out)
    assert schema.column("f1").role == "numeric"
