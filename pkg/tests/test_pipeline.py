import csv
import io
import warnings

import numpy as np
import pytest

from floodml import cli, pipeline
from floodml import preprocess as pp
from floodml.dataset import load_dataset, parse_daily_rainfall, parse_floods
from floodml.models import DecisionTree, LogisticRegression
from floodml.synthetic import SyntheticSpec, generate_synthetic, read_spec


def write_config(tmp_path, data_dir, **extra):
    lines = [
        f"rainfall_csv = {data_dir / 'rainfall.csv'}",
        f"flood_csv = {data_dir / 'flood.csv'}",
        f"output_dir = {tmp_path / 'out'}",
    ]
    lines += [f"{k} = {v}" for k, v in extra.items()]
    path = tmp_path / "run.ini"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_generate_shape_and_determinism():
    spec = SyntheticSpec(stations=2, start_year=2000, end_year=2001)
    rain, flood = generate_synthetic(spec, seed=5)
    assert len(rain.splitlines()) == 1 + 48
    assert len(flood.splitlines()) == 1 + 4
    assert "NaN" not in rain
    assert generate_synthetic(spec, seed=5) == (rain, flood)
    assert generate_synthetic(spec, seed=6) != (rain, flood)
    recs = parse_daily_rainfall(io.StringIO(rain))
    feb = [r for r in recs if r.year == 2000 and r.month == 2][0]
    assert feb.n_missing == 2  # leap year


def test_generate_missing_cells_and_labels_follow_rule():
    spec = SyntheticSpec(stations=3, start_year=2000, end_year=2004, missing_rate=0.05,
                         flood_threshold=2200.0)
    rain, flood = generate_synthetic(spec, seed=1)
    assert "NaN" in rain
    data, stats = load_dataset(io.StringIO(rain), io.StringIO(flood))
    assert stats["imputed_cells"] > 0
    for row in data.rows:
        assert row.flood == int(row.annual > 2200.0)


def test_generate_invalid_spec():
    with pytest.raises(ValueError):
        SyntheticSpec(stations=0)
    with pytest.raises(ValueError):
        SyntheticSpec(start_year=2001, end_year=2000)
    with pytest.raises(ValueError):
        read_spec("bogus = 1\n")
    spec = read_spec("stations = 3\nmonthly_profile = 1,2,3,4,5,6,7,8,9,10,11,12\n")
    assert spec.stations == 3 and spec.monthly_profile[11] == 12.0


def test_synthetic_threshold_rule_is_learnable():
    spec = SyntheticSpec(stations=34, start_year=2011, end_year=2020)
    rain, flood = generate_synthetic(spec, seed=3)
    data, _ = load_dataset(io.StringIO(rain), io.StringIO(flood))
    X, y, _ = data.feature_matrix()
    assert 0.1 < y.mean() < 0.9
    split = pp.train_test_split(X, y, 0.8, seed=0)
    sc = pp.fit_scaler(split.X_train)
    Xtr, Xte = pp.transform(sc, split.X_train), pp.transform(sc, split.X_test)
    for model in (DecisionTree(max_depth=3), LogisticRegression()):
        acc = np.mean(model.fit(Xtr, split.y_train).predict(Xte) == split.y_test)
        assert acc >= 0.95, type(model).__name__


def test_config_round_trip_and_defaults(tmp_path, synthetic_files):
    path = write_config(tmp_path, synthetic_files, seed=4, models="knn, logistic")
    cfg = pipeline.read_config(path.read_text())
    assert cfg.models == ("knn", "logistic") and cfg.seed == 4 and cfg.ratio == 0.8
    assert cfg.hyperparams["knn"]["k"] == 5
    again = pipeline.read_config(cfg.to_text())
    assert again == cfg


def test_config_sections_override(tmp_path, synthetic_files):
    path = write_config(tmp_path, synthetic_files)
    text = "[run]\n" + path.read_text() + "[svc]\nkernel = linear\nC = 2.5\n[tree]\nmax_depth = none\n"
    cfg = pipeline.read_config(text)
    assert cfg.hyperparams["svc"]["kernel"] == "linear" and cfg.hyperparams["svc"]["C"] == 2.5
    assert cfg.hyperparams["tree"]["max_depth"] is None


@pytest.mark.parametrize(
    "extra, match",
    [
        ({"models": ""}, "empty"),
        ({"models": "forest"}, "unknown models"),
        ({"start_year": 2020, "end_year": 2011}, "after"),
        ({"ratio": 1.5}, "ratio"),
        ({"colour": "red"}, "unknown"),
    ],
)
def test_config_errors(tmp_path, synthetic_files, extra, match):
    path = write_config(tmp_path, synthetic_files, **extra)
    with pytest.raises(pipeline.ConfigError, match=match):
        pipeline.read_config(path.read_text())


def test_run_writes_all_artifacts(tmp_path, synthetic_files):
    cfg = pipeline.read_config(write_config(tmp_path, synthetic_files).read_text())
    report = pipeline.run_pipeline(cfg)
    out = tmp_path / "out"
    names = {p.name for p in out.iterdir()}
    for kind in ("logistic", "svc", "knn", "tree"):
        assert {f"report_{kind}.txt", f"confusion_{kind}.csv", f"roc_{kind}.csv"} <= names
    assert {"summary.csv", "roc.svg", "provenance.txt", "split_indices.csv", "scaler.csv"} <= names
    rows = list(csv.reader(open(out / "summary.csv")))
    assert rows[0] == ["Model", "Accuracy", "Precision", "Recall"]
    assert [r[0] for r in rows[1:]] == [
        "Binary Logistic Regression", "Support Vector Classifier (SVC)",
        "K-Nearest Neighbors (KNN)", "Decision Tree Classifier (DTC)"]
    summary = report.summary()
    for r in rows[1:]:
        assert r[1:] == [f"{v:.4f}" for v in summary[r[0]]]
    prov = (out / "provenance.txt").read_text()
    assert "test_rows = 68" in prov and "train_rows = 272" in prov
    assert "PCG64" in prov and "[logistic]" in prov and "learning_rate = 0.1" in prov
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".out.")]


def test_models_subset(tmp_path, synthetic_files):
    cfg = pipeline.read_config(write_config(tmp_path, synthetic_files, models="tree").read_text())
    report = pipeline.run_pipeline(cfg)
    assert list(report.results) == ["tree"]
    assert len((tmp_path / "out" / "summary.csv").read_text().splitlines()) == 2


def test_timeline_filter_in_run(tmp_path, synthetic_files):
    cfg = pipeline.read_config(
        write_config(tmp_path, synthetic_files, start_year=2016, end_year=2020).read_text())
    report = pipeline.run_pipeline(cfg)
    assert report.provenance["data"]["timeline_rows"] == "170"
    assert report.provenance["data"]["test_rows"] == "34"


def test_stage_error_leaves_no_outputs(tmp_path, synthetic_files):
    bad = tmp_path / "data"
    bad.mkdir()
    (bad / "rainfall.csv").write_text((synthetic_files / "rainfall.csv").read_text())
    (bad / "flood.csv").write_text("Station,Year,Flood\nStation01,2011,YES\n")
    cfg = pipeline.read_config(write_config(tmp_path, bad).read_text())
    with pytest.raises(pipeline.PipelineError) as err:
        pipeline.run_pipeline(cfg)
    assert err.value.stage == "ingest"
    assert not (tmp_path / "out").exists()


def test_degenerate_model_is_recorded_not_fatal(tmp_path):
    spec = SyntheticSpec(stations=5, start_year=2000, end_year=2009, flood_threshold=1e9)
    rain, flood = generate_synthetic(spec, seed=0)
    (tmp_path / "rainfall.csv").write_text(rain)
    (tmp_path / "flood.csv").write_text(flood)
    cfg = pipeline.read_config(write_config(tmp_path, tmp_path).read_text())
    report = pipeline.run_pipeline(cfg)
    assert "degenerate" in report.results["svc"].error
    assert report.results["logistic"].report is not None
    rows = (tmp_path / "out" / "summary.csv").read_text().splitlines()
    assert rows[2] == "Support Vector Classifier (SVC),,,"
    assert len(rows) == 5


def test_compare_runs():
    a = {"Binary Logistic Regression": (0.8561, 0.75, 0.55)}
    b = {"Binary Logistic Regression": (0.8676, 0.6154, 0.6667)}
    text = pipeline.compare_runs(a, b)
    acc = [ln for ln in text.splitlines() if "Accuracy" in ln and "Binary" in ln][0]
    assert "+0.0115" in acc and acc.rstrip().endswith("B")
    prec = [ln for ln in text.splitlines() if "Precision" in ln and "Binary" in ln][0]
    assert prec.rstrip().endswith("A")
    same = pipeline.compare_runs(a, a)
    assert all(ln.rstrip().endswith("=") for ln in same.splitlines()[1:])
    with pytest.warns(UserWarning):
        diff = pipeline.compare_runs(a, {"Other": (0.5, 0.5, 0.5)})
    assert len(diff.splitlines()) == 1


def test_cli_end_to_end(tmp_path, capsys):
    spec = tmp_path / "spec.ini"
    spec.write_text("stations = 6\nstart_year = 2000\nend_year = 2009\nflood_noise = 100\n")
    assert cli.main(["generate", "--spec", str(spec), "--seed", "2", "--out",
                     str(tmp_path / "data")]) == 0
    cfg = write_config(tmp_path, tmp_path / "data")
    assert cli.main(["run", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "Model,Accuracy,Precision,Recall" in out
    assert cli.main(["compare", str(tmp_path / "out"), str(tmp_path / "out" / "summary.csv")]) == 0
    assert "Delta" in capsys.readouterr().out


def test_cli_errors_are_stage_named(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("rainfall_csv = missing.csv\nflood_csv = missing.csv\noutput_dir = out\n")
    assert cli.main(["run", "--config", str(cfg)]) == 1
    assert "error [ingest]" in capsys.readouterr().err
    cfg.write_text("models =\n")
    assert cli.main(["run", "--config", str(cfg)]) == 2
    assert "error [config]" in capsys.readouterr().err


def test_config_and_spec_allow_inline_comments(tmp_path, synthetic_files):
    path = write_config(tmp_path, synthetic_files)
    text = path.read_text() + "seed = 3   # fixed\n[tree]\nmax_depth = none ; unlimited\n"
    cfg = pipeline.read_config(text)
    assert cfg.seed == 3 and cfg.hyperparams["tree"]["max_depth"] is None
    assert read_spec("stations = 4  # small\n").stations == 4
