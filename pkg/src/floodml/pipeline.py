"""End-to-end experiment: ingest, clean, engineer, encode, filter, split, scale, fit, evaluate.

All four classifiers see the same split and the same train-fitted scaling.
Outputs are written to a temporary directory and moved into place only after
every stage succeeds; identical config and inputs give byte-identical files.
"""

from __future__ import annotations

import configparser
import csv
import io
import logging
import shutil
import tempfile
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import metrics
from . import preprocess as pp
from .models import MODEL_CLASSES, MODEL_LABELS, MODEL_ORDER, DegenerateFitError, make_model

log = logging.getLogger(__name__)

MODEL_DEFAULTS = {
    "logistic": {"learning_rate": 0.1, "max_iter": 5000, "tol": 1e-6, "l2": 0.0,
                 "threshold": 0.5},
    "svc": {"C": 1.0, "kernel": "rbf", "gamma": "scale", "tol": 1e-5, "max_passes": 100,
            "alpha_cutoff": 1e-8},
    "knn": {"k": 5},
    "tree": {"max_depth": 8, "min_samples": 2, "min_gain": 1e-7, "weighted_gain": True},
}

SCORE_KINDS = {
    "logistic": "predicted probability of class 1",
    "svc": "signed decision value",
    "knn": "fraction of k neighbours labelled 1",
    "tree": "leaf positive-class fraction",
}


class ConfigError(ValueError):
    pass


class PipelineError(RuntimeError):
    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


@dataclass(frozen=True)
class RunConfig:
    rainfall_csv: Path
    flood_csv: Path
    output_dir: Path
    start_year: int | None = None
    end_year: int | None = None
    ratio: float = 0.8
    seed: int = 0
    include_annual: bool = True
    scale_exempt: tuple = ()
    models: tuple = MODEL_ORDER
    hyperparams: dict = field(default_factory=lambda: {k: dict(v) for k, v in MODEL_DEFAULTS.items()})

    def __post_init__(self):
        if (self.start_year is not None and self.end_year is not None
                and self.start_year > self.end_year):
            raise ConfigError(f"start_year {self.start_year} is after end_year {self.end_year}")
        if not 0.0 < self.ratio < 1.0:
            raise ConfigError(f"ratio must lie in (0, 1), got {self.ratio}")
        if not self.models:
            raise ConfigError("models list is empty")
        unknown = set(self.models) - set(MODEL_CLASSES)
        if unknown:
            raise ConfigError(f"unknown models {sorted(unknown)}; choose from {list(MODEL_ORDER)}")
        if len(set(self.models)) != len(self.models):
            raise ConfigError("models list has duplicates")

    def to_text(self):
        """Every setting, defaults included, as a document ``read_config`` accepts."""
        cp = configparser.ConfigParser()
        cp.optionxform = str
        cp["run"] = {
            "rainfall_csv": str(self.rainfall_csv),
            "flood_csv": str(self.flood_csv),
            "output_dir": str(self.output_dir),
            "start_year": _fmt(self.start_year),
            "end_year": _fmt(self.end_year),
            "ratio": _fmt(self.ratio),
            "seed": _fmt(self.seed),
            "include_annual": _fmt(self.include_annual),
            "scale_exempt": ", ".join(self.scale_exempt),
            "models": ", ".join(self.models),
        }
        for kind in MODEL_ORDER:
            cp[kind] = {k: _fmt(v) for k, v in self.hyperparams[kind].items()}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


def _fmt(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _coerce(raw, default, key):
    text = raw.strip()
    if text.lower() == "none":
        return None
    try:
        if isinstance(default, bool):
            if text.lower() in ("true", "yes", "1"):
                return True
            if text.lower() in ("false", "no", "0"):
                return False
            raise ValueError(text)
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as {type(default).__name__}") from None
    if key == "svc.gamma" and text != "scale":
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"svc.gamma must be 'scale' or a number, got {raw!r}") from None
    return text


def _split_list(raw):
    return tuple(v.strip() for v in raw.replace("\n", ",").split(",") if v.strip())


def read_config(text, base_dir=".") -> RunConfig:
    """Parse the run config. Relative paths resolve against ``base_dir``."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if not cp.has_section("run"):
        raise ConfigError("config needs a [run] section")
    run = cp["run"]
    base = Path(base_dir)
    known_run = {"rainfall_csv", "flood_csv", "output_dir", "start_year", "end_year", "ratio",
                 "seed", "include_annual", "scale_exempt", "models"}
    unknown = set(run) - known_run
    if unknown:
        raise ConfigError(f"unknown [run] keys {sorted(unknown)}")
    for key in ("rainfall_csv", "flood_csv", "output_dir"):
        if key not in run:
            raise ConfigError(f"[run] is missing {key}")

    hyper = {k: dict(v) for k, v in MODEL_DEFAULTS.items()}
    for section in cp.sections():
        if section == "run":
            continue
        if section not in MODEL_DEFAULTS:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp[section].items():
            if key not in MODEL_DEFAULTS[section]:
                raise ConfigError(f"unknown key {section}.{key}")
            hyper[section][key] = _coerce(raw, MODEL_DEFAULTS[section][key], f"{section}.{key}")

    def year(key):
        raw = run.get(key, "none")
        return None if raw.strip().lower() == "none" else _coerce(raw, 0, key)

    models = _split_list(run["models"]) if "models" in run else MODEL_ORDER
    return RunConfig(
        rainfall_csv=base / run["rainfall_csv"],
        flood_csv=base / run["flood_csv"],
        output_dir=base / run["output_dir"],
        start_year=year("start_year"),
        end_year=year("end_year"),
        ratio=_coerce(run.get("ratio", "0.8"), 0.8, "ratio"),
        seed=_coerce(run.get("seed", "0"), 0, "seed"),
        include_annual=_coerce(run.get("include_annual", "true"), True, "include_annual"),
        scale_exempt=_split_list(run.get("scale_exempt", "")),
        models=models,
        hyperparams=hyper,
    )


@dataclass
class ModelResult:
    kind: str
    label: str
    model: object = None
    report: metrics.ClassReport | None = None
    roc: metrics.RocCurve | None = None
    error: str | None = None

    @property
    def summary_row(self):
        if self.report is None:
            return None
        p, r, _ = metrics.prf(self.report.confusion)
        return self.report.accuracy, p, r


@dataclass
class RunReport:
    config: RunConfig
    results: dict
    provenance: dict
    wall_clock: float = 0.0

    def summary(self):
        """``{model label: (accuracy, precision, recall) or None}`` in table order."""
        return {r.label: r.summary_row for r in self.results.values()}


def filter_timeline(dataset, start_year=None, end_year=None):
    years = dataset.years
    lo = int(years.min()) if start_year is None else start_year
    hi = int(years.max()) if end_year is None else end_year
    return ds.filter_timeline(dataset, lo, hi)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def _load(config):
    with open(config.rainfall_csv, newline="", encoding="utf-8") as rf, \
            open(config.flood_csv, newline="", encoding="utf-8") as ff:
        return ds.load_dataset(rf, ff)


def _balance(y):
    y = np.asarray(y)
    return f"{int((y == 0).sum())} no / {int((y == 1).sum())} yes"


def _fit_model(kind, params, X_train, y_train, X_test, y_test):
    result = ModelResult(kind, MODEL_LABELS[kind])
    model = make_model(kind, **params)
    try:
        model.fit(X_train, y_train)
    except DegenerateFitError as exc:
        result.error = f"degenerate fit: {exc}"
        log.warning("%s: %s", kind, result.error)
        return result
    result.model = model
    pred = model.predict(X_test)
    result.report = metrics.classification_report(y_test, pred)
    try:
        result.roc = metrics.roc_curve(y_test, model.score(X_test))
    except metrics.MetricError as exc:
        result.error = f"roc: {exc}"
    return result


def evaluate(config: RunConfig):
    """Run every stage in memory. Returns ``(RunReport, {filename: text})``."""
    started = time.perf_counter()
    dataset, stats = _stage("ingest", _load, config)
    full = _stage("timeline", filter_timeline, dataset, config.start_year, config.end_year)
    X, y, columns = full.feature_matrix(include_annual=config.include_annual)
    split = _stage("split", pp.train_test_split, X, y, config.ratio, config.seed)
    scaler = _stage("scale", pp.fit_scaler, split.X_train, columns, config.scale_exempt)
    X_train = pp.transform(scaler, split.X_train)
    X_test = pp.transform(scaler, split.X_test)

    results = {}
    for kind in MODEL_ORDER:
        if kind not in config.models:
            continue
        results[kind] = _stage(f"fit:{kind}", _fit_model, kind, config.hyperparams[kind],
                               X_train, split.y_train, X_test, split.y_test)

    years = full.years
    provenance = {
        "config": config.to_text(),
        "data": {
            **{k: str(v) for k, v in stats.items()},
            "timeline": f"{int(years.min())}-{int(years.max())}",
            "timeline_rows": str(len(full)),
            "feature_columns": ", ".join(columns),
            "train_rows": str(len(split.y_train)),
            "test_rows": str(len(split.y_test)),
            "train_balance": _balance(split.y_train),
            "test_balance": _balance(split.y_test),
            "shuffle": pp.SHUFFLE_ALGORITHM,
            "seed": str(config.seed),
            "constant_columns": ", ".join(
                n for n, c in zip(scaler.column_names, scaler.constant) if c),
        },
        "models": {},
    }
    for kind, res in results.items():
        entry = {"status": "ok" if res.error is None else res.error,
                 "roc_score": SCORE_KINDS[kind]}
        if res.roc is not None:
            entry["auc"] = repr(res.roc.auc)
        m = res.model
        if kind == "logistic" and m is not None:
            entry["iterations"] = str(m.n_iter_)
            entry["final_loss"] = repr(m.loss_)
        if kind == "svc" and m is not None:
            entry["iterations"] = str(m.n_iter_)
            entry["support_vectors"] = str(len(m.dual_coef_))
            entry["gamma"] = repr(m.gamma_)
            entry["converged"] = str(m.converged_).lower()
        if kind == "tree" and m is not None:
            entry["depth"] = str(m.root_.depth())
            entry["leaves"] = str(len(m.root_.leaves()))
        provenance["models"][kind] = entry

    report = RunReport(config, results, provenance, time.perf_counter() - started)
    files = _render(report, full, split, scaler)
    return report, files


def _render(report, dataset, split, scaler):
    files = {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["Model", "Accuracy", "Precision", "Recall"])
    for res in report.results.values():
        row = res.summary_row
        w.writerow([res.label, *(f"{v:.4f}" for v in row)] if row else [res.label, "", "", ""])
    files["summary.csv"] = buf.getvalue()

    curves = []
    for kind, res in report.results.items():
        if res.report is not None:
            files[f"report_{kind}.txt"] = res.report.format()
            buf = io.StringIO()
            metrics.write_confusion_csv(res.report.confusion, buf)
            files[f"confusion_{kind}.csv"] = buf.getvalue()
        if res.roc is not None:
            buf = io.StringIO()
            metrics.write_roc_csv(res.roc, buf)
            files[f"roc_{kind}.csv"] = buf.getvalue()
            curves.append((res.label, res.roc))
        if res.model is not None:
            files[f"model_{kind}.json"] = res.model.to_text()
    files["roc.svg"] = metrics.roc_svg(curves)

    buf = io.StringIO()
    pp.write_split_csv(split, buf)
    files["split_indices.csv"] = buf.getvalue()
    buf = io.StringIO()
    pp.write_scaler_csv(scaler, buf)
    files["scaler.csv"] = buf.getvalue()
    files["dataset.csv"] = ds.dumps_processed(dataset)
    files["provenance.txt"] = format_provenance(report.provenance)
    return files


def format_provenance(prov):
    lines = ["# run configuration (all defaults expanded)", prov["config"].rstrip(), ""]
    cp = configparser.ConfigParser()
    cp["data"] = prov["data"]
    for kind, entry in prov["models"].items():
        cp[f"result.{kind}"] = entry
    buf = io.StringIO()
    cp.write(buf)
    lines.append("# data and fit provenance")
    lines.append(buf.getvalue().rstrip())
    return "\n".join(lines) + "\n"


def run_pipeline(config: RunConfig) -> RunReport:
    """Evaluate and write all artifacts into ``config.output_dir``.

    Nothing is written unless every stage succeeds.
    """
    report, files = evaluate(config)
    out = Path(config.output_dir)
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{out.name}.", dir=out.parent))
    try:
        for name, text in files.items():
            (tmp / name).write_text(text, encoding="utf-8", newline="\n")
        out.mkdir(exist_ok=True)
        for name in files:
            (tmp / name).replace(out / name)
    except Exception as exc:
        raise PipelineError("write", exc) from exc
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    log.info("run finished in %.2f s, outputs in %s", report.wall_clock, out)
    return report


def load_summary(path):
    """Read ``summary.csv`` (or a run directory holding one) into ``{model: (acc, p, r)}``."""
    path = Path(path)
    if path.is_dir():
        path = path / "summary.csv"
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            vals = (row["Accuracy"], row["Precision"], row["Recall"])
            out[row["Model"]] = None if not all(vals) else tuple(float(v) for v in vals)
    return out


def compare_runs(summary_a, summary_b, names=("A", "B")):
    """Side-by-side metric table with per-cell delta (B - A) and the better run flagged."""
    common = [m for m in summary_a if m in summary_b]
    only = sorted(set(summary_a) ^ set(summary_b))
    if only:
        warnings.warn(f"models present in only one run are skipped: {only}", stacklevel=2)
    a_name, b_name = names
    width = max([len("Model"), *(len(m) for m in common)])
    lines = [f"{'Model':<{width}}  {'Metric':<9} {a_name:>8} {b_name:>8} {'Delta':>8}  Better"]
    for model in common:
        ra, rb = summary_a[model], summary_b[model]
        for k, metric in enumerate(("Accuracy", "Precision", "Recall")):
            if ra is None or rb is None:
                lines.append(f"{model:<{width}}  {metric:<9} {'n/a':>8} {'n/a':>8} {'':>8}  -")
                continue
            va, vb = ra[k], rb[k]
            delta = round(vb - va, 10)
            better = b_name if delta > 0 else a_name if delta < 0 else "="
            lines.append(f"{model:<{width}}  {metric:<9} {va:>8.4f} {vb:>8.4f} "
                         f"{delta:>+8.4f}  {better}")
    return "\n".join(lines) + "\n"
