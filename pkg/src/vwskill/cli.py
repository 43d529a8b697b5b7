"""``vwskill`` command-line interface.

Exit codes: 0 success, 2 input error, 3 empty ensemble, 4 numerical divergence.
Every command writes a ``manifest.json`` next to its outputs; passing that
manifest back through ``--config`` reproduces the run.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .backtest import StrategyConfig, compare_strategies, run_backtest
from .core import as_binary, as_probabilities
from .data import (
    CsvSchema,
    ExceedsThreshold,
    PriceSeries,
    Standardizer,
    build_dataset,
    chronological_split,
    load_csv,
    make_labels,
    read_series,
    stock_dataset,
    windowed_features,
    write_series,
)
from .ensemble import (
    QualityLevel,
    read_snapshot_matrix,
    snapshots_from_matrices,
    write_snapshot_matrix,
)
from .errors import DivergenceError, EmptyEnsembleError, VWSkillError
from .model import MlpConfig, TrainConfig, save_model, train_with_snapshots
from .pipeline import run_ensemble, synthetic_stock_pipeline
from .scores import Criterion, ScoreKind, dual_report
from .synthetic import bursty_prices, bursty_table
from .thresholding import ThresholdSearch, score_curve
from .weights import DEFAULT_K

log = logging.getLogger("vwskill")

CONFIG_DIR_ENV = "VWSKILL_CONFIG_DIR"
SCORE_CHOICES = [p + k.value for k in ScoreKind for p in ("", "w")]

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_DIVERGED = 0, 2, 3, 4


class InputError(VWSkillError):
    """Bad command-line input detected after argument parsing."""


# -- output helpers ---------------------------------------------------------


def atomic_write(path: Path, write: Callable[[io.TextIOBase], None]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_json(path: Path, doc) -> None:
    atomic_write(path, lambda fh: (json.dump(doc, fh, indent=2, sort_keys=True), fh.write("\n")))


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _jsonable(v):
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def write_manifest(out: Path, args: argparse.Namespace, inputs: Sequence) -> None:
    params = {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in {"func", "config", "verbose"}}
    outputs = {p.name: sha256(p) for p in sorted(out.iterdir()) if p.is_file() and p.name != "manifest.json"}
    write_json(
        out / "manifest.json",
        {
            "tool": "vwskill",
            "version": __version__,
            "command": args.command,
            "config": None if args.config is None else str(args.config),
            "parameters": params,
            "inputs": {str(p): sha256(p) for p in inputs if p is not None},
            "outputs": outputs,
        },
    )


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) in (None, [])]
    if missing:
        raise InputError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


# -- commands ---------------------------------------------------------------


def cmd_score(args) -> int:
    _require(args, "labels", "predictions")
    y = as_binary(read_series(args.labels), "labels")
    p = as_binary(read_series(args.predictions), "predictions")
    report = dual_report(y, p, args.k)
    out = _out_dir(args)
    atomic_write(out / "report.json", report.write_json)
    atomic_write(out / "report.csv", report.write_csv)
    atomic_write(out / "weights.csv", report.weight_report.write_csv)
    write_manifest(out, args, [args.labels, args.predictions])
    wanted = {"both": ("quality", "value_weighted"), "quality": ("quality",), "value": ("value_weighted",)}[args.mode]
    for row in report.rows():
        if row["mode"] in wanted:
            val = "undefined" if row["value"] is None else f"{row['value']:.4f}"
            print(f"{row['score']:5s} {val}")
    return EXIT_OK


def cmd_compare(args) -> int:
    _require(args, "labels", "predictions")
    y = as_binary(read_series(args.labels), "labels")
    names = args.names or [Path(p).stem for p in args.predictions]
    if len(names) != len(args.predictions):
        raise InputError("--names must match the number of prediction files")
    kinds = [k.value.upper() for k in ScoreKind]
    columns = ["name", "tp", "fp", "fn", "tn", "wfp", "wfn", *kinds, *("w" + k for k in kinds)]
    rows = []
    for name, path in zip(names, args.predictions):
        r = dual_report(y, as_binary(read_series(path), str(path)), args.k)
        row = {"name": name, "tp": r.quality.tp, "fp": r.quality.fp, "fn": r.quality.fn, "tn": r.quality.tn,
               "wfp": r.weighted.fp, "wfn": r.weighted.fn}
        row.update(r.scores)
        rows.append(row)

    def write(fh):
        w = csv.DictWriter(fh, columns, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: "" if v is None else (repr(v) if isinstance(v, float) else v) for k, v in row.items()})

    out = _out_dir(args)
    atomic_write(out / "compare.csv", write)
    write_manifest(out, args, [args.labels, *args.predictions])
    for row in rows:
        tss_v, wtss_v = row["TSS"], row["wTSS"]
        print(f"{row['name']}: TSS={tss_v if tss_v is None else round(tss_v, 4)} "
              f"wTSS={wtss_v if wtss_v is None else round(wtss_v, 4)}")
    return EXIT_OK


def cmd_curve(args) -> int:
    _require(args, "probs", "labels")
    probs = as_probabilities(read_series(args.probs), "probs")
    y = as_binary(read_series(args.labels), "labels")
    search = ThresholdSearch(args.a, args.b, Criterion.parse(args.score, args.k))
    curve = score_curve(probs, y, search)

    def write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tau", search.criterion.name])
        for tau, s in curve:
            w.writerow([repr(tau), "" if s is None else repr(s)])

    out = _out_dir(args)
    atomic_write(out / "curve.csv", write)
    write_manifest(out, args, [args.probs, args.labels])
    best = max((s for _, s in curve if s is not None), default=None)
    print(f"{len(curve)} candidate thresholds; best {search.criterion.name} = {best}")
    return EXIT_OK


def _quality_level(args) -> QualityLevel:
    if args.alpha is not None and args.alpha_rate is not None:
        raise InputError("use either --alpha or --alpha-rate, not both")
    if args.alpha is not None:
        return QualityLevel.absolute(args.alpha)
    return QualityLevel.relative(args.alpha_rate if args.alpha_rate is not None else 0.9)


def _read_feature_csv(path, label_column: str) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if label_column not in header:
        raise InputError(f"{path}: no label column {label_column!r}")
    li = header.index(label_column)
    fcols = [j for j, h in enumerate(header) if j != li and h not in ("index", "timestamp")]
    x = np.empty((len(rows) - 1, len(fcols)))
    y = np.empty(len(rows) - 1)
    for r, row in enumerate(rows[1:]):
        try:
            x[r] = [float(row[j]) for j in fcols]
            y[r] = float(row[li])
        except (ValueError, IndexError):
            raise InputError(f"{path}: bad value on row {r + 2}") from None
    if not np.all(np.isfinite(x)):
        raise InputError(f"{path}: non-finite feature values")
    return x, as_binary(y, f"{path} labels")


def cmd_ensemble(args) -> int:
    level = _quality_level(args)
    search = ThresholdSearch(args.a, args.b, Criterion.parse(args.score, args.k))
    out = _out_dir(args)
    inputs: list = []
    if args.snapshots is not None:
        _require(args, "y_train", "y_valid", "y_test")
        mats = {}
        snap_dir = Path(args.snapshots)
        for split in ("train", "valid", "test"):
            path = snap_dir / f"{split}.csv"
            with open(path, newline="") as fh:
                name, mats[split] = read_snapshot_matrix(fh)
            if name != split:
                raise InputError(f"{path} is labelled as split {name!r}")
            inputs.append(path)
        snapshots = snapshots_from_matrices(mats["train"], mats["valid"], mats["test"])
        y_train = as_binary(read_series(args.y_train), "y_train")
        y_valid = as_binary(read_series(args.y_valid), "y_valid")
        y_test = as_binary(read_series(args.y_test), "y_test")
        inputs += [args.y_train, args.y_valid, args.y_test]
    else:
        _require(args, "train", "valid", "test")
        x_train, y_train = _read_feature_csv(args.train, args.label_column)
        x_valid, y_valid = _read_feature_csv(args.valid, args.label_column)
        x_test, y_test = _read_feature_csv(args.test, args.label_column)
        inputs += [args.train, args.valid, args.test]
        std = Standardizer.fit(x_train)
        hidden = tuple(args.hidden)
        l2 = tuple(args.l2 if i < args.l2_layers else 0.0 for i in range(len(hidden) + 1))
        mlp = MlpConfig((x_train.shape[1], *hidden, 1), l2, args.seed)
        cfg = TrainConfig(epochs=args.epochs, learning_rate=args.lr, batch_size=args.batch, shuffle_seed=args.seed)
        run = train_with_snapshots(std.transform(x_train), y_train, std.transform(x_valid), mlp, cfg,
                                   x_test=std.transform(x_test))
        snapshots = list(run.snapshots)
        for split, attr in (("train", "train_probs"), ("valid", "valid_probs"), ("test", "test_probs")):
            probs = {s.epoch: getattr(s, attr) for s in snapshots}
            atomic_write(out / "snapshots" / f"{split}.csv", lambda fh, sp=split, pr=probs: write_snapshot_matrix(fh, sp, pr))
        atomic_write(out / "model.json", lambda fh: save_model(fh, run.params, mlp, std.to_dict()))
        atomic_write(out / "losses.csv", lambda fh: write_series(fh, list(run.losses), "loss"))

    result = run_ensemble(snapshots, y_train, y_valid, y_test, level, search, args.fallback)
    selected = set(result.fit.classifier.epochs)

    def write_epochs(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epoch", "tau_star", f"train_{search.criterion.name}", f"valid_{search.criterion.name}", "selected"])
        for s in result.fit.snapshots:
            fmt = lambda v: "" if v is None else repr(float(v))  # noqa: E731
            w.writerow([s.epoch, fmt(s.tau_star), fmt(s.train_score), fmt(s.valid_score), int(s.epoch in selected)])

    atomic_write(out / "epochs.csv", write_epochs)
    atomic_write(out / "predictions.csv", lambda fh: write_series(fh, result.predictions, "prediction"))
    atomic_write(out / "report.json", result.report.write_json)
    atomic_write(out / "report.csv", result.report.write_csv)
    atomic_write(out / "weights.csv", result.report.weight_report.write_csv)
    write_json(out / "selected.json", {
        "criterion": search.criterion.name,
        "cutoff": result.fit.cutoff,
        "epochs": [{"epoch": e, "tau_star": t} for e, t in result.fit.classifier.selected],
    })
    write_manifest(out, args, inputs)
    s = result.report.scores
    print(f"selected {len(selected)} epoch(s); test TSS={s['TSS']} wTSS={s['wTSS']}")
    return EXIT_OK


def cmd_backtest(args) -> int:
    _require(args, "prices", "predictions", "labels")
    table = load_csv(args.prices, CsvSchema(args.timestamp_column, (args.price_column,)))
    prices = PriceSeries.from_table(table, args.price_column)
    preds = as_binary(read_series(args.predictions), "predictions")
    down = as_binary(read_series(args.labels), "labels")
    cfg = StrategyConfig(args.initial_shares, args.sell, args.rebuy_window)
    out = _out_dir(args)
    inputs = [args.prices, args.predictions, args.labels]
    if args.predictions_b is not None:
        cmp = compare_strategies(prices, preds, as_binary(read_series(args.predictions_b), "predictions_b"), down, cfg)
        atomic_write(out / "trajectory_a.csv", cmp.a.write_csv)
        atomic_write(out / "trajectory_b.csv", cmp.b.write_csv)
        atomic_write(out / "comparison.csv", cmp.write_csv)
        summary = cmp.summary()
        inputs.append(args.predictions_b)
    else:
        res = run_backtest(prices, preds, down, cfg)
        atomic_write(out / "trajectory.csv", res.write_csv)
        summary = {"final_value": float(res.values[-1]), "initial_value": float(res.values[0]),
                   "skipped_sales": list(res.skipped_sales)}
    write_json(out / "summary.json", summary)
    write_manifest(out, args, inputs)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_prepare(args) -> int:
    """Raw time series -> windowed, labelled, chronologically split feature CSVs."""
    _require(args, "input")
    if args.schema:
        with open(args.schema) as fh:
            schema = CsvSchema.from_json(fh)
    else:
        schema = CsvSchema(args.timestamp_column)
    table = load_csv(args.input, schema)
    if args.kind == "stock":
        prices = PriceSeries.from_table(table, args.price_column)
        ds = stock_dataset(prices, args.lookback, args.level)
        stamps = table.timestamps[1:][ds.end_index]
        names = tuple(f"eta_lag{args.lookback - 1 - j}" for j in range(args.lookback))
    else:
        _require(args, "target", "threshold")
        cols = args.features or list(table.columns)
        win = windowed_features(table, args.lookback, cols)
        labels = make_labels(table, ExceedsThreshold(args.target, args.threshold, args.horizon))
        ds = build_dataset(win, labels)
        stamps = table.timestamps[ds.end_index]
        names = win.names
    if args.split_dates:
        parts = chronological_split(len(ds.y), tuple(args.split_dates), stamps)
    else:
        parts = chronological_split(len(ds.y), tuple(args.split))
    out = _out_dir(args)
    for split, r in zip(("train", "valid", "test"), parts):
        def write(fh, r=r):
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "timestamp", *names, "label"])
            for i in r:
                w.writerow([int(ds.end_index[i]), str(stamps[i]), *(repr(float(v)) for v in ds.x[i]), int(ds.y[i])])
        atomic_write(out / f"{split}.csv", write)
    write_manifest(out, args, [args.input] + ([args.schema] if args.schema else []))
    print(f"{len(ds.y)} rows ({ds.dropped} dropped): " + ", ".join(f"{n}={len(r)}" for n, r in zip(("train", "valid", "test"), parts)))
    return EXIT_OK


def cmd_synth(args) -> int:
    out = Path(args.out)
    if args.kind == "prices":
        p = bursty_prices(args.n, args.seed)

        def write(fh):
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["timestamp", "close"])
            for d, c in zip(p.dates, p.closes):
                w.writerow([str(d) + "Z", repr(float(c))])
    else:
        t = bursty_table(args.n, args.seed)

        def write(fh):
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["timestamp", *t.columns])
            for i, d in enumerate(t.timestamps):
                w.writerow([str(d) + "Z", *(repr(float(c[i])) for c in t.columns.values())])

    atomic_write(out, write)
    print(f"wrote {args.n} rows to {out}")
    return EXIT_OK


def cmd_demo(args) -> int:
    """Seeded synthetic comparison of quality- vs value-optimized ensembles."""
    level = _quality_level(args)
    res = synthetic_stock_pipeline(seed=args.seed, n_days=args.n, epochs=args.epochs, k=args.k, level=level)
    out = _out_dir(args)
    doc = {"seed": args.seed, "epochs": args.epochs, "k": args.k, "final_training_loss": res.losses[-1],
           "strategies": {}, "backtest": res.comparison.summary()}
    for name, run in res.runs.items():
        doc["strategies"][name] = {
            "selected_epochs": list(run.fit.classifier.epochs),
            "cutoff": run.fit.cutoff,
            **run.report.to_dict(),
        }
    write_json(out / "demo_report.json", doc)
    atomic_write(out / "asset_profiles.csv", res.comparison.write_csv)
    write_manifest(out, args, [])
    lines = [f"{'score':6s} {'TSS-opt':>9s} {'wTSS-opt':>9s}"]
    a, b = (res.runs[n].report.scores for n in res.runs)
    for key in a:
        fa = "n/a" if a[key] is None else f"{a[key]:.4f}"
        fb = "n/a" if b[key] is None else f"{b[key]:.4f}"
        lines.append(f"{key:6s} {fa:>9s} {fb:>9s}")
    bt = res.comparison.summary()
    lines.append(f"final asset value: TSS-opt {bt['final_value_a']:.2f}, wTSS-opt {bt['final_value_b']:.2f}")
    print("\n".join(lines))
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, out_default: str | None = "out") -> None:
    p.add_argument("--config", type=Path, help="JSON file of option values (a manifest also works)")
    p.add_argument("--out", default=out_default, help="output directory")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_k(p):
    p.add_argument("--k", type=int, default=DEFAULT_K, help="half-size of the weighting window (default %(default)s)")


def _add_search(p):
    p.add_argument("--score", choices=SCORE_CHOICES, default="tss")
    p.add_argument("--a", type=float, default=0.0, help="lower end of the threshold interval")
    p.add_argument("--b", type=float, default=1.0, help="upper end of the threshold interval")
    _add_k(p)


def _add_level(p):
    p.add_argument("--alpha", type=float, help="absolute quality level")
    p.add_argument("--alpha-rate", type=float, help="quality level as a fraction of the best validation score")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vwskill", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"vwskill {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="quality and value-weighted matrices and scores of one prediction")
    p.add_argument("--labels", type=Path)
    p.add_argument("--predictions", type=Path)
    p.add_argument("--mode", choices=["both", "quality", "value"], default="both")
    _add_k(p)
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compare", help="score several predictions against the same labels")
    p.add_argument("--labels", type=Path)
    p.add_argument("--predictions", type=Path, nargs="+")
    p.add_argument("--names", nargs="+")
    _add_k(p)
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("curve", help="skill score versus threshold")
    p.add_argument("--probs", type=Path)
    p.add_argument("--labels", type=Path)
    _add_search(p)
    _add_common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("ensemble", help="train or load epoch snapshots and build the ensemble")
    p.add_argument("--snapshots", type=Path, help="directory with train.csv, valid.csv, test.csv snapshot matrices")
    p.add_argument("--y-train", type=Path)
    p.add_argument("--y-valid", type=Path)
    p.add_argument("--y-test", type=Path)
    p.add_argument("--train", type=Path, help="feature CSV (from `prepare`)")
    p.add_argument("--valid", type=Path)
    p.add_argument("--test", type=Path)
    p.add_argument("--label-column", default="label")
    _add_search(p)
    _add_level(p)
    p.add_argument("--fallback", action="store_true", help="use the best single epoch if none passes the level")
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--batch", type=int, default=72)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hidden", type=int, nargs="+", default=[64, 64, 32, 32, 16, 16, 8])
    p.add_argument("--l2", type=float, default=0.01)
    p.add_argument("--l2-layers", type=int, default=2, help="number of leading weight matrices with L2")
    _add_common(p)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("backtest", help="simulate the down-movement trading strategy")
    p.add_argument("--prices", type=Path)
    p.add_argument("--price-column", default="close")
    p.add_argument("--timestamp-column", default="timestamp")
    p.add_argument("--predictions", type=Path)
    p.add_argument("--predictions-b", type=Path, help="second prediction series for a side-by-side run")
    p.add_argument("--labels", type=Path, help="actual down days aligned with prices")
    p.add_argument("--initial-shares", type=float, default=10.0)
    p.add_argument("--sell", type=float, default=2.0)
    p.add_argument("--rebuy-window", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_backtest)

    p = sub.add_parser("prepare", help="window, label and split a raw CSV time series")
    p.add_argument("--input", type=Path)
    p.add_argument("--schema", type=Path)
    p.add_argument("--timestamp-column", default="timestamp")
    p.add_argument("--kind", choices=["exceed", "stock"], default="exceed")
    p.add_argument("--target")
    p.add_argument("--threshold", type=float)
    p.add_argument("--horizon", type=int, default=1)
    p.add_argument("--features", nargs="+")
    p.add_argument("--price-column", default="close")
    p.add_argument("--level", type=float, default=-1.0, help="down-movement level in percent")
    p.add_argument("--lookback", type=int, default=5)
    p.add_argument("--split", type=float, nargs=2, default=[0.6, 0.8])
    p.add_argument("--split-dates", nargs=2)
    _add_common(p)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("synth", help="write a seeded synthetic CSV")
    p.add_argument("--kind", choices=["prices", "table"], default="prices")
    p.add_argument("--n", type=int, default=1200)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, out_default="synthetic.csv")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("demo", help="seeded synthetic TSS- vs wTSS-optimized ensemble comparison")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1200)
    p.add_argument("--epochs", type=int, default=50)
    _add_k(p)
    _add_level(p)
    _add_common(p, out_default="demo_out")
    p.set_defaults(func=cmd_demo)
    return parser


def _load_config(path: Path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if "parameters" in doc and "tool" in doc:
        doc = doc["parameters"]
    return {k.replace("-", "_"): v for k, v in doc.items() if k not in {"command", "func"}}


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg_path = args.config
    if cfg_path is None and os.environ.get(CONFIG_DIR_ENV):
        candidate = Path(os.environ[CONFIG_DIR_ENV]) / f"{args.command}.json"
        if candidate.exists():
            cfg_path = candidate
    if cfg_path is not None:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**_load_config(cfg_path))
        args = parser.parse_args(argv)
        args.config = cfg_path
    return args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        print(f"vwskill: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except EmptyEnsembleError as exc:
        print(f"vwskill: empty ensemble: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except DivergenceError as exc:
        print(f"vwskill: diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (VWSkillError, OSError, ValueError) as exc:
        print(f"vwskill: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
