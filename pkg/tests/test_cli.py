import json

import numpy as np
import pytest

from vwskill.cli import main
from vwskill.data import write_series
from vwskill.ensemble import write_snapshot_matrix


def _series(path, values, name="value"):
    with open(path, "w", newline="") as fh:
        write_series(fh, values, name)
    return path


@pytest.fixture
def toy_files(tmp_path, toy_labels, toy_predictions):
    y = _series(tmp_path / "y.csv", toy_labels.tolist(), "label")
    preds = [_series(tmp_path / f"p{r}.csv", p.tolist(), "prediction") for r, p in toy_predictions.items()]
    return y, preds


def test_score_command(tmp_path, toy_files, capsys):
    y, preds = toy_files
    out = tmp_path / "score"
    assert main(["score", "--labels", str(y), "--predictions", str(preds[0]), "--out", str(out)]) == 0
    doc = json.loads((out / "report.json").read_text())
    assert round(doc["scores"]["TSS"], 4) == 0.6457
    assert round(doc["scores"]["wTSS"], 4) == 0.4877
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["outputs"]) == {"report.json", "report.csv", "weights.csv"}
    assert "wTSS  0.4877" in capsys.readouterr().out


def test_compare_command(tmp_path, toy_files):
    y, preds = toy_files
    out = tmp_path / "cmp"
    assert main(["compare", "--labels", str(y), "--predictions", *map(str, preds), "--out", str(out)]) == 0
    rows = (out / "compare.csv").read_text().splitlines()
    assert len(rows) == 5
    wtss = [round(float(r.split(",")[-3]), 4) for r in rows[1:]]
    assert wtss == [0.4877, 0.5044, 0.7102, 0.7981]


def test_curve_command(tmp_path):
    probs = _series(tmp_path / "p.csv", [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    y = _series(tmp_path / "y.csv", [0, 0, 1, 0, 0, 1, 1, 0, 1, 1])
    out = tmp_path / "curve"
    assert main(["curve", "--probs", str(probs), "--labels", str(y), "--score", "tss", "--out", str(out)]) == 0
    lines = (out / "curve.csv").read_text().splitlines()
    assert lines[0] == "tau,TSS"
    assert len(lines) == 1 + 11


def test_missing_option_is_input_error(tmp_path, capsys):
    assert main(["score", "--out", str(tmp_path / "x")]) == 2
    assert "--labels" in capsys.readouterr().err


def test_unreadable_file_is_input_error(tmp_path):
    assert main(["score", "--labels", str(tmp_path / "nope.csv"), "--predictions", str(tmp_path / "nope.csv"),
                 "--out", str(tmp_path / "x")]) == 2


def test_non_binary_labels_are_input_error(tmp_path):
    y = _series(tmp_path / "y.csv", [0, 2, 1])
    assert main(["score", "--labels", str(y), "--predictions", str(y), "--out", str(tmp_path / "x")]) == 2


def _snapshot_dir(tmp_path, rng, epochs=(1, 2, 3)):
    d = tmp_path / "snaps"
    d.mkdir()
    y = {"train": rng.integers(0, 2, 30), "valid": rng.integers(0, 2, 20), "test": rng.integers(0, 2, 25)}
    for split, labels in y.items():
        probs = {e: np.clip(labels * 0.5 + rng.random(len(labels)) * 0.5, 0, 1) for e in epochs}
        with open(d / f"{split}.csv", "w", newline="") as fh:
            write_snapshot_matrix(fh, split, probs)
        _series(tmp_path / f"y_{split}.csv", labels.tolist())
    return d


def _ensemble_args(tmp_path, d, out, *extra):
    return ["ensemble", "--snapshots", str(d), "--y-train", str(tmp_path / "y_train.csv"),
            "--y-valid", str(tmp_path / "y_valid.csv"), "--y-test", str(tmp_path / "y_test.csv"),
            "--out", str(out), *extra]


def test_ensemble_from_snapshots_and_manifest_rerun(tmp_path, rng):
    d = _snapshot_dir(tmp_path, rng)
    out = tmp_path / "ens"
    assert main(_ensemble_args(tmp_path, d, out, "--score", "wtss", "--alpha-rate", "0.8")) == 0
    for name in ("epochs.csv", "predictions.csv", "report.json", "report.csv", "weights.csv", "selected.json"):
        assert (out / name).exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["parameters"]["score"] == "wtss"
    rerun = tmp_path / "rerun"
    assert main(["ensemble", "--config", str(out / "manifest.json"), "--out", str(rerun)]) == 0
    again = json.loads((rerun / "manifest.json").read_text())
    assert again["outputs"] == manifest["outputs"]


def test_empty_ensemble_exit_code(tmp_path, rng):
    d = _snapshot_dir(tmp_path, rng)
    assert main(_ensemble_args(tmp_path, d, tmp_path / "e", "--alpha", "1.0")) == 3
    assert main(_ensemble_args(tmp_path, d, tmp_path / "f", "--alpha", "1.0", "--fallback")) == 0


def test_single_epoch_snapshots(tmp_path, rng):
    d = _snapshot_dir(tmp_path, rng, epochs=(1,))
    out = tmp_path / "one"
    assert main(_ensemble_args(tmp_path, d, out, "--alpha", "-1")) == 0
    sel = json.loads((out / "selected.json").read_text())
    assert [e["epoch"] for e in sel["epochs"]] == [1]


def test_config_dir_env(tmp_path, rng, monkeypatch):
    d = _snapshot_dir(tmp_path, rng)
    cfg = tmp_path / "cfg"
    cfg.mkdir()
    (cfg / "ensemble.json").write_text(json.dumps({"alpha": 1.0}))
    monkeypatch.setenv("VWSKILL_CONFIG_DIR", str(cfg))
    assert main(_ensemble_args(tmp_path, d, tmp_path / "g")) == 3


def test_prepare_train_ensemble_backtest(tmp_path):
    prices = tmp_path / "prices.csv"
    assert main(["synth", "--kind", "prices", "--n", "300", "--seed", "1", "--out", str(prices)]) == 0
    prep = tmp_path / "prep"
    assert main(["prepare", "--input", str(prices), "--kind", "stock", "--out", str(prep)]) == 0
    header = (prep / "train.csv").read_text().splitlines()[0]
    assert header == "index,timestamp,eta_lag4,eta_lag3,eta_lag2,eta_lag1,eta_lag0,label"
    ens = tmp_path / "ens"
    code = main(["ensemble", "--train", str(prep / "train.csv"), "--valid", str(prep / "valid.csv"),
                 "--test", str(prep / "test.csv"), "--epochs", "5", "--hidden", "8", "4", "--batch", "32",
                 "--fallback", "--out", str(ens)])
    assert code == 0
    assert (ens / "model.json").exists() and (ens / "snapshots" / "test.csv").exists()
    assert len((ens / "losses.csv").read_text().splitlines()) == 6

    n = 300
    labels = [0] * n
    preds = [0] * n
    preds[10] = 1
    y_path = _series(tmp_path / "down.csv", labels)
    p_path = _series(tmp_path / "pred.csv", preds)
    bt = tmp_path / "bt"
    assert main(["backtest", "--prices", str(prices), "--predictions", str(p_path), "--labels", str(y_path),
                 "--predictions-b", str(y_path), "--out", str(bt)]) == 0
    summary = json.loads((bt / "summary.json").read_text())
    assert set(summary) == {"final_value_a", "final_value_b", "max_drawdown_a", "max_drawdown_b"}


def test_prepare_table(tmp_path):
    table = tmp_path / "t.csv"
    assert main(["synth", "--kind", "table", "--n", "400", "--out", str(table)]) == 0
    out = tmp_path / "prep"
    assert main(["prepare", "--input", str(table), "--target", "pm", "--threshold", "75", "--out", str(out)]) == 0
    assert (out / "valid.csv").exists()


def test_version(capsys):
    with pytest.raises(SystemExit):
        from vwskill.cli import build_parser
        build_parser().parse_args(["--version"])
    assert "vwskill" in capsys.readouterr().out
