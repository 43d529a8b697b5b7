"""End-to-end wiring: features -> per-epoch snapshots -> ensemble -> scores -> backtest."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backtest import StrategyComparison, StrategyConfig, align_to_prices, compare_strategies
from .core import as_binary
from .data import Dataset, PriceSeries, Standardizer, chronological_split, stock_dataset
from .ensemble import EnsembleFit, EpochSnapshot, QualityLevel, build_ensemble
from .model import MlpConfig, TrainConfig, train_with_snapshots
from .scores import Criterion, DualReport, dual_report
from .synthetic import bursty_prices
from .thresholding import ThresholdSearch


@dataclass(frozen=True)
class EnsembleRun:
    fit: EnsembleFit
    predictions: np.ndarray
    report: DualReport


def run_ensemble(
    snapshots: list[EpochSnapshot] | tuple[EpochSnapshot, ...],
    y_train,
    y_valid,
    y_test,
    level: QualityLevel,
    search: ThresholdSearch,
    fallback: bool = False,
) -> EnsembleRun:
    """Steps 2-5 on snapshots that carry test-set probabilities."""
    fit = build_ensemble(snapshots, y_train, y_valid, level, search, fallback)
    test = {s.epoch: s.test_probs for s in snapshots if s.epoch in set(fit.classifier.epochs)}
    preds = fit.classifier.predict(test)
    return EnsembleRun(fit, preds, dual_report(as_binary(y_test, "y_test"), preds, search.criterion.window))


@dataclass(frozen=True)
class SplitData:
    x_train: np.ndarray
    y_train: np.ndarray
    x_valid: np.ndarray
    y_valid: np.ndarray
    x_test: np.ndarray
    y_test: np.ndarray
    standardizer: Standardizer


def split_dataset(ds: Dataset, fractions: tuple[float, float]) -> tuple[SplitData, tuple[range, range, range]]:
    """Chronological split with standardization fitted on the training rows only."""
    tr, va, te = chronological_split(len(ds.y), fractions)
    std = Standardizer.fit(ds.x[tr.start : tr.stop])
    sl = lambda r: slice(r.start, r.stop)  # noqa: E731
    return (
        SplitData(
            std.transform(ds.x[sl(tr)]), ds.y[sl(tr)],
            std.transform(ds.x[sl(va)]), ds.y[sl(va)],
            std.transform(ds.x[sl(te)]), ds.y[sl(te)],
            std,
        ),
        (tr, va, te),
    )


@dataclass(frozen=True)
class SyntheticStockResult:
    losses: tuple[float, ...]
    runs: dict[str, EnsembleRun]
    comparison: StrategyComparison
    test_price_days: np.ndarray


def synthetic_stock_pipeline(
    seed: int = 0,
    n_days: int = 1200,
    epochs: int = 50,
    k: int = 3,
    level: QualityLevel = QualityLevel.relative(0.9),
    scores: tuple[str, str] = ("tss", "wtss"),
    hidden: tuple[int, ...] = (16, 16, 8),
    fractions: tuple[float, float] = (0.6, 0.8),
    batch_size: int = 72,
    learning_rate: float = 1e-3,
) -> SyntheticStockResult:
    """Bursty prices -> 5-day change windows -> MLP snapshots -> two ensembles -> backtest.

    One network is trained; its snapshots are combined once per score in
    ``scores`` (quality and value-weighted by default) so the two
    strategies differ only in the criterion.
    """
    prices = bursty_prices(n_days, seed)
    ds = stock_dataset(prices, lookback=5, level=-1.0)
    data, (_, _, te) = split_dataset(ds, fractions)
    mlp = MlpConfig((data.x_train.shape[1], *hidden, 1), None, seed)
    train = train_with_snapshots(
        data.x_train, data.y_train, data.x_valid, mlp,
        TrainConfig(epochs=epochs, learning_rate=learning_rate, batch_size=batch_size, shuffle_seed=seed),
        x_test=data.x_test,
    )
    runs = {}
    for name in scores:
        search = ThresholdSearch(0.0, 1.0, Criterion.parse(name, k))
        runs[name] = run_ensemble(train.snapshots, data.y_train, data.y_valid, data.y_test, level, search,
                                  fallback=True)
    # change index t is price day t + 1; the label of window t is the move on day t + 2
    price_day = ds.end_index[te.start : te.stop] + 2
    lo = int(price_day[0]) - 1
    closes = prices.closes[lo:]
    dates = prices.dates[lo:]
    days = price_day - lo
    actual = align_to_prices(data.y_test, days, len(closes))
    preds = [align_to_prices(runs[name].predictions, days, len(closes)) for name in scores]
    comparison = compare_strategies(PriceSeries(closes, dates), preds[0], preds[1], actual, StrategyConfig())
    return SyntheticStockResult(train.losses, runs, comparison, price_day)
