"""Sell-before-the-drop trading simulation driven by down-movement forecasts.

Day-by-day, at each close:

* if a down movement is forecast for tomorrow, sell ``sell_quantity``
  shares (capped by holdings) and hold the cash;
* cash from a sale is reinvested in full at the close of the first actual
  down day among the ``rebuy_window`` days following the sale, or at the
  close of the day after that window regardless.

Several sales may be open at once; their cash is pooled and reinvested
together at the earliest pending deadline or trigger.  Shares are
fractional and there are no transaction costs.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .core import ArrayLike, as_binary
from .data import PriceSeries
from .errors import AlignmentError, DomainError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StrategyConfig:
    initial_shares: float = 10.0
    sell_quantity: float = 2.0
    rebuy_window: int = 3

    def __post_init__(self):
        if self.initial_shares < 0 or self.sell_quantity <= 0:
            raise DomainError("share counts must be positive")
        if self.sell_quantity > self.initial_shares:
            raise DomainError("sell quantity exceeds initial holdings")
        if self.rebuy_window < 1:
            raise DomainError("rebuy window must be >= 1 day")


@dataclass(frozen=True)
class DayRecord:
    day: int
    date: object
    close: float
    shares: float
    cash: float
    value: float
    action: str


@dataclass(frozen=True)
class BacktestResult:
    history: tuple[DayRecord, ...]
    skipped_sales: tuple[int, ...] = field(default_factory=tuple)

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.history])

    @property
    def shares(self) -> np.ndarray:
        return np.array([r.shares for r in self.history])

    @property
    def cash(self) -> np.ndarray:
        return np.array([r.cash for r in self.history])

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "shares", "cash", "value", "action"])
        for r in self.history:
            date = r.day if r.date is None else str(r.date)
            writer.writerow([date, repr(r.shares), repr(r.cash), repr(r.value), r.action])


def run_backtest(
    prices: PriceSeries | ArrayLike,
    predictions: ArrayLike,
    actual_down: ArrayLike,
    cfg: StrategyConfig = StrategyConfig(),
) -> BacktestResult:
    """Simulate the strategy over aligned daily series.

    ``predictions[d]`` is the forecast that day ``d`` is a down day, issued
    at the close of day ``d - 1`` (so ``predictions[0]`` cannot be acted
    on); ``actual_down[d]`` is whether day ``d`` really was one.
    """
    if not isinstance(prices, PriceSeries):
        prices = PriceSeries(np.asarray(prices, dtype=np.float64))
    pred = as_binary(predictions, "predictions")
    down = as_binary(actual_down, "actual_down")
    n = len(prices)
    if len(pred) != n or len(down) != n:
        raise AlignmentError(f"prices ({n}), predictions ({len(pred)}) and actual_down ({len(down)}) must align")

    shares = float(cfg.initial_shares)
    cash = 0.0
    window_start = None  # first day whose down movement triggers the rebuy
    deadline = None  # day on which the rebuy happens regardless
    history, skipped = [], []
    for d in range(n):
        close = float(prices.closes[d])
        actions = []
        if cash > 0 and window_start is not None and ((d >= window_start and down[d] == 1) or d >= deadline):
            shares += cash / close
            actions.append(f"buy {cash / close:.6g}")
            cash = 0.0
            window_start = deadline = None
        if d + 1 < n and pred[d + 1] == 1:
            qty = min(cfg.sell_quantity, shares)
            if qty <= 0:
                skipped.append(d)
                log.info("day %d: sell signal with no shares held, skipped", d)
            else:
                shares -= qty
                cash += qty * close
                actions.append(f"sell {qty:.6g}")
                if window_start is None:
                    window_start = d + 1
                    deadline = d + 1 + cfg.rebuy_window
        history.append(
            DayRecord(d, None if prices.dates is None else prices.dates[d], close, shares, cash,
                      shares * close + cash, ";".join(actions))
        )
    return BacktestResult(tuple(history), tuple(skipped))


def max_drawdown(values: ArrayLike) -> float:
    """Largest peak-to-trough loss as a fraction of the peak."""
    v = np.asarray(values, dtype=np.float64)
    peaks = np.maximum.accumulate(v)
    return float(np.max((peaks - v) / peaks))


@dataclass(frozen=True)
class StrategyComparison:
    a: BacktestResult
    b: BacktestResult

    def summary(self) -> dict:
        return {
            "final_value_a": float(self.a.values[-1]),
            "final_value_b": float(self.b.values[-1]),
            "max_drawdown_a": max_drawdown(self.a.values),
            "max_drawdown_b": max_drawdown(self.b.values),
        }

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "value_a", "value_b"])
        for ra, rb in zip(self.a.history, self.b.history):
            date = ra.day if ra.date is None else str(ra.date)
            writer.writerow([date, repr(ra.value), repr(rb.value)])


def compare_strategies(prices, predictions_a, predictions_b, actual_down, cfg: StrategyConfig = StrategyConfig()) -> StrategyComparison:
    return StrategyComparison(
        run_backtest(prices, predictions_a, actual_down, cfg),
        run_backtest(prices, predictions_b, actual_down, cfg),
    )


def align_to_prices(values: ArrayLike, price_day: ArrayLike, n_prices: int) -> np.ndarray:
    """Scatter per-row values onto a price-day axis, zero where no row exists."""
    out = np.zeros(n_prices, dtype=np.int8)
    days = np.asarray(price_day, dtype=np.int64)
    if np.any((days < 0) | (days >= n_prices)):
        raise DomainError("price day out of range")
    out[days] = np.asarray(values, dtype=np.int8)
    return out
