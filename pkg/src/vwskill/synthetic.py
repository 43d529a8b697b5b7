"""Seeded synthetic series with clustered (bursty) rare events."""

from __future__ import annotations

import numpy as np

from .data import PriceSeries, TimeSeriesTable


def bursty_prices(n_days: int = 1200, seed: int = 0, start: float = 100.0) -> PriceSeries:
    """Daily closes from a two-regime Markov switching return process.

    A persistent "stress" regime with negative drift and higher volatility
    makes drops below -1% arrive in bursts, so recent moves carry
    information about the next day.
    """
    rng = np.random.default_rng(seed)
    drift = (0.35, -1.5)
    vol = (0.8, 1.2)
    stay = (0.98, 0.9)
    regime = 0
    closes = np.empty(n_days)
    closes[0] = start
    for t in range(1, n_days):
        if rng.random() > stay[regime]:
            regime = 1 - regime
        r = drift[regime] + vol[regime] * rng.standard_normal()
        closes[t] = closes[t - 1] * (1.0 + r / 100.0)
    dates = np.datetime64("2001-10-01") + np.arange(n_days).astype("timedelta64[D]")
    return PriceSeries(closes, dates.astype("datetime64[s]"))


def bursty_table(n: int = 2000, seed: int = 0) -> TimeSeriesTable:
    """Hourly pollution-like table: a ``pm`` concentration with episodic spikes plus two covariates.

    ``wind`` is low before and during episodes, ``pressure`` is a smooth
    nuisance signal.
    """
    rng = np.random.default_rng(seed)
    episode = np.zeros(n)
    t = 0
    while t < n:
        t += int(rng.geometric(1 / 120))
        length = int(rng.integers(3, 15))
        episode[t : t + length] = rng.uniform(0.6, 1.0)
        t += length
    lead = np.convolve(episode, np.ones(6) / 6, mode="full")[:n]
    wind = 5.0 - 3.5 * lead + rng.normal(0, 0.7, n)
    pressure = 1013 + 5 * np.sin(np.arange(n) / 50.0) + rng.normal(0, 1, n)
    base = np.empty(n)
    base[0] = 60.0
    for i in range(1, n):
        base[i] = 0.9 * base[i - 1] + 6.0 + rng.normal(0, 8)
    pm = np.maximum(base + 250 * episode, 0.0)
    stamps = np.datetime64("2010-01-01T00:00:00") + np.arange(n).astype("timedelta64[h]")
    return TimeSeriesTable(stamps.astype("datetime64[s]"), {"pm": pm, "wind": wind, "pressure": pressure})
