import numpy as np

from vwskill.data import stock_dataset
from vwskill.pipeline import split_dataset, synthetic_stock_pipeline
from vwskill.synthetic import bursty_prices


def test_standardization_fitted_on_training_rows():
    ds = stock_dataset(bursty_prices(400, seed=3))
    data, (tr, va, te) = split_dataset(ds, (0.6, 0.8))
    assert np.allclose(data.x_train.mean(axis=0), 0, atol=1e-12)
    assert np.allclose(data.x_train.std(axis=0), 1)
    assert len(data.y_train) + len(data.y_valid) + len(data.y_test) == len(ds.y)
    assert tr.stop == va.start and va.stop == te.start


def test_synthetic_prices_are_seeded():
    a, b, c = bursty_prices(300, 1), bursty_prices(300, 1), bursty_prices(300, 2)
    assert np.array_equal(a.closes, b.closes)
    assert not np.array_equal(a.closes, c.closes)
    down = (np.diff(a.closes) / a.closes[:-1] < -0.01).mean()
    assert 0.05 < down < 0.6


def test_small_pipeline_runs_and_aligns():
    res = synthetic_stock_pipeline(seed=1, n_days=400, epochs=5)
    assert set(res.runs) == {"tss", "wtss"}
    assert len(res.losses) == 5
    n_test = len(res.runs["tss"].predictions)
    assert len(res.test_price_days) == n_test
    assert np.all(np.diff(res.test_price_days) == 1)
    # both strategies start from the same holdings on the same prices
    assert res.comparison.a.values[0] == res.comparison.b.values[0]
