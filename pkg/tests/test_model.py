import io
import math

import numpy as np
import pytest

from oracles import gradient_check, random_network

from vwskill.errors import DegenerateDataError, DivergenceError, DomainError, ParseError
from vwskill.model import (
    MlpConfig,
    TrainConfig,
    flatten,
    forward,
    init_params,
    load_model,
    loss_and_gradient,
    save_model,
    train_with_snapshots,
    unflatten,
)
from vwskill.scores import Criterion
from vwskill.thresholding import ThresholdSearch, optimize_threshold


def _toy(rng, n=80, d=4):
    x = rng.normal(size=(n, d))
    y = (x[:, 0] + 0.5 * x[:, 1] > 0).astype(int)
    return x, y


@pytest.mark.parametrize("sizes, l2", [((3, 5, 1), (0.0, 0.0)), ((4, 6, 4, 1), (0.3, 0.01, 0.0)), ((2, 1), (0.5,))])
def test_gradient_matches_finite_differences(rng, sizes, l2):
    params = [(w, rng.uniform(-0.5, 0.5, b.shape)) for w, b in init_params(MlpConfig(sizes, l2, seed=3))]
    x = rng.normal(size=(7, sizes[0]))
    y = rng.integers(0, 2, 7)
    err, on_kink = gradient_check(params, x, y, l2)
    assert err < 1e-4 and on_kink == 0


def test_gradient_on_random_networks(rng):
    for _ in range(10):
        err, _ = gradient_check(*random_network(rng))
        assert err < 1e-4


def test_saturated_loss_keeps_precision():
    # 1 - sigmoid(15) ~ 3e-7 is just inside the clamp and must keep its digits
    params = [(np.array([[15.0]]), np.zeros(1))]
    loss, _ = loss_and_gradient(params, [[1.0]], [0])
    assert loss == pytest.approx(15.0 + math.log1p(math.exp(-15.0)), rel=1e-13)


def test_zero_weights_give_half():
    cfg = MlpConfig((3, 4, 1))
    params = [(np.zeros_like(w), np.zeros_like(b)) for w, b in init_params(cfg)]
    assert forward(params, np.ones((5, 3))).tolist() == [0.5] * 5
    loss, _ = loss_and_gradient(params, np.ones((5, 3)), [0, 1, 0, 1, 1])
    assert loss == pytest.approx(math.log(2))


def test_l2_penalty_added():
    cfg = MlpConfig((2, 1), (0.5,))
    params = [(np.array([[1.0], [2.0]]), np.zeros(1))]
    x = np.zeros((1, 2))
    loss, grads = loss_and_gradient(params, x, [1], cfg.l2_per_layer)
    assert loss == pytest.approx(math.log(2) + 0.5 * 5)
    assert grads[0][0].ravel().tolist() == pytest.approx([1.0, 2.0])


def test_clamped_output():
    params = [(np.array([[100.0]]), np.zeros(1))]
    p = forward(params, [[10.0], [-10.0]])
    assert p.tolist() == [1 - 1e-7, 1e-7]


def test_flatten_round_trip():
    cfg = MlpConfig((3, 4, 2, 1))
    params = init_params(cfg)
    back = unflatten(flatten(params), cfg.layer_sizes)
    for (w1, b1), (w2, b2) in zip(params, back):
        assert np.array_equal(w1, w2) and np.array_equal(b1, b2)
    with pytest.raises(DomainError):
        unflatten(np.zeros(3), cfg.layer_sizes)


def test_zero_learning_rate_keeps_init(rng):
    x, y = _toy(rng)
    cfg = MlpConfig((4, 6, 1), seed=2)
    run = train_with_snapshots(x, y, x, cfg, TrainConfig(epochs=3, learning_rate=0.0, batch_size=16))
    for (w1, b1), (w2, b2) in zip(run.params, init_params(cfg)):
        assert np.array_equal(w1, w2) and np.array_equal(b1, b2)
    first = run.snapshots[0].train_probs
    assert all(np.array_equal(s.train_probs, first) for s in run.snapshots)


def test_snapshots_one_per_epoch(rng):
    x, y = _toy(rng)
    xt = rng.normal(size=(9, 4))
    run = train_with_snapshots(x, y, x[:20], MlpConfig((4, 5, 1)), TrainConfig(epochs=6, batch_size=32), x_test=xt)
    assert [s.epoch for s in run.snapshots] == [1, 2, 3, 4, 5, 6]
    assert len(run.losses) == 6
    s = run.snapshots[-1]
    assert (len(s.train_probs), len(s.valid_probs), len(s.test_probs)) == (80, 20, 9)


def test_training_is_deterministic(rng):
    x, y = _toy(rng)
    cfg, tc = MlpConfig((4, 8, 1), seed=5), TrainConfig(epochs=4, batch_size=10, shuffle_seed=9)
    a = train_with_snapshots(x, y, x, cfg, tc)
    b = train_with_snapshots(x, y, x, cfg, tc)
    assert a.losses == b.losses
    assert all(np.array_equal(s.valid_probs, t.valid_probs) for s, t in zip(a.snapshots, b.snapshots))


def test_separable_data_is_learned(rng):
    x, y = _toy(rng, n=200)
    run = train_with_snapshots(x, y, x, MlpConfig((4, 16, 1), seed=1), TrainConfig(epochs=60, learning_rate=0.02, batch_size=32))
    res = optimize_threshold(run.snapshots[-1].train_probs, y, ThresholdSearch(criterion=Criterion.parse("tss")))
    assert res.best_score > 0.95


def test_loss_trends_down(rng):
    x, y = _toy(rng, n=200)
    run = train_with_snapshots(x, y, x, MlpConfig.deep(4, hidden=(16, 16, 8), seed=0), TrainConfig(epochs=60, learning_rate=3e-3, batch_size=32))
    ma = np.convolve(run.losses, np.ones(20) / 20, mode="valid")
    assert ma[-1] < ma[0]


def test_single_class_labels_rejected(rng):
    x = rng.normal(size=(10, 2))
    with pytest.raises(DegenerateDataError):
        train_with_snapshots(x, np.zeros(10, dtype=int), x, MlpConfig((2, 1)))


def test_divergence_detected(rng):
    x, y = _toy(rng)
    with pytest.raises(DivergenceError) as err:
        train_with_snapshots(x, y, x, MlpConfig((4, 8, 1), (1.0, 1.0)), TrainConfig(epochs=3, learning_rate=1e300))
    assert err.value.epoch == 1


@pytest.mark.parametrize("sizes", [(3,), (3, 2), (0, 1), (3, 4, 1, 1, 0)])
def test_bad_layer_sizes(sizes):
    with pytest.raises(DomainError):
        MlpConfig(sizes)


def test_deep_config():
    cfg = MlpConfig.deep(5)
    assert cfg.layer_sizes == (5, 64, 64, 32, 32, 16, 16, 8, 1)
    assert cfg.l2_per_layer[:3] == (0.01, 0.01, 0.0)


def test_model_file_round_trip(rng):
    cfg = MlpConfig((3, 4, 1), (0.1, 0.0), seed=4)
    params = init_params(cfg)
    buf = io.StringIO()
    save_model(buf, params, cfg, {"mean": [0.0]})
    buf.seek(0)
    back, cfg2, std = load_model(buf)
    assert cfg2 == cfg and std == {"mean": [0.0]}
    x = rng.normal(size=(5, 3))
    assert np.array_equal(forward(back, x), forward(params, x))
    with pytest.raises(ParseError):
        load_model(io.StringIO('{"format_version": 99}'))
