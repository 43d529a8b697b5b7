"""Independent reference implementations shared by the unit and acceptance tests."""

from fractions import Fraction

import numpy as np

from vwskill.errors import UndefinedScoreError
from vwskill.model import PROB_EPS, _forward_pass, flatten, loss_and_gradient, unflatten


def oracle_weight(series, i, k, future):
    """Exact weight from the case definition, with out-of-range indices absent."""
    n = len(series)
    window = [series[j] for j in range(i - k, i + k + 1) if 0 <= j < n]
    if 1 not in window:
        return Fraction(2)
    best = Fraction(0)
    for s in range(1, k + 1):
        j = i + s if future else i - s
        if 0 <= j < n:
            best = max(best, Fraction(int(series[j]), s + 1))
    return 1 - best


def oracle_matrix(y, p, k):
    """Exact (wFP, wFN) as fractions."""
    fp = sum((oracle_weight(y, i, k, True) for i in range(len(y)) if y[i] == 0 and p[i] == 1), Fraction(0))
    fn = sum((oracle_weight(p, i, k, False) for i in range(len(y)) if y[i] == 1 and p[i] == 0), Fraction(0))
    return fp, fn


def brute_force_threshold(probs, y, lo, hi, criterion):
    """Best score over every binarization reachable with tau in [lo, hi].

    ``probs > tau`` only changes at observed values, so the left end of each
    constant piece (lo, or an observed value inside [lo, hi]) covers them all.
    """
    probs = np.asarray(probs)
    taus = sorted({lo} | {float(v) for v in probs if lo <= v < hi} | {hi})
    best, best_tau = None, None
    for tau in taus:
        try:
            s = criterion(y, (probs > tau).astype(int))
        except UndefinedScoreError:
            continue
        if best is None or s > best:
            best, best_tau = s, tau
    return best, best_tau


def _pattern(params, x):
    """Which ReLUs are active and which outputs sit on the clamp."""
    acts, z = _forward_pass(params, x)
    raw = 1.0 / (1.0 + np.exp(-z))
    return [a > 0 for a in acts[1:]] + [(raw > PROB_EPS) & (raw < 1.0 - PROB_EPS)]


def gradient_check(params, x, y, l2, steps=(1e-4, 1e-5, 1e-6)):
    """Compare the analytic gradient with five-point central differences.

    A stencil is used only if every point keeps the base activation pattern,
    since the loss is not differentiable across a ReLU or clamp kink; the
    step shrinks until that holds.  Returns (max relative error, number of
    parameters left unchecked because they sit on a kink).  The relative error
    uses a 1e-6 floor on the denominator so exact zeros compare cleanly.
    """
    sizes = [params[0][0].shape[0]] + [w.shape[1] for w, _ in params]
    theta = flatten(params)
    _, grads = loss_and_gradient(params, x, y, l2)
    analytic = flatten(grads)
    base = _pattern(params, x)
    worst, on_kink = 0.0, 0
    for j in range(len(theta)):
        for h in steps:
            points = {}
            for k in (-2, -1, 1, 2):
                t = theta.copy()
                t[j] += k * h
                points[k] = unflatten(t, sizes)
            if all(all(np.array_equal(a, b) for a, b in zip(_pattern(q, x), base)) for q in points.values()):
                break
        else:
            on_kink += 1
            continue
        f = {k: loss_and_gradient(q, x, y, l2)[0] for k, q in points.items()}
        fd = (8 * (f[1] - f[-1]) - (f[2] - f[-2])) / (12 * h)
        scale = max(abs(analytic[j]), abs(fd), 1e-6)
        worst = max(worst, abs(analytic[j] - fd) / scale)
    return worst, on_kink


def random_network(rng, max_hidden=3, max_width=8):
    """Random small MLP at training scale: init-sized weights, nonzero biases, random L2."""
    hidden = [int(rng.integers(1, max_width + 1)) for _ in range(int(rng.integers(1, max_hidden + 1)))]
    sizes = (int(rng.integers(1, max_width + 1)), *hidden, 1)
    params = []
    for a, b in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(a)
        params.append((rng.uniform(-bound, bound, (a, b)), rng.uniform(-0.5, 0.5, b)))
    l2 = [float(v) for v in rng.choice([0.0, 0.01, 0.1], len(sizes) - 1)]
    x = rng.normal(size=(int(rng.integers(1, 17)), sizes[0]))
    y = rng.integers(0, 2, len(x))
    return params, x, y, l2


# Hand-worked trading scenario, values computed by hand.
# Day 1 close: forecast for day 2 is down -> sell 2 @100.  Day 2 falls 10% -> rebuy 200/90.
# Day 4 close: forecast for day 5 is down (wrong) -> sell 2 @96.  Days 5, 6 rise; day 7
# falls -> rebuy 192/80 inside the window.
SCRIPTED_PRICES = [100, 100, 90, 95, 96, 97, 98, 80, 85, 90]
SCRIPTED_PRED = [0, 0, 1, 0, 0, 1, 0, 0, 0, 0]
SCRIPTED_DOWN = [0, 0, 1, 0, 0, 0, 0, 1, 0, 0]
SCRIPTED_SHARES = [
    Fraction(10), Fraction(8), Fraction(92, 9), Fraction(92, 9), Fraction(74, 9),
    Fraction(74, 9), Fraction(74, 9), Fraction(478, 45), Fraction(478, 45), Fraction(478, 45),
]
SCRIPTED_CASH = [0, 200, 0, 0, 192, 192, 192, 0, 0, 0]
SCRIPTED_VALUES = [sh * p + c for sh, p, c in zip(SCRIPTED_SHARES, SCRIPTED_PRICES, SCRIPTED_CASH)]

# No down day follows the sale: the rebuy happens at the deadline close (day 4).
DEADLINE_PRICES = [100, 101, 102, 103, 104, 105]
DEADLINE_PRED = [0, 1, 0, 0, 0, 0]
DEADLINE_FINAL = Fraction(129, 13) * 105
