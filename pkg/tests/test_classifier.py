import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from musem.classifier import ClassifierParams, forward, loss, loss_grad, predict_label


def head(rng, d=3, n=2, j=4):
    return ClassifierParams(rng.normal(size=(j, d + n)), rng.normal(size=j),
                            rng.normal(size=(2, j)), rng.normal(size=2))


def test_zero_head_is_uniform(rng):
    p = head(rng)
    p.W_cl[...] = 0
    p.b_cl[...] = 0
    _, probs, _ = forward(rng.normal(size=3), rng.normal(size=2), p)
    np.testing.assert_array_equal(probs, [0.5, 0.5])
    assert predict_label(probs) == 0


def test_log3_logits():
    p = ClassifierParams(np.zeros((1, 2)), np.zeros(1), np.zeros((2, 1)),
                         np.array([math.log(3.0), 0.0]))
    _, probs, _ = forward([0.0], [0.0], p)
    np.testing.assert_allclose(probs, [0.75, 0.25], rtol=1e-15)


def test_dead_relu_leaves_bias(rng):
    p = head(rng)
    x_A, x_E = np.abs(rng.normal(size=3)), np.abs(rng.normal(size=2))
    p.W_t[...] = -np.abs(p.W_t)
    p.b_t[...] = -1.0
    logits, _, cache = forward(x_A, x_E, p)
    np.testing.assert_array_equal(cache["M"], 0)
    np.testing.assert_array_equal(logits, p.b_cl)


def test_uniform_loss_is_ln2():
    for label in (0, 1):
        assert abs(loss([0.0, 0.0], label) - math.log(2.0)) <= 1e-12


def test_confident_loss():
    # -log(e^10 / (e^10 + e^-10)), 50-digit reference
    assert loss([10.0, -10.0], 0) == pytest.approx(2.0611536203143807032e-9, rel=1e-9)


def test_weight_scales_linearly(rng):
    logits = rng.normal(size=2)
    assert loss(logits, 1, (1.0, 2.0)) == 2 * loss(logits, 1)


@given(st.floats(-30, 30), st.floats(-30, 30), st.floats(-100, 100), st.integers(0, 1))
def test_loss_properties(a, b, c, label):
    L = loss([a, b], label)
    assert L >= 0
    assert abs(loss([a + c, b + c], label) - L) <= 1e-10
    g = loss_grad([a, b], label)
    assert abs(g.sum()) < 1e-12


def test_bad_label():
    with pytest.raises(ValueError):
        loss([0.0, 0.0], 2)


def test_shape_mismatch(rng):
    with pytest.raises(ValueError):
        forward(np.zeros(4), np.zeros(2), head(rng))


def test_class_weights_positive(rng):
    with pytest.raises(ValueError):
        ClassifierParams(np.zeros((1, 1)), np.zeros(1), np.zeros((2, 1)), np.zeros(2), (1.0, 0.0))
