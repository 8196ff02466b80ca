import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from musem.numeric import (EmptySupportError, ParamTensor, dropout, grad_check, relu,
                           sigmoid, softmax, tanh)

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


class TestSoftmax:
    def test_uniform(self):
        np.testing.assert_allclose(softmax([0.0, 0.0, 0.0], [True, True, True]), [1 / 3] * 3)

    def test_masked_position_is_exact_zero(self):
        out = softmax([1.0, 2.0, 123.0], [True, True, False])
        # e/(e+e^2), e^2/(e+e^2) by direct evaluation
        np.testing.assert_allclose(out[:2], [0.2689414213699951, 0.7310585786300049], rtol=1e-15)
        assert out[2] == 0.0

    def test_singleton(self):
        assert softmax([5.0], [True])[0] == 1.0

    def test_all_masked(self):
        with pytest.raises(EmptySupportError, match="empty softmax support"):
            softmax([1.0, 2.0], [False, False])

    def test_large_scores_stay_finite(self):
        out = softmax([1000.0, 1001.0])
        assert np.isfinite(out).all()

    @given(arrays(np.float64, st.integers(1, 8), elements=finite), finite, st.data())
    def test_shift_invariance(self, scores, c, data):
        mask = np.array(data.draw(st.lists(st.booleans(), min_size=scores.size,
                                           max_size=scores.size)))
        mask[0] = True
        a = softmax(scores, mask)
        b = softmax(np.where(mask, scores + c, scores), mask)
        np.testing.assert_allclose(a, b, atol=1e-12, rtol=0)
        assert abs(a.sum() - 1.0) < 1e-12
        assert (a[~mask] == 0).all()


class TestActivations:
    def test_fixed_points(self):
        assert sigmoid(0.0) == 0.5
        assert tanh(0.0) == 0.0
        assert relu(-3.2) == 0.0
        assert relu(1.7) == 1.7

    @given(arrays(np.float64, 5, elements=st.floats(-30, 30)))
    def test_ranges(self, x):
        s = sigmoid(x)
        assert ((s > 0) & (s < 1)).all()
        t = tanh(x * 0.5)
        assert ((t > -1) & (t < 1)).all()
        np.testing.assert_array_equal(relu(x), np.maximum(x, 0))


class TestDropout:
    def test_zero_rate_is_identity(self, rng):
        v = rng.normal(size=7)
        np.testing.assert_array_equal(dropout(v, 0.0, rng, training=True), v)

    def test_inference_is_identity(self, rng):
        v = rng.normal(size=7)
        np.testing.assert_array_equal(dropout(v, 0.2, rng, training=False), v)

    def test_seeded_pattern_replays(self):
        out = dropout(np.ones(4), 0.5, np.random.default_rng(3), training=True)
        keep = np.random.default_rng(3).random(4) >= 0.5
        np.testing.assert_array_equal(out, np.where(keep, 2.0, 0.0))
        assert set(out[out != 0]) <= {2.0}

    def test_bit_reproducible(self):
        a = dropout(np.arange(50.0), 0.2, np.random.default_rng(9))
        b = dropout(np.arange(50.0), 0.2, np.random.default_rng(9))
        assert a.tobytes() == b.tobytes()

    @pytest.mark.parametrize("rate", [1.0, 1.5, -0.1])
    def test_bad_rate(self, rate, rng):
        with pytest.raises(ValueError):
            dropout(np.ones(3), rate, rng)


class TestGradCheck:
    def test_square(self):
        x = ParamTensor("x", np.array([3.0]))
        x.grad[:] = 2 * x.value
        (res,) = grad_check(lambda: float(x.value[0] ** 2), [x], h=1e-5)
        assert res.passed
        assert res.max_rel_error < 1e-8

    def test_constant(self):
        p = ParamTensor("p", np.ones((2, 3)))
        (res,) = grad_check(lambda: 4.0, [p])
        assert res.passed and res.max_rel_error == 0.0

    def test_wrong_gradient_fails(self):
        x = ParamTensor("x", np.array([3.0]))
        x.grad[:] = 5.0
        (res,) = grad_check(lambda: float(x.value[0] ** 2), [x])
        assert not res.passed

    def test_values_restored(self):
        x = ParamTensor("x", np.array([1.0, -2.0]))
        before = x.value.copy()
        grad_check(lambda: float((x.value ** 3).sum()), [x])
        np.testing.assert_array_equal(x.value, before)

    def test_non_finite_names_parameter(self):
        x = ParamTensor("weights", np.array([0.0]))
        with pytest.raises(FloatingPointError, match="weights"), np.errstate(invalid="ignore"):
            grad_check(lambda: float(np.log(x.value[0] - 1.0)), [x])


def test_param_tensor_grad_shape():
    with pytest.raises(ValueError):
        ParamTensor("w", np.zeros(3), np.zeros(4))
    p = ParamTensor("w", np.zeros((2, 2)))
    p.grad += 1
    p.zero_grad()
    assert not p.grad.any()


@settings(max_examples=25)
@given(st.floats(0.05, 0.9))
def test_dropout_survivors_scaled(rate):
    out = dropout(np.ones(200), rate, np.random.default_rng(0))
    kept = out[out != 0]
    np.testing.assert_allclose(kept, 1.0 / (1.0 - rate))
