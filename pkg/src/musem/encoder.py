"""Single-layer LSTM run over the original tokens followed by the synthetic ones.

Gates read the concatenation ``[h_prev, x_t]``.  Padding positions are
skipped outright, so the final hidden state does not depend on how much
padding either sequence carries.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit as sigmoid

GATES = ("f", "i", "C", "o")


@dataclass
class LstmParams:
    W_f: np.ndarray
    W_i: np.ndarray
    W_C: np.ndarray
    W_o: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_C: np.ndarray
    b_o: np.ndarray

    @property
    def hidden(self):
        return self.W_f.shape[0]

    @property
    def input_dim(self):
        return self.W_f.shape[1] - self.W_f.shape[0]

    @classmethod
    def zeros(cls, hidden, d):
        return cls(*[np.zeros((hidden, hidden + d)) for _ in GATES],
                   *[np.zeros(hidden) for _ in GATES])

    def stacked(self):
        W = np.vstack([self.W_f, self.W_i, self.W_C, self.W_o])
        b = np.concatenate([self.b_f, self.b_i, self.b_C, self.b_o])
        return W, b


@dataclass
class LstmState:
    h: np.ndarray
    C: np.ndarray

    @classmethod
    def zeros(cls, hidden):
        return cls(np.zeros(hidden), np.zeros(hidden))


def _check(params, x):
    n = params.hidden
    for g in GATES:
        W, b = getattr(params, "W_" + g), getattr(params, "b_" + g)
        if W.shape != params.W_f.shape or b.shape != (n,):
            raise ValueError(f"LSTM gate {g}: inconsistent shapes {W.shape}, {b.shape}")
    if x.shape != (params.input_dim,):
        raise ValueError(f"input of shape {x.shape}, expected ({params.input_dim},)")


def _step(W, b, n, h, c, x):
    z = np.concatenate([h, x])
    a = W @ z + b
    f = sigmoid(a[:n])
    i = sigmoid(a[n:2 * n])
    g = np.tanh(a[2 * n:3 * n])
    o = sigmoid(a[3 * n:])
    c_new = f * c + i * g
    tc = np.tanh(c_new)
    return o * tc, c_new, (z, c, f, i, g, o, tc)


def lstm_step(state, x_t, params):
    x_t = np.asarray(x_t, dtype=np.float64)
    _check(params, x_t)
    W, b = params.stacked()
    h, c, _ = _step(W, b, params.hidden, state.h, state.C, x_t)
    return LstmState(h, c)


def _sequence(original, mask_o, synthetic, mask_s, order):
    parts = [np.asarray(original)[np.asarray(mask_o, dtype=bool)],
             np.asarray(synthetic)[np.asarray(mask_s, dtype=bool)]]
    if order == "synthetic_first":
        parts.reverse()
    elif order != "original_first":
        raise ValueError(f"unknown sequence order {order!r}")
    return np.concatenate(parts, axis=0)


def encode(original, mask_o, synthetic, mask_s, params, order="original_first"):
    """Return ``(M_E, cache)``: the hidden state after the last real token."""
    X = _sequence(original, mask_o, synthetic, mask_s, order)
    if X.shape[0] == 0:
        raise ValueError("cannot encode a sequence with no real tokens")
    _check(params, X[0])
    W, b = params.stacked()
    n = params.hidden
    h, c = np.zeros(n), np.zeros(n)
    steps = []
    for x in X:
        h, c, saved = _step(W, b, n, h, c, x)
        steps.append(saved)
    return h, {"W": W, "n": n, "steps": steps}


def encode_backward(cache, dM_E):
    """Backpropagate dL/dM_E through time.  Returns gradients keyed by tensor name."""
    W, n = cache["W"], cache["n"]
    dW = np.zeros_like(W)
    db = np.zeros(W.shape[0])
    dh = np.array(dM_E, dtype=np.float64)
    dc = np.zeros(n)
    for z, c_prev, f, i, g, o, tc in reversed(cache["steps"]):
        do = dh * tc
        dc = dc + dh * o * (1.0 - tc * tc)
        da = np.concatenate([
            dc * c_prev * f * (1.0 - f),
            dc * g * i * (1.0 - i),
            dc * i * (1.0 - g * g),
            do * o * (1.0 - o),
        ])
        dW += np.outer(da, z)
        db += da
        dh = (W.T @ da)[:n]
        dc = dc * f
    grads = {}
    for k, gate in enumerate(GATES):
        grads["W_" + gate] = dW[k * n:(k + 1) * n]
        grads["b_" + gate] = db[k * n:(k + 1) * n]
    return grads
