"""Joint ReLU layer, two-way softmax head and class-weighted cross-entropy."""

from dataclasses import dataclass

import numpy as np

from .numeric import relu, softmax

CONGRUENT, INCONGRUENT = 0, 1


@dataclass
class ClassifierParams:
    W_t: np.ndarray
    b_t: np.ndarray
    W_cl: np.ndarray
    b_cl: np.ndarray
    class_weights: tuple = (1.0, 1.0)

    def __post_init__(self):
        if len(self.class_weights) != 2 or min(self.class_weights) <= 0:
            raise ValueError(f"class_weights must be two positive numbers, got {self.class_weights}")


def log_softmax(logits):
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max()
    return shifted - np.log(np.exp(shifted).sum())


def predict_label(probs):
    """argmax with ties going to the congruent class."""
    return INCONGRUENT if probs[INCONGRUENT] > probs[CONGRUENT] else CONGRUENT


def forward(M_A, M_E, params, dropout_mask=None):
    """Return ``(logits, probs, cache)``.

    ``dropout_mask`` is the inverted-dropout multiplier applied to the joint
    representation (``None`` in inference mode).
    """
    x = np.concatenate([np.asarray(M_A, dtype=np.float64), np.asarray(M_E, dtype=np.float64)])
    if params.W_t.shape[1] != x.size:
        raise ValueError(f"joint layer expects {params.W_t.shape[1]} inputs, got {x.size}")
    if params.W_cl.shape != (2, params.W_t.shape[0]):
        raise ValueError(f"classifier weight has shape {params.W_cl.shape}")
    pre = params.W_t @ x + params.b_t
    M = relu(pre)
    if dropout_mask is not None:
        M = M * dropout_mask
    logits = params.W_cl @ M + params.b_cl
    probs = softmax(logits)
    return logits, probs, {"x": x, "pre": pre, "M": M, "mask": dropout_mask}


def loss(logits, label, class_weights=(1.0, 1.0)):
    if label not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {label!r}")
    return -class_weights[label] * log_softmax(logits)[label]


def loss_grad(logits, label, class_weights=(1.0, 1.0)):
    p = softmax(logits)
    p[label] -= 1.0
    return class_weights[label] * p


def backward(cache, params, dlogits):
    """Gradients for the head given dL/dlogits, plus dL/dM_A and dL/dM_E."""
    M = cache["M"]
    dM = params.W_cl.T @ dlogits
    if cache["mask"] is not None:
        dM = dM * cache["mask"]
    dpre = dM * (cache["pre"] > 0)
    grads = {
        "W_cl": np.outer(dlogits, M),
        "b_cl": np.array(dlogits, dtype=np.float64),
        "W_t": np.outer(dpre, cache["x"]),
        "b_t": dpre,
    }
    dx = params.W_t.T @ dpre
    return grads, dx
