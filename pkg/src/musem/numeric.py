"""Dense arithmetic helpers shared by every layer of the model.

Everything works on float64 numpy arrays.  Trainable tensors are wrapped in
:class:`ParamTensor` so the optimizer and the gradient checker can walk them
by name.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit


class EmptySupportError(ValueError):
    pass


@dataclass
class ParamTensor:
    name: str
    value: np.ndarray
    grad: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.value = np.asarray(self.value, dtype=np.float64)
        if self.grad is None:
            self.grad = np.zeros_like(self.value)
        elif self.grad.shape != self.value.shape:
            raise ValueError(
                f"{self.name}: grad shape {self.grad.shape} != value shape {self.value.shape}"
            )

    @property
    def shape(self):
        return self.value.shape

    def zero_grad(self):
        self.grad[...] = 0.0


def softmax(scores, mask=None):
    """Softmax over the positions where ``mask`` is true.

    Masked positions come back as exact zeros.  The unmasked maximum is
    subtracted before exponentiating.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if mask is None:
        mask = np.ones(scores.shape, dtype=bool)
    else:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != scores.shape:
            raise ValueError(f"mask shape {mask.shape} != scores shape {scores.shape}")
    if not mask.any():
        raise EmptySupportError("empty softmax support")
    out = np.zeros_like(scores)
    live = scores[mask]
    e = np.exp(live - live.max())
    out[mask] = e / e.sum()
    return out


def sigmoid(x):
    out = expit(np.asarray(x, dtype=np.float64))
    return out if out.ndim else float(out)


def tanh(x):
    return np.tanh(np.asarray(x, dtype=np.float64))


def relu(x):
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def dropout_mask(shape, rate, rng):
    """Inverted-dropout multiplier: 0 for dropped entries, 1/(1-rate) for kept ones."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if rate == 0.0:
        return np.ones(shape)
    keep = rng.random(shape) >= rate
    return keep / (1.0 - rate)


def dropout(v, rate, rng, training=True):
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    v = np.asarray(v, dtype=np.float64)
    if not training or rate == 0.0:
        return v.copy()
    return v * dropout_mask(v.shape, rate, rng)


@dataclass
class GradCheckResult:
    name: str
    max_rel_error: float
    passed: bool
    n_checked: int


def relative_error(analytic, numeric, floor=1e-5):
    """|a - n| / max(|a|, |n|, floor).

    The floor keeps exact-zero and near-zero gradients from turning
    round-off noise into huge ratios.  Central differences at h=1e-5 carry
    roughly eps*|f|/h ~ 1e-11 of noise per ulp, so gradients below the floor
    are effectively compared at an absolute 1e-9 (tol * floor).
    """
    a = np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    return np.abs(a - n) / np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)


def grad_check(f, params, h=1e-5, tol=1e-4, floor=1e-5):
    """Compare analytic gradients against central differences.

    ``f`` evaluates the scalar objective from the current parameter values.
    ``params`` is an iterable of :class:`ParamTensor` whose ``grad`` slots
    already hold the analytic gradient of ``f``.  Values are restored after
    each probe.  Returns one :class:`GradCheckResult` per tensor.
    """
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    results = []
    for p in params:
        analytic = p.grad.copy()
        numeric = np.zeros_like(p.value)
        flat = p.value.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            fp = f()
            flat[i] = orig - h
            fm = f()
            flat[i] = orig
            if not (np.isfinite(fp) and np.isfinite(fm)):
                raise FloatingPointError(
                    f"objective is not finite when perturbing {p.name}[{i}]"
                )
            numeric.reshape(-1)[i] = (fp - fm) / (2.0 * h)
        err = relative_error(analytic, numeric, floor)
        worst = float(err.max()) if err.size else 0.0
        results.append(GradCheckResult(p.name, worst, worst < tol, int(flat.size)))
    return results
