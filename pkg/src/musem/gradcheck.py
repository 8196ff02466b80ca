"""Finite-difference check of the whole model on random small instances."""

import numpy as np

from .config import TrainConfig
from .model import EncodedPair, batch_loss, batch_loss_and_grad, init_params
from .numeric import dropout_mask, grad_check

MAX_CHECK_DIM = 8


def random_pairs(rng, n, d, max_len):
    """``n`` labelled pairs of random embeddings with random real lengths in [1, max_len]."""
    pairs = []
    for k in range(n):
        masks = []
        for _ in range(2):
            m = np.zeros(max_len, dtype=bool)
            m[: rng.integers(1, max_len + 1)] = True
            masks.append(m)
        Ho = rng.normal(size=(max_len, d)) * masks[0][:, None]
        Hs = rng.normal(size=(max_len, d)) * masks[1][:, None]
        pairs.append(EncodedPair(f"r{k}", Ho, masks[0], Hs, masks[1], k % 2))
    return pairs


def check_model(variant="diff", pooling="avg", d=6, hidden=4, joint_dim=8, max_len=5,
                n_examples=2, seed=7, h=1e-5, tol=1e-4, dropout=0.2,
                class_weights=(1.0, 1.5), corrupt=None):
    """Run the check; returns ``GradCheckResult`` per tensor.

    Parameters are drawn wider than the training initialisation so every
    gate and ReLU sees non-trivial inputs.  Dropout masks are sampled once
    and held fixed.  ``corrupt`` names a tensor whose analytic gradient is
    perturbed before comparison (negative control).
    """
    if d > MAX_CHECK_DIM:
        raise ValueError(f"gradient check is limited to d <= {MAX_CHECK_DIM}, got {d}")
    config = TrainConfig(d=d, hidden=hidden, joint_dim=joint_dim, max_len=max_len,
                         variant=variant, pooling=pooling, seed=seed, dropout=dropout)
    rng = np.random.default_rng(seed)
    params = init_params(config, rng)
    for t in params:
        t.value[...] = rng.normal(scale=0.5, size=t.shape)
    pairs = random_pairs(rng, n_examples, d, max_len)
    masks = [dropout_mask(joint_dim, dropout, rng) for _ in pairs]

    params.zero_grad()
    batch_loss_and_grad(params, pairs, class_weights, pooling, masks=masks)
    if corrupt is not None:
        if corrupt not in params.names:
            raise KeyError(f"no tensor named {corrupt!r}")
        params[corrupt].grad.reshape(-1)[0] += 1.0
    return grad_check(lambda: batch_loss(params, pairs, class_weights, pooling, masks=masks),
                      params, h=h, tol=tol)
