"""The full matcher: attention + LSTM encoder + classifier head.

:class:`ModelParams` owns every trainable tensor by name.  The per-example
functions below thread the three components together; gradients are
accumulated into the tensors' ``grad`` slots.
"""

from dataclasses import dataclass

import numpy as np

from . import attention, classifier, encoder
from .headlines import synthetic_for
from .numeric import ParamTensor, dropout_mask
from .text import embed_sequence, to_sequence, tokenize

LSTM_NAMES = ("W_f", "W_i", "W_C", "W_o", "b_f", "b_i", "b_C", "b_o")
HEAD_NAMES = ("W_t", "b_t", "W_cl", "b_cl")


def attention_names(variant):
    suffix = attention.PARAM_SUFFIX[variant]
    return ("theta_" + suffix, "b_" + suffix)


def param_shapes(config):
    """Expected shape of every tensor, in canonical order."""
    d, n, j = config.d, config.hidden, config.joint_dim
    theta, bias = attention_names(config.variant)
    shapes = {theta: (attention.feature_width(config.variant, d),), bias: (1,)}
    for g in encoder.GATES:
        shapes["W_" + g] = (n, n + d)
    for g in encoder.GATES:
        shapes["b_" + g] = (n,)
    shapes.update(W_t=(j, d + n), b_t=(j,), W_cl=(2, j), b_cl=(2,))
    return shapes


class ModelParams:
    def __init__(self, tensors, variant):
        attention.check_variant(variant)
        self.variant = variant
        self.tensors = {t.name: t for t in tensors}

    def __getitem__(self, name):
        return self.tensors[name]

    def __iter__(self):
        return iter(self.tensors.values())

    def __len__(self):
        return len(self.tensors)

    @property
    def names(self):
        return list(self.tensors)

    def zero_grad(self):
        for t in self:
            t.zero_grad()

    def copy(self):
        return ModelParams([ParamTensor(t.name, t.value.copy()) for t in self], self.variant)

    def theta(self):
        theta, bias = attention_names(self.variant)
        return self[theta].value, self[bias].value

    def lstm(self):
        return encoder.LstmParams(*[self[n].value for n in LSTM_NAMES])

    def head(self, class_weights=(1.0, 1.0)):
        return classifier.ClassifierParams(
            self["W_t"].value, self["b_t"].value, self["W_cl"].value, self["b_cl"].value,
            tuple(class_weights),
        )

    def equal(self, other):
        return (self.variant == other.variant and self.names == other.names
                and all(np.array_equal(a.value, b.value) for a, b in zip(self, other)))


def init_params(config, rng):
    """Glorot-uniform weights, zero biases, forget-gate bias of one."""
    config.validate()
    tensors = []
    for name, shape in param_shapes(config).items():
        if name.startswith("b_"):
            value = np.ones(shape) if name == "b_f" else np.zeros(shape)
        else:
            fan_out, fan_in = (1, shape[0]) if len(shape) == 1 else shape
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            value = rng.uniform(-limit, limit, size=shape)
        tensors.append(ParamTensor(name, value))
    return ModelParams(tensors, config.variant)


@dataclass
class EncodedPair:
    """One example ready for the model: padded embeddings and masks of both headlines."""

    id: str
    original: np.ndarray
    original_mask: np.ndarray
    synthetic: np.ndarray
    synthetic_mask: np.ndarray
    label: int = None
    original_tokens: list = None
    synthetic_tokens: list = None


def encode_pair(example_id, headline, synthetic_headline, table, max_len, label=None):
    so = to_sequence(tokenize(headline), table, max_len)
    ss = to_sequence(tokenize(synthetic_headline), table, max_len)
    if so.declared_length == 0:
        raise ValueError(f"example {example_id!r}: headline has no tokens")
    if ss.declared_length == 0:
        raise ValueError(f"example {example_id!r}: synthetic headline has no tokens")
    Ho, mo = embed_sequence(so, table)
    Hs, ms = embed_sequence(ss, table)
    return EncodedPair(str(example_id), Ho, mo, Hs, ms, label,
                       so.real_tokens, ss.real_tokens)


def prepare_pairs(examples, table, source, max_len):
    """Resolve synthetic headlines and embed every :class:`~musem.data.ExamplePair`."""
    return [
        encode_pair(ex.id, ex.headline, synthetic_for(ex, source), table, max_len, ex.label)
        for ex in examples
    ]


def forward_example(params, pair, pooling="avg", order="original_first", drop=None):
    theta, bias = params.theta()
    att, att_cache = attention.attend(pair.original, pair.original_mask,
                                      pair.synthetic, pair.synthetic_mask,
                                      theta, bias, params.variant, pooling)
    M_E, enc_cache = encoder.encode(pair.original, pair.original_mask,
                                    pair.synthetic, pair.synthetic_mask,
                                    params.lstm(), order)
    logits, probs, head_cache = classifier.forward(att.M_A, M_E, params.head(), drop)
    cache = {"att": att_cache, "enc": enc_cache, "head": head_cache, "d": att.M_A.size}
    return logits, probs, att, cache


def backward_example(params, cache, dlogits):
    """Accumulate parameter gradients for one example given dL/dlogits."""
    head_grads, dx = classifier.backward(cache["head"], params.head(), dlogits)
    d = cache["d"]
    dtheta, dbias = attention.attend_backward(cache["att"], dx[:d])
    enc_grads = encoder.encode_backward(cache["enc"], dx[d:])
    theta_name, bias_name = attention_names(params.variant)
    params[theta_name].grad += dtheta
    params[bias_name].grad += dbias
    for name, g in {**enc_grads, **head_grads}.items():
        params[name].grad += g


def batch_loss_and_grad(params, pairs, class_weights=(1.0, 1.0), pooling="avg",
                        order="original_first", dropout_rate=0.0, rng=None, masks=None):
    """Mean weighted loss over ``pairs``; gradients are added to ``params``.

    Dropout masks come from ``masks`` when given, otherwise from ``rng`` at
    ``dropout_rate`` (no dropout when both are absent).
    """
    total = 0.0
    scale = 1.0 / len(pairs)
    joint = params["b_t"].value.size
    for k, pair in enumerate(pairs):
        if masks is not None:
            drop = masks[k]
        elif rng is not None and dropout_rate > 0:
            drop = dropout_mask(joint, dropout_rate, rng)
        else:
            drop = None
        logits, _, _, cache = forward_example(params, pair, pooling, order, drop)
        total += classifier.loss(logits, pair.label, class_weights)
        backward_example(params, cache, scale * classifier.loss_grad(logits, pair.label, class_weights))
    return total * scale


def batch_loss(params, pairs, class_weights=(1.0, 1.0), pooling="avg",
               order="original_first", masks=None):
    total = 0.0
    for k, pair in enumerate(pairs):
        drop = None if masks is None else masks[k]
        logits, _, _, _ = forward_example(params, pair, pooling, order, drop)
        total += classifier.loss(logits, pair.label, class_weights)
    return total / len(pairs)


def predict_proba(params, pairs, pooling="avg", order="original_first"):
    """(n, 2) class probabilities in inference mode."""
    out = np.zeros((len(pairs), 2))
    for k, pair in enumerate(pairs):
        out[k] = forward_example(params, pair, pooling, order)[1]
    return out
