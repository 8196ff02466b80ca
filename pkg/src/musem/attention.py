"""Word-pair (inter-mutual) attention between an original and a synthetic headline.

Every original token q is paired with every synthetic token r.  A pair
feature is projected to a scalar score ``C[q, r]``; pooling the score
matrix along rows and columns and normalising with softmax gives one weight
per original token and one per synthetic token.  The two weighted averages
of the embeddings are added to form the attended vector.

Four pair features are supported:

``diff``     e_q - e_r
``dot``      e_q * e_r (elementwise)
``concat``   [e_q, e_r]
``clubbed``  [e_q * e_r, e_q, e_r, e_q - e_r]
"""

from dataclasses import dataclass

import numpy as np

from .numeric import softmax

VARIANTS = ("diff", "dot", "concat", "clubbed")
POOLINGS = ("avg", "max")

# parameter-name suffix per variant
PARAM_SUFFIX = {"diff": "diff", "dot": "dot", "concat": "con", "clubbed": "dpc"}

_BLOCKS = {
    "diff": ("diff",),
    "dot": ("dot",),
    "concat": ("concat",),
    "clubbed": ("dot", "concat", "diff"),
}
_BLOCK_WIDTH = {"diff": 1, "dot": 1, "concat": 2}


def feature_width(variant, d):
    check_variant(variant)
    return d * sum(_BLOCK_WIDTH[b] for b in _BLOCKS[variant])


def check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"unknown attention variant {variant!r}; expected one of {VARIANTS}")


def check_pooling(pooling):
    if pooling not in POOLINGS:
        raise ValueError(f"unknown pooling {pooling!r}; expected one of {POOLINGS}")


@dataclass
class AttentionParams:
    variant: str
    theta: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        check_variant(self.variant)
        self.theta = np.asarray(self.theta, dtype=np.float64).reshape(-1)
        if self.theta.size % feature_width(self.variant, 1):
            raise ValueError(f"theta length {self.theta.size} does not fit variant {self.variant}")

    @property
    def dim(self):
        return self.theta.size // feature_width(self.variant, 1)


@dataclass
class AttentionResult:
    C: np.ndarray
    A_o: np.ndarray
    A_s: np.ndarray
    M_Ao: np.ndarray
    M_As: np.ndarray
    M_A: np.ndarray


def _block_features(kind, Eo, Es):
    if kind == "diff":
        return Eo[:, None, :] - Es[None, :, :]
    if kind == "dot":
        return Eo[:, None, :] * Es[None, :, :]
    l, p = Eo.shape[0], Es.shape[0]
    return np.concatenate(
        [np.broadcast_to(Eo[:, None, :], (l, p, Eo.shape[1])),
         np.broadcast_to(Es[None, :, :], (l, p, Es.shape[1]))],
        axis=-1,
    )


def pair_feature(e_q, e_r, variant):
    e_q = np.asarray(e_q, dtype=np.float64)
    e_r = np.asarray(e_r, dtype=np.float64)
    if e_q.shape != e_r.shape or e_q.ndim != 1:
        raise ValueError(f"embedding dimension mismatch: {e_q.shape} vs {e_r.shape}")
    check_variant(variant)
    return np.concatenate(
        [_block_features(b, e_q[None], e_r[None])[0, 0] for b in _BLOCKS[variant]]
    )


def _theta_slices(theta, variant, d):
    # each block gets its own contiguous copy so reduced variants score identically
    out, start = [], 0
    for b in _BLOCKS[variant]:
        w = _BLOCK_WIDTH[b] * d
        out.append((b, start, np.ascontiguousarray(theta[start:start + w])))
        start += w
    return out


def _scores(Eo, Es, theta, bias, variant):
    d = Eo.shape[1]
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.size != feature_width(variant, d):
        raise ValueError(
            f"{variant} attention expects theta of length {feature_width(variant, d)}, got {theta.size}"
        )
    feats, C = [], None
    for kind, start, w in _theta_slices(theta, variant, d):
        F = _block_features(kind, Eo, Es)
        part = (F * w).sum(axis=-1)
        C = part if C is None else C + part
        feats.append((start, F))
    return C + bias, feats


def _unmasked(H, mask, side):
    H = np.asarray(H, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if H.ndim != 2 or mask.shape != (H.shape[0],):
        raise ValueError(f"{side}: embeddings {H.shape} and mask {mask.shape} disagree")
    if not mask.any():
        raise ValueError(f"{side} sequence is fully masked")
    return H[mask], mask


def score_matrix(H_o, mask_o, H_s, mask_s, theta, bias, variant):
    """Full ``len(mask_o) x len(mask_s)`` score matrix.

    Entries in a masked row or column are left at 0 and must be ignored
    downstream; :func:`attention_weights` does so using the same masks.
    """
    check_variant(variant)
    Eo, mask_o = _unmasked(H_o, mask_o, "original")
    Es, mask_s = _unmasked(H_s, mask_s, "synthetic")
    if Eo.shape[1] != Es.shape[1]:
        raise ValueError("original and synthetic embeddings differ in dimension")
    block, _ = _scores(Eo, Es, theta, _scalar(bias), variant)
    C = np.zeros((mask_o.size, mask_s.size))
    C[np.ix_(mask_o, mask_s)] = block
    return C


def _pool(block, pooling):
    if pooling == "avg":
        return block.mean(axis=1), block.mean(axis=0), None
    arg_r = block.argmax(axis=1)
    arg_q = block.argmax(axis=0)
    rows = block[np.arange(block.shape[0]), arg_r]
    cols = block[arg_q, np.arange(block.shape[1])]
    return rows, cols, (arg_r, arg_q)


def attention_weights(C, mask_o, mask_s, pooling="avg"):
    """Row- and column-pooled softmax weights over the unmasked block of ``C``."""
    check_pooling(pooling)
    C = np.asarray(C, dtype=np.float64)
    mask_o = np.asarray(mask_o, dtype=bool)
    mask_s = np.asarray(mask_s, dtype=bool)
    if C.shape != (mask_o.size, mask_s.size):
        raise ValueError(f"score matrix {C.shape} does not match masks")
    A_o = np.zeros(mask_o.size)
    A_s = np.zeros(mask_s.size)
    if not mask_o.any() or not mask_s.any():
        # let softmax raise its empty-support error
        softmax(np.zeros(0), np.zeros(0, dtype=bool))
    rows, cols, _ = _pool(C[np.ix_(mask_o, mask_s)], pooling)
    A_o[mask_o] = softmax(rows)
    A_s[mask_s] = softmax(cols)
    return A_o, A_s


def attended_representation(H, weights):
    H = np.asarray(H, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (H.shape[0],):
        raise ValueError(f"{weights.size} weights for {H.shape[0]} rows")
    return weights @ H


def combine(M_Ao, M_As):
    return np.asarray(M_Ao, dtype=np.float64) + np.asarray(M_As, dtype=np.float64)


def _scalar(b):
    return float(np.asarray(b, dtype=np.float64).reshape(-1)[0])


def attend(H_o, mask_o, H_s, mask_s, theta, bias, variant="diff", pooling="avg"):
    """Forward pass.  Returns ``(AttentionResult, cache)`` for :func:`attend_backward`."""
    check_variant(variant)
    check_pooling(pooling)
    Eo, mask_o = _unmasked(H_o, mask_o, "original")
    Es, mask_s = _unmasked(H_s, mask_s, "synthetic")
    if Eo.shape[1] != Es.shape[1]:
        raise ValueError("original and synthetic embeddings differ in dimension")

    block, feats = _scores(Eo, Es, theta, _scalar(bias), variant)
    rows, cols, argmax = _pool(block, pooling)
    a_o = softmax(rows)
    a_s = softmax(cols)
    M_Ao = a_o @ Eo
    M_As = a_s @ Es

    C = np.zeros((mask_o.size, mask_s.size))
    C[np.ix_(mask_o, mask_s)] = block
    A_o = np.zeros(mask_o.size)
    A_o[mask_o] = a_o
    A_s = np.zeros(mask_s.size)
    A_s[mask_s] = a_s
    result = AttentionResult(C, A_o, A_s, M_Ao, M_As, M_Ao + M_As)
    cache = dict(Eo=Eo, Es=Es, a_o=a_o, a_s=a_s, feats=feats, argmax=argmax,
                 pooling=pooling, theta_size=np.asarray(theta).size)
    return result, cache


def attend_backward(cache, dM_A):
    """Gradients of the projection weights and bias given dL/dM_A."""
    Eo, Es = cache["Eo"], cache["Es"]
    a_o, a_s = cache["a_o"], cache["a_s"]
    l, p = Eo.shape[0], Es.shape[0]

    da_o = Eo @ dM_A
    da_s = Es @ dM_A
    drows = a_o * (da_o - a_o @ da_o)
    dcols = a_s * (da_s - a_s @ da_s)

    if cache["pooling"] == "avg":
        dC = drows[:, None] / p + dcols[None, :] / l
    else:
        arg_r, arg_q = cache["argmax"]
        dC = np.zeros((l, p))
        np.add.at(dC, (np.arange(l), arg_r), drows)
        np.add.at(dC, (arg_q, np.arange(p)), dcols)

    dtheta = np.zeros(cache["theta_size"])
    for start, F in cache["feats"]:
        dtheta[start:start + F.shape[-1]] = np.tensordot(dC, F, axes=([0, 1], [0, 1]))
    return dtheta, np.array([dC.sum()])
