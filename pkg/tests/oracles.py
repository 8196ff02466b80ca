"""Independent slow reference computations used as test oracles."""

import math
from itertools import product


def pair_vector(eq, er, variant):
    diff = [a - b for a, b in zip(eq, er)]
    dot = [a * b for a, b in zip(eq, er)]
    con = list(eq) + list(er)
    return {"diff": diff, "dot": dot, "concat": con, "clubbed": dot + con + diff}[variant]


def _softmax(xs):
    m = max(xs)
    e = [math.exp(x - m) for x in xs]
    s = sum(e)
    return [v / s for v in e]


def naive_attention(Ho, mo, Hs, ms, theta, bias, variant, pooling="avg"):
    """Score matrix, weights and attended vectors by explicit loops."""
    qs = [q for q in range(len(mo)) if mo[q]]
    rs = [r for r in range(len(ms)) if ms[r]]
    d = len(Ho[0])
    C = [[0.0] * len(ms) for _ in mo]
    for q in qs:
        for r in rs:
            f = pair_vector(Ho[q], Hs[r], variant)
            s = 0.0
            for k in range(len(f)):
                s += theta[k] * f[k]
            C[q][r] = s + bias
    pool = (lambda v: sum(v) / len(v)) if pooling == "avg" else max
    row = _softmax([pool([C[q][r] for r in rs]) for q in qs])
    col = _softmax([pool([C[q][r] for q in qs]) for r in rs])
    A_o = [0.0] * len(mo)
    A_s = [0.0] * len(ms)
    for k, q in enumerate(qs):
        A_o[q] = row[k]
    for k, r in enumerate(rs):
        A_s[r] = col[k]
    M_Ao = [sum(A_o[q] * Ho[q][j] for q in qs) for j in range(d)]
    M_As = [sum(A_s[r] * Hs[r][j] for r in rs) for j in range(d)]
    return C, A_o, A_s, M_Ao, M_As, [a + b for a, b in zip(M_Ao, M_As)]


def pair_count_auc(labels, scores):
    pos = [s for y, s in zip(labels, scores) if y == 1]
    neg = [s for y, s in zip(labels, scores) if y == 0]
    good = 0.0
    for p, n in product(pos, neg):
        good += 1.0 if p > n else 0.5 if p == n else 0.0
    return good / (len(pos) * len(neg))


def confusion_macro_f1(labels, preds):
    f1s = []
    for c in (0, 1):
        tp = sum(1 for y, p in zip(labels, preds) if y == c and p == c)
        fp = sum(1 for y, p in zip(labels, preds) if y != c and p == c)
        fn = sum(1 for y, p in zip(labels, preds) if y == c and p != c)
        f1s.append(0.0 if tp == 0 else 2 * tp / (2 * tp + fp + fn))
    return (f1s[0] + f1s[1]) / 2
