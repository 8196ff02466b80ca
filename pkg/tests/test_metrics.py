from itertools import combinations_with_replacement, product

import numpy as np
import pytest

from musem.metrics import (MetricUndefinedError, auc, confusion_counts, evaluate_predictions,
                           macro_f1)

from .oracles import confusion_macro_f1, pair_count_auc

GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


def test_macro_f1_examples():
    assert macro_f1([1, 0, 0, 1], [1, 0, 0, 1]) == 1.0
    assert macro_f1([1, 0, 0, 1], [1, 1, 0, 0]) == 0.5
    assert macro_f1([0, 1, 0, 1], [1, 1, 1, 1]) == pytest.approx(1 / 3, abs=1e-15)


def test_auc_examples():
    assert auc([1, 1, 0, 0], [0.9, 0.8, 0.3, 0.1]) == 1.0
    assert auc([1, 0, 1, 0], [0.5] * 4) == 0.5
    assert auc([1, 0, 1, 0], [0.8, 0.7, 0.6, 0.5]) == 0.75


def test_auc_single_class():
    with pytest.raises(MetricUndefinedError, match="AUC undefined"):
        auc([1, 1, 1], [0.1, 0.2, 0.3])


def test_empty_macro_f1():
    with pytest.raises(ValueError):
        macro_f1([], [])


def test_bad_inputs():
    with pytest.raises(ValueError):
        confusion_counts([0, 2], [0, 1])
    with pytest.raises(ValueError):
        macro_f1([0, 1], [0])


def test_report(rng):
    y = np.array([0, 1] * 10)
    p = rng.random(20)
    r = evaluate_predictions(y, p)
    assert sum(map(sum, r.confusion)) == r.n_examples == 20
    for v in [r.macro_f1, r.auc, *r.precision, *r.recall, *r.f1]:
        assert 0.0 <= v <= 1.0
    assert set(r.to_dict()) >= {"macro_f1", "auc", "confusion"}


@pytest.mark.parametrize("n", range(1, 5))
def test_auc_exhaustive_small(n):
    # every labelling and every scoring over the grid
    for labels in product((0, 1), repeat=n):
        if 0 < sum(labels) < n:
            for scores in product(GRID, repeat=n):
                assert auc(labels, scores) == pair_count_auc(labels, scores)


def test_auc_exhaustive_multisets_up_to_8():
    # AUC only sees the multiset of (label, score) items; shuffled so order never helps
    items = list(product((0, 1), GRID))
    rng = np.random.default_rng(0)
    for n in range(5, 9):
        for combo in combinations_with_replacement(items, n):
            combo = [combo[i] for i in rng.permutation(n)]
            labels = [c[0] for c in combo]
            if 0 < sum(labels) < n:
                scores = [c[1] for c in combo]
                assert auc(labels, scores) == pair_count_auc(labels, scores)


@pytest.mark.parametrize("n", range(1, 9))
def test_macro_f1_exhaustive(n):
    for labels in product((0, 1), repeat=n):
        for preds in product((0, 1), repeat=n):
            assert macro_f1(labels, preds) == confusion_macro_f1(labels, preds)
