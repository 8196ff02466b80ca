"""Input coercion for the estimator API."""

import os
from collections.abc import Mapping

from .data import ExamplePair, parse_label
from .headlines import FileBacked, LeadK, source_from_dict
from .text import EmbeddingTable, load_glove


def check_pairs(X, y=None, require_labels=False):
    """Coerce ``X`` into a list of :class:`ExamplePair`.

    Items may be ``ExamplePair`` objects, mappings in the canonical record
    layout, or ``(headline, body)`` / ``(headline, body, synthetic)`` tuples.
    Labels in ``y`` override any carried by the items.
    """
    if isinstance(X, (str, bytes)) or not hasattr(X, "__len__"):
        raise TypeError("X must be a sequence of examples")
    if y is not None and len(y) != len(X):
        raise ValueError(f"X has {len(X)} examples but y has {len(y)} labels")
    out = []
    for i, item in enumerate(X):
        label = None if y is None else parse_label(int(y[i]) if not isinstance(y[i], str) else y[i])
        if isinstance(item, ExamplePair):
            ex = item
        elif isinstance(item, Mapping):
            raw = item.get("label")
            ex = ExamplePair(str(item.get("id", i)), item.get("headline"), item.get("body"),
                             None if raw is None else parse_label(raw),
                             item.get("synthetic_headline"))
        elif isinstance(item, (tuple, list)) and len(item) in (2, 3):
            ex = ExamplePair(str(i), item[0], item[1], None, item[2] if len(item) == 3 else None)
        else:
            raise TypeError(f"cannot interpret example {i} of type {type(item).__name__}")
        if label is not None:
            ex = ExamplePair(ex.id, ex.headline, ex.body, label, ex.synthetic_headline)
        if require_labels and ex.label is None:
            raise ValueError(f"example {ex.id!r} has no label")
        out.append(ex)
    if not out:
        raise ValueError("no examples given")
    return out


def check_embeddings(embeddings):
    if isinstance(embeddings, EmbeddingTable):
        return embeddings
    if isinstance(embeddings, (str, os.PathLike)):
        return load_glove(embeddings)
    raise TypeError("embeddings must be an EmbeddingTable or a path to a GloVe file")


def check_source(source):
    if source is None:
        return LeadK(1)
    if isinstance(source, int):
        return LeadK(source)
    if isinstance(source, (str, os.PathLike)):
        return FileBacked(source)
    if isinstance(source, Mapping):
        return source_from_dict(source)
    if hasattr(source, "provide"):
        return source
    raise TypeError(f"cannot use {source!r} as a synthetic headline source")


def check_class_weight(class_weight):
    if class_weight == "balanced":
        return None
    if class_weight is None:
        return (1.0, 1.0)
    if isinstance(class_weight, Mapping):
        class_weight = (class_weight[0], class_weight[1])
    return tuple(float(w) for w in class_weight)
