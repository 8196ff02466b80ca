"""Small constructed topic corpus for smoke tests and demos.

Each topic owns a handful of words whose embeddings cluster around an
orthogonal topic direction; filler words sit near the origin.  A congruent
item's body opens with a sentence about the headline's topic, an
incongruent item's body opens with a sentence about a different topic, so
the lead-1 synthetic headline carries the class signal.
"""

import numpy as np

from .data import ExamplePair
from .text import EmbeddingTable

N_TOPICS = 4
WORDS_PER_TOPIC = 6
FILLERS = ("the", "a", "of", "on", "says", "new", "report", "after")


def topic_word(topic, k):
    return f"t{topic}w{k}"


def toy_embeddings(d=8, seed=0, scale=1.5, spread=0.1):
    if d < N_TOPICS:
        raise ValueError(f"need d >= {N_TOPICS} for orthogonal topics")
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.normal(size=(d, N_TOPICS)))
    tokens, rows = [], []
    for t in range(N_TOPICS):
        for k in range(WORDS_PER_TOPIC):
            tokens.append(topic_word(t, k))
            rows.append(scale * basis[:, t] + spread * rng.normal(size=d))
    for w in FILLERS:
        tokens.append(w)
        rows.append(0.2 * rng.normal(size=d))
    return EmbeddingTable(tokens, np.array(rows))


def _sentence(rng, topic, n_topic, n_fill):
    words = [topic_word(topic, k) for k in rng.choice(WORDS_PER_TOPIC, n_topic, replace=False)]
    words += list(rng.choice(FILLERS, n_fill, replace=False))
    rng.shuffle(words)
    return " ".join(words)


def toy_corpus(n=64, seed=0, prefix="toy"):
    """``n`` balanced examples (alternating labels) as :class:`ExamplePair` records."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        label = i % 2
        topic = int(rng.integers(N_TOPICS))
        body_topic = topic
        if label:
            body_topic = int(rng.choice([t for t in range(N_TOPICS) if t != topic]))
        headline = _sentence(rng, topic, int(rng.integers(2, 4)), int(rng.integers(1, 3)))
        lead = _sentence(rng, body_topic, int(rng.integers(2, 4)), int(rng.integers(1, 3)))
        other = int(rng.integers(N_TOPICS))
        rest = _sentence(rng, other, 3, 2)
        out.append(ExamplePair(f"{prefix}{i}", headline, f"{lead}. {rest}.", label))
    return out
