"""Tokenization, GloVe loading and padded embedding sequences."""

import json
import re
from dataclasses import dataclass

import numpy as np

PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"
PAD_ID = 0
UNK_ID = 1
DEFAULT_MAX_LEN = 50

# words (with internal apostrophes) or single punctuation characters
_TOKEN_RE = re.compile(r"\w+(?:['’]\w+)*|[^\w\s]")


class GloveFormatError(ValueError):
    pass


def tokenize(text):
    """Lowercase ``text`` and split it into word and punctuation tokens.

    >>> tokenize("Trump says GOP!")
    ['trump', 'says', 'gop', '!']
    """
    return _TOKEN_RE.findall(text.lower())


class EmbeddingTable:
    """Frozen token -> vector lookup.

    Row 0 is the padding vector and row 1 the unknown-token vector; both are
    zeros.  Vocabulary rows start at 2.
    """

    def __init__(self, tokens, vectors):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ValueError("need one vector row per token")
        self.dim = vectors.shape[1]
        self.vectors = np.vstack([np.zeros((2, self.dim)), vectors])
        self.vectors.setflags(write=False)
        self.vocab = {}
        for i, tok in enumerate(tokens):
            self.vocab.setdefault(tok, i + 2)

    def __len__(self):
        return len(self.vocab)

    def __contains__(self, token):
        return token in self.vocab

    @property
    def unk_vector(self):
        return self.vectors[UNK_ID]

    @property
    def pad_vector(self):
        return self.vectors[PAD_ID]

    def index(self, token):
        return self.vocab.get(token, UNK_ID)

    def lookup(self, token):
        return self.vectors[self.index(token)]

    def save_vocab(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.vocab, fh, ensure_ascii=False, sort_keys=True, indent=0)


def load_vocab(path):
    """Read a token -> row sidecar written by :meth:`EmbeddingTable.save_vocab`."""
    with open(path, encoding="utf-8") as fh:
        return {str(k): int(v) for k, v in json.load(fh).items()}


def load_glove(path, restrict_to=None):
    """Parse a GloVe text file.

    The dimension comes from the first line; any later line with a
    different number of floats raises :class:`GloveFormatError` naming the
    line.  ``restrict_to`` optionally limits which tokens are kept (all lines
    are still validated).
    """
    tokens, rows = [], []
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if dim is None:
                dim = len(parts) - 1
                if dim < 1:
                    raise GloveFormatError(f"{path}:{lineno}: no vector values")
            if len(parts) - 1 != dim:
                raise GloveFormatError(
                    f"{path}:{lineno}: expected {dim} values, found {len(parts) - 1}"
                )
            if restrict_to is not None and parts[0] not in restrict_to:
                continue
            try:
                rows.append([float(x) for x in parts[1:]])
            except ValueError as exc:
                raise GloveFormatError(f"{path}:{lineno}: {exc}") from None
            tokens.append(parts[0])
    if dim is None:
        raise GloveFormatError(f"{path}: empty embedding file")
    return EmbeddingTable(tokens, np.array(rows, dtype=np.float64).reshape(-1, dim))


@dataclass
class TokenSequence:
    tokens: list
    ids: np.ndarray
    mask: np.ndarray
    declared_length: int

    @property
    def real_tokens(self):
        return self.tokens[: self.declared_length]


def to_sequence(tokens, table, max_len=DEFAULT_MAX_LEN):
    """Pad or truncate ``tokens`` to ``max_len``; over-long input keeps its front."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    kept = list(tokens[:max_len])
    n = len(kept)
    ids = np.full(max_len, PAD_ID, dtype=np.int64)
    ids[:n] = [table.index(t) for t in kept]
    mask = np.zeros(max_len, dtype=bool)
    mask[:n] = True
    return TokenSequence(kept + [PAD_TOKEN] * (max_len - n), ids, mask, n)


def embed_sequence(seq, table):
    """Return the (max_len, d) embedding matrix and the mask of ``seq``."""
    return table.vectors[seq.ids], seq.mask.copy()
