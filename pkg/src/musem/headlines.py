"""Sources for the synthetic headline paired with each original headline.

Neural generators live outside this package; their output is plugged in via
a JSON-lines file.  When no file is available the lead-k extractive baseline
stands in.
"""

import json
import re

_SENTENCE_END = re.compile(r"(?<=[.!?])(?:\s+|$)")


class MissingHeadlineError(KeyError):
    pass


def split_sentences(text):
    return [s for s in (p.strip() for p in _SENTENCE_END.split(text.strip())) if s]


class LeadK:
    kind = "lead_k"

    def __init__(self, k=1):
        if k < 1:
            raise ValueError(f"lead_k needs k >= 1, got {k}")
        self.k = k

    def provide(self, example_id, body):
        sentences = split_sentences(body or "")
        if not sentences:
            raise ValueError(f"empty body for example {example_id!r}")
        return " ".join(sentences[: self.k])

    def to_dict(self):
        return {"kind": self.kind, "k": self.k}

    def __repr__(self):
        return f"LeadK(k={self.k})"


class FileBacked:
    """Synthetic headlines read from ``{"id": ..., "synthetic_headline": ...}`` lines."""

    kind = "file_backed"

    def __init__(self, path):
        self.path = str(path)
        self._headlines = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    key, text = str(rec["id"]), rec["synthetic_headline"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise ValueError(f"{path}:{lineno}: bad headline record ({exc})") from None
                if not isinstance(text, str) or not text.strip():
                    raise ValueError(f"{path}:{lineno}: empty synthetic_headline")
                self._headlines[key] = text

    def __len__(self):
        return len(self._headlines)

    def provide(self, example_id, body=None):
        try:
            return self._headlines[str(example_id)]
        except KeyError:
            raise MissingHeadlineError(
                f"no synthetic headline for id {example_id!r} in {self.path}"
            ) from None

    def to_dict(self):
        return {"kind": self.kind, "path": self.path}

    def __repr__(self):
        return f"FileBacked({self.path!r})"


def provide(example_id, body, source):
    return source.provide(example_id, body)


def source_from_dict(record):
    kind = record.get("kind", "lead_k")
    if kind == "lead_k":
        return LeadK(int(record.get("k", 1)))
    if kind == "file_backed":
        return FileBacked(record["path"])
    raise ValueError(f"unknown headline source kind {kind!r}")


def synthetic_for(example, source):
    """A record's own ``synthetic_headline`` wins over the configured source."""
    if example.synthetic_headline:
        return example.synthetic_headline
    return source.provide(example.id, example.body)
