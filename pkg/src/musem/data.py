"""Dataset readers producing validated :class:`ExamplePair` records.

Canonical format, one JSON object per line::

    {"id": "n1", "headline": "...", "body": "...", "label": 0,
     "synthetic_headline": "..."}          # last field optional

``label`` is 0/1 or "congruent"/"incongruent" (any case).
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass

logger = logging.getLogger(__name__)

LABEL_NAMES = {"congruent": 0, "incongruent": 1}
CLICKBAIT_LABELS = {"clickbait": 1, "no-clickbait": 0}


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class ExamplePair:
    id: str
    headline: str
    body: str
    label: int = None
    synthetic_headline: str = None

    def __post_init__(self):
        if not isinstance(self.headline, str) or not self.headline.strip():
            raise ValueError(f"example {self.id!r}: empty headline")
        if not isinstance(self.body, str) or not self.body.strip():
            raise ValueError(f"example {self.id!r}: empty body")
        if self.label is not None and self.label not in (0, 1):
            raise ValueError(f"example {self.id!r}: label must be 0 or 1")
        if self.synthetic_headline is not None and not (
            isinstance(self.synthetic_headline, str) and self.synthetic_headline.strip()
        ):
            raise ValueError(f"example {self.id!r}: empty synthetic_headline")

    def to_dict(self):
        out = {"id": self.id, "headline": self.headline, "body": self.body, "label": self.label}
        if self.synthetic_headline is not None:
            out["synthetic_headline"] = self.synthetic_headline
        return out


def parse_label(value):
    if isinstance(value, bool):
        raise ValueError(f"unknown label {value!r}")
    if isinstance(value, int) and value in (0, 1):
        return value
    if isinstance(value, str):
        key = value.strip().lower()
        if key in LABEL_NAMES:
            return LABEL_NAMES[key]
        if key in ("0", "1"):
            return int(key)
    raise ValueError(f"unknown label {value!r}")


def _read_jsonl(path):
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise IngestError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, rec


def ingest_canonical(path, require_label=True):
    examples = []
    for lineno, rec in _read_jsonl(path):
        fields = ("id", "headline", "body", "label") if require_label else ("id", "headline", "body")
        missing = [f for f in fields if f not in rec]
        if missing:
            raise IngestError(f"{path}:{lineno}: missing field(s) {', '.join(missing)}")
        if rec["id"] is None or str(rec["id"]) == "":
            raise IngestError(f"{path}:{lineno}: empty id")
        if require_label and rec["label"] is None:
            raise IngestError(f"{path}:{lineno}: label is null")
        try:
            label = parse_label(rec["label"]) if rec.get("label") is not None else None
            examples.append(ExamplePair(
                id=str(rec["id"]),
                headline=rec["headline"],
                body=rec["body"],
                label=label,
                synthetic_headline=rec.get("synthetic_headline"),
            ))
        except ValueError as exc:
            raise IngestError(f"{path}:{lineno}: {exc}") from None
    if not examples:
        raise IngestError(f"{path}: empty dataset")
    return examples


def _join_text(value):
    if isinstance(value, list):
        return " ".join(str(v).strip() for v in value if str(v).strip())
    return str(value or "").strip()


def ingest_clickbait_challenge(instances_path, truth_path, stats=None):
    """Join Webis Clickbait Challenge ``instances.jsonl`` and ``truth.jsonl``.

    The post text is the headline and the target paragraphs, joined with
    single spaces, the body.  Instances without a truth record, or with no
    usable text, are dropped; the drop counts go into ``stats`` if given.
    """
    truth = {}
    for lineno, rec in _read_jsonl(truth_path):
        try:
            truth[str(rec["id"])] = CLICKBAIT_LABELS[str(rec["truthClass"]).strip().lower()]
        except KeyError:
            raise IngestError(f"{truth_path}:{lineno}: bad truth record") from None

    counts = Counter()
    examples = []
    for lineno, rec in _read_jsonl(instances_path):
        if "id" not in rec:
            raise IngestError(f"{instances_path}:{lineno}: missing field id")
        key = str(rec["id"])
        if key not in truth:
            counts["missing_truth"] += 1
            continue
        headline = _join_text(rec.get("postText"))
        body = _join_text(rec.get("targetParagraphs"))
        if not headline or not body:
            counts["empty_text"] += 1
            continue
        examples.append(ExamplePair(key, headline, body, truth[key]))

    if counts:
        logger.warning("dropped %d instances without truth, %d without text",
                       counts["missing_truth"], counts["empty_text"])
    if stats is not None:
        stats.update(counts)
    if not examples:
        raise IngestError("no instances joined with a truth record")
    return examples


def dataset_stats(examples):
    counts = Counter(ex.label for ex in examples)
    return {"total": len(examples), "congruent": counts.get(0, 0),
            "incongruent": counts.get(1, 0)}


def ingest_nela17(path):
    """Read a NELA17-derived file (already in canonical form) and log its class balance."""
    examples = ingest_canonical(path)
    s = dataset_stats(examples)
    logger.info("NELA17: %d total, %d congruent, %d incongruent",
                s["total"], s["congruent"], s["incongruent"])
    return examples


def class_weights(labels):
    """Balanced weights ``n_total / (2 * n_c)`` for classes 0 and 1."""
    labels = [getattr(x, "label", x) for x in labels]
    counts = Counter(labels)
    n = len(labels)
    if counts.get(0, 0) == 0 or counts.get(1, 0) == 0:
        raise ValueError("class weights need both classes in the training data")
    return (n / (2 * counts[0]), n / (2 * counts[1]))


def write_canonical(examples, path):
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps(ex.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
