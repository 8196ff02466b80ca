"""Mini-batch training, evaluation and checkpoint persistence."""

import base64
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from . import classifier
from .config import TrainConfig
from .data import class_weights as balanced_weights
from .metrics import MetricUndefinedError, evaluate_predictions, macro_f1
from .model import ModelParams, batch_loss_and_grad, init_params, param_shapes, predict_proba
from .numeric import ParamTensor

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "musem-checkpoint"
CHECKPOINT_VERSION = 1


class TrainingError(RuntimeError):
    pass


class CheckpointError(ValueError):
    pass


class Adam:
    def __init__(self, params, lr=0.001, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = list(params)
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p.value) for p in self.params]
        self.v = [np.zeros_like(p.value) for p in self.params]

    def step(self):
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for p, m, v in zip(self.params, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * p.grad
            v *= self.beta2
            v += (1.0 - self.beta2) * p.grad ** 2
            p.value -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

    def zero_grad(self):
        for p in self.params:
            p.zero_grad()


def split_holdout(labels, fraction, rng):
    """Stratified seeded split; returns (train_idx, val_idx) as sorted arrays."""
    labels = np.asarray(labels)
    val = []
    for c in (0, 1):
        idx = np.flatnonzero(labels == c)
        k = int(round(fraction * idx.size))
        if idx.size >= 2:
            k = min(max(k, 1), idx.size - 1)
        else:
            k = 0
        val.extend(rng.permutation(idx)[:k].tolist())
    val = np.array(sorted(val), dtype=np.int64)
    train = np.setdiff1d(np.arange(labels.size), val)
    return train, val


def predict(params, pairs, config):
    probs = predict_proba(params, pairs, config.pooling, config.order)
    preds = np.array([classifier.predict_label(p) for p in probs], dtype=np.int64)
    return probs, preds


def evaluate(params, pairs, config):
    probs, preds = predict(params, pairs, config)
    labels = [p.label for p in pairs]
    return evaluate_predictions(labels, probs[:, 1], preds)


def accuracy(params, pairs, config):
    _, preds = predict(params, pairs, config)
    return float(np.mean(preds == np.array([p.label for p in pairs])))


@dataclass
class TrainResult:
    params: ModelParams
    best_params: ModelParams
    best_epoch: int
    class_weights: tuple
    log: list = field(default_factory=list)


def _val_metrics(params, pairs, config):
    probs, preds = predict(params, pairs, config)
    labels = [p.label for p in pairs]
    f1 = macro_f1(labels, preds)
    try:
        auc = evaluate_predictions(labels, probs[:, 1], preds).auc
    except MetricUndefinedError:
        auc = None
    return f1, auc


def train(pairs, config, val_pairs=None, checkpoint_path=None, log_path=None, extra_header=None):
    """Train on encoded pairs with Adam on the mean class-weighted loss.

    Without ``val_pairs`` a stratified ``config.val_fraction`` share of
    ``pairs`` is held out.  After each epoch the held-out Macro F1 and AUC
    are logged; the parameters with the best held-out Macro F1 are kept as
    ``best_params``.  ``checkpoint_path`` receives the final parameters and
    ``<stem>.best<suffix>`` the best ones.
    """
    if not pairs:
        raise ValueError("cannot train on an empty dataset")
    config.validate()
    seeds = np.random.SeedSequence(config.seed).spawn(4)
    init_rng, split_rng, shuffle_rng, drop_rng = (np.random.default_rng(s) for s in seeds)

    params = init_params(config, init_rng)
    if val_pairs is None and config.val_fraction > 0:
        tr, va = split_holdout([p.label for p in pairs], config.val_fraction, split_rng)
        train_pairs = [pairs[i] for i in tr]
        val_pairs = [pairs[i] for i in va] or None
    else:
        train_pairs = list(pairs)
    weights = config.class_weights or balanced_weights([p.label for p in train_pairs])

    opt = Adam(params, config.learning_rate, config.beta1, config.beta2, config.epsilon)
    log = []
    best, best_epoch, best_f1 = params.copy(), 0, -1.0
    n = len(train_pairs)
    for epoch in range(1, config.epochs + 1):
        order = shuffle_rng.permutation(n)
        total = 0.0
        for b, start in enumerate(range(0, n, config.batch_size)):
            batch = [train_pairs[i] for i in order[start:start + config.batch_size]]
            opt.zero_grad()
            loss = batch_loss_and_grad(params, batch, weights, config.pooling, config.order,
                                       config.dropout, drop_rng)
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss {loss} in epoch {epoch}, batch {b}")
            opt.step()
            total += loss * len(batch)
        entry = {"epoch": epoch, "train_loss": total / n, "val_macro_f1": None, "val_auc": None}
        if val_pairs:
            entry["val_macro_f1"], entry["val_auc"] = _val_metrics(params, val_pairs, config)
            if entry["val_macro_f1"] > best_f1:
                best, best_epoch, best_f1 = params.copy(), epoch, entry["val_macro_f1"]
        else:
            best, best_epoch = params.copy(), epoch
        log.append(entry)
        logger.info("epoch %d loss %.6f val_f1 %s", epoch, entry["train_loss"], entry["val_macro_f1"])

    result = TrainResult(params, best, best_epoch, tuple(weights), log)
    header = dict(extra_header or {}, class_weights=list(result.class_weights))
    if checkpoint_path is not None:
        save_checkpoint(params, checkpoint_path, config, epoch=config.epochs, extra=header)
        save_checkpoint(best, best_path(checkpoint_path), config, epoch=best_epoch, extra=header)
    if log_path is not None:
        write_log(log, log_path)
    return result


def best_path(path):
    path = str(path)
    stem, dot, suffix = path.rpartition(".")
    if not dot or "/" in suffix:
        return path + ".best"
    return f"{stem}.best.{suffix}"


def write_log(log, path):
    with open(path, "w", encoding="utf-8") as fh:
        for entry in log:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")


def save_checkpoint(params, path, config, epoch=0, extra=None):
    """Write a JSON checkpoint; tensors are stored as base64 little-endian float64."""
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "variant": params.variant,
        "pooling": config.pooling,
        "seed": config.seed,
        "epoch": epoch,
        "config": config.to_dict(),
        "tensors": [
            {
                "name": t.name,
                "shape": list(t.shape),
                "data": base64.b64encode(t.value.astype("<f8").tobytes()).decode("ascii"),
            }
            for t in params
        ],
    }
    doc.update(extra or {})
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_checkpoint(path, config=None):
    """Read a checkpoint; returns ``(params, header)``.

    When ``config`` is given the stored variant and every tensor shape must
    agree with it.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from None
    if doc.get("format") != CHECKPOINT_FORMAT or doc.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: unsupported checkpoint format {doc.get('format')!r} v{doc.get('version')!r}"
        )
    stored = TrainConfig.from_dict(doc["config"])
    config = config or stored
    if doc["variant"] != config.variant:
        raise CheckpointError(
            f"{path}: checkpoint holds a {doc['variant']!r} model, config asks for {config.variant!r}"
        )
    if doc["pooling"] != config.pooling:
        raise CheckpointError(
            f"{path}: checkpoint was trained with {doc['pooling']!r} pooling, config asks for {config.pooling!r}"
        )
    expected = param_shapes(config)
    tensors = []
    for rec in doc["tensors"]:
        name, shape = rec["name"], tuple(rec["shape"])
        if name not in expected:
            raise CheckpointError(f"{path}: unexpected tensor {name}")
        if shape != expected[name]:
            raise CheckpointError(
                f"{path}: tensor {name} has shape {shape}, config expects {expected[name]}"
            )
        raw = np.frombuffer(base64.b64decode(rec["data"]), dtype="<f8")
        if raw.size != int(np.prod(shape)):
            raise CheckpointError(f"{path}: tensor {name} data does not match its shape")
        tensors.append(ParamTensor(name, raw.astype(np.float64).reshape(shape)))
    missing = set(expected) - {t.name for t in tensors}
    if missing:
        raise CheckpointError(f"{path}: missing tensors {sorted(missing)}")
    header = {k: v for k, v in doc.items() if k != "tensors"}
    header["config"] = stored
    return ModelParams(tensors, doc["variant"]), header
