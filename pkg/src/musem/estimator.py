"""scikit-learn compatible wrapper around the matcher."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import attention, encoder
from ._validation import check_class_weight, check_embeddings, check_pairs, check_source
from .config import TrainConfig
from .headlines import source_from_dict
from .model import prepare_pairs
from .training import accuracy, load_checkpoint, predict, save_checkpoint, train


class MuSeMClassifier(ClassifierMixin, TransformerMixin, BaseEstimator):
    """Congruent (0) / incongruent (1) headline classifier.

    ``X`` is a sequence of examples (see :func:`musem._validation.check_pairs`).
    The synthetic headline of each example is its own ``synthetic_headline``
    when present, otherwise whatever ``headline_source`` provides from the
    body.  ``transform`` returns the ``[M_A, M_E]`` representation fed to the
    classifier head.

    Parameters mirror :class:`~musem.config.TrainConfig`; the embedding
    dimension comes from ``embeddings``.
    """

    def __init__(self, embeddings=None, headline_source=None, variant="diff", pooling="avg",
                 learning_rate=0.001, batch_size=100, hidden=100, joint_dim=100, dropout=0.2,
                 max_len=50, epochs=10, seed=0, class_weight="balanced", val_fraction=0.1,
                 order="original_first", use_best=False):
        self.embeddings = embeddings
        self.headline_source = headline_source
        self.variant = variant
        self.pooling = pooling
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.hidden = hidden
        self.joint_dim = joint_dim
        self.dropout = dropout
        self.max_len = max_len
        self.epochs = epochs
        self.seed = seed
        self.class_weight = class_weight
        self.val_fraction = val_fraction
        self.order = order
        self.use_best = use_best

    def _make_config(self, table):
        return TrainConfig(
            learning_rate=self.learning_rate, batch_size=self.batch_size, hidden=self.hidden,
            d=table.dim, dropout=self.dropout, max_len=self.max_len, epochs=self.epochs,
            seed=self.seed, variant=self.variant, pooling=self.pooling,
            joint_dim=self.joint_dim, order=self.order,
            class_weights=check_class_weight(self.class_weight), val_fraction=self.val_fraction,
        )

    def _encode(self, X, y=None, require_labels=False):
        examples = check_pairs(X, y, require_labels)
        return prepare_pairs(examples, self.table_, self.source_, self.config_.max_len)

    def fit(self, X, y=None, validation=None):
        """Train from scratch.  ``validation`` is an optional ``(X_val, y_val)`` pair."""
        self.table_ = check_embeddings(self.embeddings)
        self.source_ = check_source(self.headline_source)
        self.config_ = self._make_config(self.table_)
        pairs = self._encode(X, y, require_labels=True)
        val = None
        if validation is not None:
            Xv, yv = validation if isinstance(validation, tuple) else (validation, None)
            val = self._encode(Xv, yv, require_labels=True)
        result = train(pairs, self.config_, val_pairs=val)
        self.params_ = result.params
        self.best_params_ = result.best_params
        self.best_epoch_ = result.best_epoch
        self.class_weights_ = result.class_weights
        self.log_ = result.log
        self.classes_ = np.array([0, 1])
        return self

    @property
    def model_params_(self):
        check_is_fitted(self, "params_")
        return self.best_params_ if self.use_best else self.params_

    def predict_proba(self, X):
        check_is_fitted(self, "params_")
        probs, _ = predict(self.model_params_, self._encode(X), self.config_)
        return probs

    def predict(self, X):
        check_is_fitted(self, "params_")
        _, preds = predict(self.model_params_, self._encode(X), self.config_)
        return preds

    def transform(self, X):
        check_is_fitted(self, "params_")
        params = self.model_params_
        theta, bias = params.theta()
        rows = []
        for p in self._encode(X):
            att, _ = attention.attend(p.original, p.original_mask, p.synthetic, p.synthetic_mask,
                                      theta, bias, params.variant, self.config_.pooling)
            M_E, _ = encoder.encode(p.original, p.original_mask, p.synthetic, p.synthetic_mask,
                                    params.lstm(), self.config_.order)
            rows.append(np.concatenate([att.M_A, M_E]))
        return np.array(rows)

    def attend(self, X):
        """Attention results (score matrix and weights) per example."""
        check_is_fitted(self, "params_")
        params = self.model_params_
        theta, bias = params.theta()
        return [
            attention.attend(p.original, p.original_mask, p.synthetic, p.synthetic_mask,
                             theta, bias, params.variant, self.config_.pooling)[0]
            for p in self._encode(X)
        ]

    def training_accuracy(self, X, y=None):
        check_is_fitted(self, "params_")
        return accuracy(self.model_params_, self._encode(X, y, require_labels=True), self.config_)

    def save(self, path):
        check_is_fitted(self, "params_")
        save_checkpoint(self.model_params_, path, self.config_, epoch=self.config_.epochs,
                        extra={"provider": self.source_.to_dict(),
                               "class_weights": list(self.class_weights_)})

    @classmethod
    def load(cls, path, embeddings):
        table = check_embeddings(embeddings)
        params, header = load_checkpoint(path)
        config = header["config"]
        if config.d != table.dim:
            raise ValueError(f"checkpoint expects d={config.d}, embeddings have d={table.dim}")
        est = cls(embeddings=table, variant=config.variant, pooling=config.pooling,
                  learning_rate=config.learning_rate, batch_size=config.batch_size,
                  hidden=config.hidden, joint_dim=config.joint_dim, dropout=config.dropout,
                  max_len=config.max_len, epochs=config.epochs, seed=config.seed,
                  order=config.order, val_fraction=config.val_fraction)
        est.headline_source = header.get("provider")
        est.table_ = table
        est.source_ = source_from_dict(header["provider"]) if header.get("provider") else check_source(None)
        est.config_ = config
        est.params_ = est.best_params_ = params
        est.class_weights_ = tuple(header.get("class_weights", (1.0, 1.0)))
        est.classes_ = np.array([0, 1])
        return est
