"""Inter-mutual attention semantic matching for incongruent headline detection."""

from .config import TrainConfig
from .data import ExamplePair, ingest_canonical, ingest_clickbait_challenge, ingest_nela17
from .estimator import MuSeMClassifier
from .headlines import FileBacked, LeadK
from .metrics import auc, macro_f1
from .model import ModelParams, init_params
from .text import EmbeddingTable, load_glove, tokenize
from .training import load_checkpoint, save_checkpoint, train

__all__ = [
    "EmbeddingTable",
    "ExamplePair",
    "FileBacked",
    "LeadK",
    "ModelParams",
    "MuSeMClassifier",
    "TrainConfig",
    "auc",
    "ingest_canonical",
    "ingest_clickbait_challenge",
    "ingest_nela17",
    "init_params",
    "load_checkpoint",
    "load_glove",
    "macro_f1",
    "save_checkpoint",
    "tokenize",
    "train",
]

__version__ = "0.1.0"
