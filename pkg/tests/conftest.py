import json

import numpy as np
import pytest

from musem import toy
from musem.data import write_canonical


def write_glove(path, table):
    inv = sorted(table.vocab.items(), key=lambda kv: kv[1])
    with open(path, "w", encoding="utf-8") as fh:
        for tok, row in inv:
            fh.write(tok + " " + " ".join(repr(float(v)) for v in table.vectors[row]) + "\n")
    return path


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")
    return path


@pytest.fixture(scope="session")
def toy_table():
    return toy.toy_embeddings(8, seed=0)


@pytest.fixture(scope="session")
def toy_train():
    return toy.toy_corpus(64, seed=1)


@pytest.fixture(scope="session")
def toy_val():
    return toy.toy_corpus(64, seed=2, prefix="val")


@pytest.fixture
def toy_files(tmp_path, toy_table):
    """GloVe + canonical train/val files for the toy corpus."""
    glove = write_glove(tmp_path / "emb.txt", toy_table)
    train = tmp_path / "train.jsonl"
    val = tmp_path / "val.jsonl"
    write_canonical(toy.toy_corpus(32, seed=1), train)
    write_canonical(toy.toy_corpus(16, seed=2, prefix="val"), val)
    return {"glove": str(glove), "train": str(train), "val": str(val), "dir": tmp_path}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        passed, title, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(
            f"criterion {n:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
