import json

import pytest

from musem.data import ExamplePair
from musem.headlines import (FileBacked, LeadK, MissingHeadlineError, provide, split_sentences,
                             synthetic_for)
from musem.text import tokenize


def test_lead_one():
    assert provide("x", "A b c. D e.", LeadK(1)) == "A b c."


def test_lead_k_clipped():
    assert LeadK(2).provide("x", "Only one sentence here") == "Only one sentence here"


def test_lead_two():
    assert LeadK(2).provide("x", "One! Two? Three.") == "One! Two?"


def test_empty_body():
    with pytest.raises(ValueError, match="empty body"):
        LeadK(1).provide("x", "   ")


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        LeadK(0)


def test_no_split_inside_numbers():
    assert split_sentences("Costs rose 2.5 percent. Then fell.") == [
        "Costs rose 2.5 percent.", "Then fell."]


@pytest.mark.parametrize("body", ["a b c. d e f. g.", "one sentence", "x! y? z."])
def test_lead_k_never_longer(body):
    for k in (1, 2, 5):
        assert len(tokenize(LeadK(k).provide("i", body))) <= len(tokenize(body))


@pytest.fixture
def headline_file(tmp_path):
    path = tmp_path / "h.jsonl"
    path.write_text(json.dumps({"id": "n42", "synthetic_headline": "tax plan stalls"}) + "\n")
    return path


def test_file_backed(headline_file):
    src = FileBacked(headline_file)
    assert src.provide("n42", "whatever") == "tax plan stalls"
    assert src.provide("n42") == src.provide("n42")


def test_file_backed_missing_id(headline_file):
    with pytest.raises(MissingHeadlineError, match="n43"):
        FileBacked(headline_file).provide("n43", "body")


def test_record_headline_takes_precedence(headline_file):
    ex = ExamplePair("n42", "h", "Body one. Body two.", 0, synthetic_headline="own text")
    assert synthetic_for(ex, FileBacked(headline_file)) == "own text"
    plain = ExamplePair("n42", "h", "Body one. Body two.", 0)
    assert synthetic_for(plain, LeadK(1)) == "Body one."
