import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from musem.text import (EmbeddingTable, GloveFormatError, embed_sequence, load_glove,
                        load_vocab, to_sequence, tokenize)


@pytest.mark.parametrize("text, expected", [
    ("Trump says GOP!", ["trump", "says", "gop", "!"]),
    ("", []),
    ("   \t", []),
    ("Milk—bad?", ["milk", "—", "bad", "?"]),
    ("\"Quoted,\" she said.", ["\"", "quoted", ",", "\"", "she", "said", "."]),
    ("It's fine", ["it's", "fine"]),
])
def test_tokenize(text, expected):
    assert tokenize(text) == expected


@given(st.text())
def test_tokenize_empty_only_for_blank(text):
    toks = tokenize(text)
    assert all(t == t.lower() and t.strip() == t and t for t in toks)
    if text.strip() and any(c.isalnum() for c in text):
        assert toks


@pytest.fixture
def glove_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("the 0.1 0.2 0.3\ncat -1 0 2.5\n", encoding="utf-8")
    return path


class TestLoadGlove:
    def test_parse(self, glove_file):
        table = load_glove(glove_file)
        assert table.dim == 3
        np.testing.assert_array_equal(table.lookup("the"), [0.1, 0.2, 0.3])
        np.testing.assert_array_equal(table.lookup("cat"), [-1.0, 0.0, 2.5])

    def test_unknown_falls_back_to_zero(self, glove_file):
        table = load_glove(glove_file)
        np.testing.assert_array_equal(table.lookup("zzqq"), np.zeros(3))
        np.testing.assert_array_equal(table.pad_vector, np.zeros(3))

    def test_dimension_error_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("the 0.1 0.2 0.3\ncat 1 2 3 4\n", encoding="utf-8")
        with pytest.raises(GloveFormatError, match=":2:"):
            load_glove(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_glove(tmp_path / "nope.txt")

    def test_restrict(self, glove_file):
        table = load_glove(glove_file, restrict_to={"cat"})
        assert "cat" in table and "the" not in table

    def test_vocab_sidecar_round_trip(self, glove_file, tmp_path):
        table = load_glove(glove_file)
        table.save_vocab(tmp_path / "vocab.json")
        assert load_vocab(tmp_path / "vocab.json") == table.vocab


class TestSequences:
    table = EmbeddingTable(["a", "b"], [[1.0, 2.0], [3.0, 4.0]])

    def test_padding(self):
        seq = to_sequence(["a", "b"], self.table, max_len=4)
        H, mask = embed_sequence(seq, self.table)
        assert H.shape == (4, 2)
        np.testing.assert_array_equal(H[:2], [[1, 2], [3, 4]])
        np.testing.assert_array_equal(H[2:], 0)
        np.testing.assert_array_equal(mask, [True, True, False, False])
        assert seq.declared_length == 2

    def test_all_oov(self):
        seq = to_sequence(["x", "y", "z"], self.table, max_len=5)
        H, mask = embed_sequence(seq, self.table)
        for row in H[mask]:
            np.testing.assert_array_equal(row, self.table.unk_vector)

    def test_truncation_keeps_front(self):
        toks = [f"w{i}" for i in range(60)]
        seq = to_sequence(toks, self.table, max_len=50)
        assert seq.declared_length == 50
        assert seq.real_tokens == toks[:50]

    @given(st.lists(st.sampled_from(["a", "b", "c"]), max_size=30), st.integers(1, 12))
    def test_shape_and_pad_rows(self, toks, max_len):
        seq = to_sequence(toks, self.table, max_len)
        H, mask = embed_sequence(seq, self.table)
        assert H.shape == (max_len, 2)
        assert H[~mask].sum() == 0
        assert mask.sum() == min(len(toks), max_len)
        assert mask[:seq.declared_length].all() and not mask[seq.declared_length:].any()
