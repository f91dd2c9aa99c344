"""Word-similarity and sentence-similarity benchmarks."""

from __future__ import annotations

import io

import numpy as np
import pytest

import oracles
from fairvec import (
    EmbeddingSet,
    InputError,
    ParseError,
    SentencePairDataset,
    UndefinedCorrelationError,
    WordPairDataset,
    cosine_similarity,
    load_sentence_pairs,
    load_word_pairs,
    sentence_embedding,
    sts_eval,
    word_similarity_eval,
    yearly_average,
)


@pytest.fixture
def vocab10():
    rng = np.random.default_rng(60)
    return EmbeddingSet(
        words=tuple(f"w{i}" for i in range(10)),
        vectors=rng.normal(size=(10, 6)),
    )


def pair_dataset(embeddings, pairs, scores, name="toy"):
    entries = tuple((a, b, float(s)) for (a, b), s in zip(pairs, scores))
    return WordPairDataset(name=name, entries=entries)


class TestWordSimilarity:
    def test_scores_equal_cosines(self, vocab10):
        pairs = [("w0", "w1"), ("w2", "w3"), ("w4", "w5"), ("w6", "w7")]
        cosines = [
            cosine_similarity(vocab10.vector(a), vocab10.vector(b)) for a, b in pairs
        ]
        data = pair_dataset(vocab10, pairs, cosines)
        rho, used, skipped = word_similarity_eval(vocab10, data)
        assert rho == pytest.approx(1.0)
        assert (used, skipped) == (4, 0)

    def test_scores_reversed(self, vocab10):
        pairs = [("w0", "w1"), ("w2", "w3"), ("w4", "w5"), ("w6", "w7")]
        cosines = [
            cosine_similarity(vocab10.vector(a), vocab10.vector(b)) for a, b in pairs
        ]
        data = pair_dataset(vocab10, pairs, [-c for c in cosines])
        rho, _, _ = word_similarity_eval(vocab10, data)
        assert rho == pytest.approx(-1.0)

    def test_oov_pairs_skipped(self, vocab10):
        data = WordPairDataset(
            name="toy",
            entries=(("w0", "w1", 1.0), ("w2", "ghost", 2.0), ("w3", "w4", 3.0)),
        )
        _, used, skipped = word_similarity_eval(vocab10, data)
        assert (used, skipped) == (2, 1)

    def test_too_few_usable(self, vocab10):
        data = WordPairDataset(name="toy", entries=(("w0", "w1", 1.0), ("x", "y", 2.0)))
        with pytest.raises(InputError):
            word_similarity_eval(vocab10, data)

    def test_uniform_scaling_invariance(self, vocab10):
        pairs = [("w0", "w1"), ("w2", "w3"), ("w4", "w5")]
        data = pair_dataset(vocab10, pairs, [3.0, 1.0, 2.0])
        scaled = EmbeddingSet(words=vocab10.words, vectors=vocab10.vectors * 7.5)
        assert word_similarity_eval(vocab10, data) == word_similarity_eval(scaled, data)

    def test_monotone_transform_of_human_scores(self, vocab10):
        pairs = [("w0", "w1"), ("w2", "w3"), ("w4", "w5")]
        base = pair_dataset(vocab10, pairs, [3.0, 1.0, 2.0])
        mapped = pair_dataset(vocab10, pairs, [np.exp(3.0), np.exp(1.0), np.exp(2.0)])
        assert word_similarity_eval(vocab10, base) == word_similarity_eval(vocab10, mapped)


class TestSentenceEmbedding:
    def test_single_word(self, vocab10):
        assert np.array_equal(
            sentence_embedding(vocab10, ["w3"]), vocab10.vector("w3")
        )

    def test_two_word_mean(self, vocab10):
        expected = (vocab10.vector("w0") + vocab10.vector("w1")) / 2.0
        assert np.allclose(sentence_embedding(vocab10, ["w0", "w1"]), expected, atol=1e-15)

    def test_all_oov_is_zero(self, vocab10):
        result = sentence_embedding(vocab10, ["ghost", "phantom"])
        assert np.array_equal(result, np.zeros(6))
        assert cosine_similarity(result, vocab10.vector("w0")) == 0.0

    def test_permutation_invariance_bitwise(self, vocab10):
        sentence = ["w3", "w1", "w7", "w1", "ghost"]
        reordered = ["w1", "ghost", "w7", "w3", "w1"]
        assert np.array_equal(
            sentence_embedding(vocab10, sentence),
            sentence_embedding(vocab10, reordered),
        )

    def test_oov_tokens_ignored_in_mean(self, vocab10):
        with_oov = sentence_embedding(vocab10, ["w0", "ghost", "w1"])
        without = sentence_embedding(vocab10, ["w0", "w1"])
        assert np.array_equal(with_oov, without)


class TestStsEval:
    def sentences(self, vocab10, n=4):
        rng = np.random.default_rng(61)
        pairs = []
        for _ in range(n):
            s1 = tuple(f"w{i}" for i in rng.choice(10, size=3, replace=False))
            s2 = tuple(f"w{i}" for i in rng.choice(10, size=3, replace=False))
            pairs.append((s1, s2))
        return pairs

    def test_affine_scores_give_100(self, vocab10):
        pairs = self.sentences(vocab10)
        cosines = [
            cosine_similarity(
                sentence_embedding(vocab10, s1), sentence_embedding(vocab10, s2)
            )
            for s1, s2 in pairs
        ]
        entries = tuple(
            (s1, s2, 2.0 * c + 1.0) for (s1, s2), c in zip(pairs, cosines)
        )
        data = SentencePairDataset(name="toy", entries=entries)
        value, used, skipped = sts_eval(vocab10, data)
        assert value == pytest.approx(100.0, abs=1e-9)
        assert (used, skipped) == (4, 0)

    def test_three_pair_hand_computed(self, vocab10):
        pairs = self.sentences(vocab10, n=3)
        human = [4.0, 1.5, 3.0]
        entries = tuple((s1, s2, h) for (s1, s2), h in zip(pairs, human))
        data = SentencePairDataset(name="toy", entries=entries)
        value, _, _ = sts_eval(vocab10, data)
        cosines = [
            cosine_similarity(
                sentence_embedding(vocab10, s1), sentence_embedding(vocab10, s2)
            )
            for s1, s2 in pairs
        ]
        assert value == pytest.approx(100.0 * oracles.pearson_oracle(human, cosines), abs=1e-9)

    def test_both_zero_pairs_skipped(self, vocab10):
        entries = (
            (("w0", "w1"), ("w2",), 3.0),
            (("ghost",), ("phantom",), 2.0),  # both sides fully OOV
            (("w3",), ("w4",), 1.0),
            (("w5", "w6"), ("w7",), 4.0),
        )
        data = SentencePairDataset(name="toy", entries=entries)
        _, used, skipped = sts_eval(vocab10, data)
        assert (used, skipped) == (3, 1)

    def test_single_zero_side_kept(self, vocab10):
        entries = (
            (("w0",), ("ghost",), 3.0),  # one zero side scores cosine 0
            (("w1",), ("w2",), 1.0),
            (("w3",), ("w4",), 2.0),
        )
        data = SentencePairDataset(name="toy", entries=entries)
        _, used, skipped = sts_eval(vocab10, data)
        assert (used, skipped) == (3, 0)

    def test_constant_model_scores(self, vocab10):
        entries = (
            (("w0",), ("ghost",), 3.0),
            (("w1",), ("phantom",), 1.0),
        )
        data = SentencePairDataset(name="toy", entries=entries)
        with pytest.raises(UndefinedCorrelationError):
            sts_eval(vocab10, data)

    def test_too_few_usable(self, vocab10):
        entries = (
            (("ghost",), ("phantom",), 3.0),
            (("w1",), ("w2",), 1.0),
        )
        data = SentencePairDataset(name="toy", entries=entries)
        with pytest.raises(InputError):
            sts_eval(vocab10, data)


class TestYearlyAverage:
    def test_single_task(self):
        assert yearly_average([("2013/task", 55.0)]) == {"2013": 55.0}

    def test_two_task_mean(self):
        result = yearly_average([("2014/a", 40.0), ("2014/b", 60.0)])
        assert result == {"2014": 50.0}

    def test_hand_grouped_fixture(self):
        results = [
            ("2014/a", 40.0),
            ("2014/b", 60.0),
            ("2015/a", 10.0),
            ("2015/b", 20.0),
            ("2015/c", 60.0),
        ]
        assert yearly_average(results) == {"2014": 50.0, "2015": 30.0}

    def test_name_without_slash_is_own_group(self):
        assert yearly_average([("sick", 70.0)]) == {"sick": 70.0}

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            yearly_average([])


class TestLoaders:
    def test_word_pairs(self):
        text = "# header\nking\tqueen\t8.5\ncat\tdog\t6.0\n"
        data = load_word_pairs(io.StringIO(text), "toy")
        assert data.name == "toy"
        assert data.entries == (("king", "queen", 8.5), ("cat", "dog", 6.0))

    def test_word_pairs_bad_score(self):
        with pytest.raises(ParseError, match="line 1"):
            load_word_pairs(io.StringIO("a\tb\thigh\n"), "toy")

    def test_word_pairs_bad_field_count(self):
        with pytest.raises(ParseError, match="line 2"):
            load_word_pairs(io.StringIO("a\tb\t1.0\na b 1.0\n"), "toy")

    def test_word_pairs_empty(self):
        with pytest.raises(ParseError, match="no data"):
            load_word_pairs(io.StringIO("# only comments\n"), "toy")

    def test_sentence_pairs_lowercased_and_tokenized(self):
        text = "The Big Cat\ta big dog\t3.5\n"
        data = load_sentence_pairs(io.StringIO(text), "sts")
        assert data.lowercased is True
        assert data.entries[0][0] == ("the", "big", "cat")
        assert data.entries[0][1] == ("a", "big", "dog")

    def test_sentence_pairs_empty_sentence(self):
        with pytest.raises(ParseError, match="line 1"):
            load_sentence_pairs(io.StringIO("  \tdog barks\t1.0\n"), "sts")

    def test_sentence_pairs_bad_score(self):
        with pytest.raises(ParseError, match="line 1"):
            load_sentence_pairs(io.StringIO("a b\tc d\tmaybe\n"), "sts")

    def test_dataset_validation(self):
        with pytest.raises(InputError):
            WordPairDataset(name="x", entries=())
        with pytest.raises(InputError):
            WordPairDataset(name="x", entries=(("a", "b", float("nan")),))
        with pytest.raises(InputError):
            SentencePairDataset(name="x", entries=((("a",), (), 1.0),))
