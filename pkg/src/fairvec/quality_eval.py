"""Embedding quality benchmarks: word similarity and sentence similarity.

Word pairs are scored by cosine and ranked against human judgements
(Spearman). Sentence pairs are scored by the cosine of averaged word
vectors (Pearson, reported x100).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .embedding_store import EmbeddingSet
from .errors import InputError, ParseError
from .matrix_core import cosine_similarity, pearson, spearman


@dataclass(frozen=True)
class WordPairDataset:
    name: str
    entries: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise InputError(f"word-pair dataset {self.name!r} is empty")
        if not all(np.isfinite(score) for _, _, score in self.entries):
            raise InputError(f"word-pair dataset {self.name!r} has non-finite scores")


@dataclass(frozen=True)
class SentencePairDataset:
    name: str
    entries: tuple[tuple[tuple[str, ...], tuple[str, ...], float], ...]
    lowercased: bool = True  # loader normalization, recorded for provenance

    def __post_init__(self):
        if not self.entries:
            raise InputError(f"sentence-pair dataset {self.name!r} is empty")
        for s1, s2, score in self.entries:
            if not s1 or not s2:
                raise InputError(f"sentence-pair dataset {self.name!r} has an empty sentence")
            if not np.isfinite(score):
                raise InputError(f"sentence-pair dataset {self.name!r} has non-finite scores")


def word_similarity_eval(
    embeddings: EmbeddingSet, data: WordPairDataset
) -> tuple[float, int, int]:
    """Spearman correlation of pair cosines against human scores.

    Pairs with an out-of-vocabulary word are skipped and counted. Returns
    (spearman, used, skipped).
    """
    human = []
    model = []
    skipped = 0
    for w1, w2, score in data.entries:
        if w1 not in embeddings or w2 not in embeddings:
            skipped += 1
            continue
        human.append(score)
        model.append(cosine_similarity(embeddings.vector(w1), embeddings.vector(w2)))
    if len(human) < 2:
        raise InputError(f"dataset {data.name!r}: fewer than 2 usable pairs")
    return spearman(human, model), len(human), skipped


def sentence_embedding(embeddings: EmbeddingSet, sentence: Sequence[str]) -> np.ndarray:
    """Mean of the in-vocabulary token vectors; zero vector if none are known.

    Rows are summed in sorted index order (with multiplicity), so the result
    is bitwise identical under token reordering.
    """
    rows = sorted(embeddings.index(w) for w in sentence if w in embeddings)
    if not rows:
        return np.zeros(embeddings.dim)
    return embeddings.vectors[rows].mean(axis=0)


def sts_eval(embeddings: EmbeddingSet, data: SentencePairDataset) -> tuple[float, int, int]:
    """Pearson correlation (x100) of sentence-cosine scores against human scores.

    A pair is skipped only when both sentences embed to the zero vector;
    a single zero side scores cosine 0 and stays in. Returns
    (pearson_x100, used, skipped).
    """
    human = []
    model = []
    skipped = 0
    for s1, s2, score in data.entries:
        e1 = sentence_embedding(embeddings, s1)
        e2 = sentence_embedding(embeddings, s2)
        if not e1.any() and not e2.any():
            skipped += 1
            continue
        human.append(score)
        model.append(cosine_similarity(e1, e2))
    if len(human) < 2:
        raise InputError(f"dataset {data.name!r}: fewer than 2 usable pairs")
    return pearson(human, model) * 100.0, len(human), skipped


def yearly_average(results: Sequence[tuple[str, float]]) -> dict[str, float]:
    """Unweighted mean per task group.

    The group key is the task name's segment before the first '/'
    (e.g. "2015/headlines" groups under "2015"); names without a slash
    form their own group.
    """
    if not results:
        raise InputError("no results to average")
    groups: dict[str, list[float]] = {}
    for name, value in results:
        groups.setdefault(name.split("/", 1)[0], []).append(value)
    return {key: float(np.mean(values)) for key, values in groups.items()}


def _data_lines(source: Iterable[str]):
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def load_word_pairs(source: Iterable[str], name: str) -> WordPairDataset:
    """Parse "word1 TAB word2 TAB score" lines; '#' comments are ignored."""
    entries = []
    for lineno, line in _data_lines(source):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}")
        try:
            score = float(fields[2])
        except ValueError:
            raise ParseError(f"line {lineno}: score {fields[2]!r} is not a number") from None
        if not np.isfinite(score):
            raise ParseError(f"line {lineno}: score {fields[2]!r} is not finite")
        entries.append((fields[0], fields[1], score))
    if not entries:
        raise ParseError(f"word-pair file for {name!r} has no data lines")
    return WordPairDataset(name=name, entries=tuple(entries))


def load_sentence_pairs(source: Iterable[str], name: str) -> SentencePairDataset:
    """Parse "sentence1 TAB sentence2 TAB score" lines.

    Sentences are lowercased and whitespace-tokenized here; the dataset
    records that normalization.
    """
    entries = []
    for lineno, line in _data_lines(source):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}")
        tokens1 = tuple(fields[0].lower().split())
        tokens2 = tuple(fields[1].lower().split())
        if not tokens1 or not tokens2:
            raise ParseError(f"line {lineno}: empty sentence")
        try:
            score = float(fields[2])
        except ValueError:
            raise ParseError(f"line {lineno}: score {fields[2]!r} is not a number") from None
        if not np.isfinite(score):
            raise ParseError(f"line {lineno}: score {fields[2]!r} is not finite")
        entries.append((tokens1, tokens2, score))
    if not entries:
        raise ParseError(f"sentence-pair file for {name!r} has no data lines")
    return SentencePairDataset(name=name, entries=tuple(entries), lowercased=True)
