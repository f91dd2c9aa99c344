"""Gender-bias measurements.

Direction-based diagnostics (projection bias, the definition-pair selection
task) quantify how strongly word vectors align with the he-she axis.
Relation-based diagnostics (clustering, neighbor correlation, profession
neighbors, association permutation tests, gender classification) ask whether
previously biased words are still distinguishable from each other after
debiasing.

Biased-word lists and per-word "original bias" values are always computed on
the untouched embedding and then reused when scoring any debiased variant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .embedding_store import EmbeddingSet, WordPartition, nearest_neighbors
from .errors import InputError, ParseError
from .matrix_core import (
    cosine_similarity,
    kmeans,
    pearson,
    purity,
    train_linear_classifier,
)

DEFAULT_NEIGHBORS = 100
WEAT_EXACT_LIMIT = 100_000
WEAT_SAMPLES = 10_000
SIGNIFICANCE_LEVEL = 0.05


@dataclass(frozen=True)
class BiasedWordLists:
    """Most male- and most female-biased words, by projection on he - she."""

    male_biased: tuple[str, ...]
    female_biased: tuple[str, ...]
    source: str = ""  # tag of the embedding the lists were computed on

    def __post_init__(self):
        if set(self.male_biased) & set(self.female_biased):
            raise InputError("male and female biased lists overlap")

    def all_words(self) -> tuple[str, ...]:
        return self.male_biased + self.female_biased


@dataclass(frozen=True)
class SemBiasInstance:
    """Four (word, word, tag) pairs, exactly one tagged 'definition'."""

    pairs: tuple[tuple[str, str, str], ...]
    subset: bool = False

    def __post_init__(self):
        tags = [tag for _, _, tag in self.pairs]
        if sum(tag == "definition" for tag in tags) != 1:
            raise InputError("an instance needs exactly one definition pair")

    def definition_index(self) -> int:
        return next(i for i, (_, _, tag) in enumerate(self.pairs) if tag == "definition")


@dataclass(frozen=True)
class WeatSpec:
    """Two target word sets and two attribute word sets for one association test."""

    targets_x: tuple[str, ...]
    targets_y: tuple[str, ...]
    attributes_a: tuple[str, ...]
    attributes_b: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.targets_x) != len(self.targets_y):
            raise InputError("target sets must have equal sizes")
        if len(self.targets_x) < 2:
            raise InputError("target sets need at least 2 words each")
        if not self.attributes_a or not self.attributes_b:
            raise InputError("attribute sets must be nonempty")

    def swapped(self) -> "WeatSpec":
        return WeatSpec(
            targets_x=self.targets_y,
            targets_y=self.targets_x,
            attributes_a=self.attributes_a,
            attributes_b=self.attributes_b,
            name=self.name,
        )


@dataclass
class BiasReport:
    """Named metric values plus provenance, as serialized by the CLI."""

    method: str
    metrics: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "metrics": self.metrics,
            "provenance": self.provenance,
            "errors": self.errors,
        }


def gender_direction(embeddings: EmbeddingSet) -> np.ndarray:
    """The vector he - she; raises if either token is missing."""
    return embeddings.vector("he") - embeddings.vector("she")


def bias_by_projection(embeddings: EmbeddingSet, word: str, normalized: bool = False) -> float:
    """Projection of a word vector on the gender direction.

    Raw mode is the plain dot product with he - she; normalized mode is the
    cosine similarity instead.
    """
    direction = gender_direction(embeddings)
    vector = embeddings.vector(word)
    if normalized:
        return cosine_similarity(vector, direction)
    return float(np.dot(vector, direction))


def mean_abs_projection_bias(
    embeddings: EmbeddingSet, lists: BiasedWordLists, normalized: bool = False
) -> float:
    """Mean |projection bias| over both biased lists; missing words are skipped."""
    values = [
        abs(bias_by_projection(embeddings, w, normalized))
        for w in lists.all_words()
        if w in embeddings
    ]
    if not values:
        raise InputError("no listed word is present in the vocabulary")
    return float(np.mean(values))


def select_biased_words(
    embeddings: EmbeddingSet,
    part: WordPartition,
    n_per_gender: int,
    source: str = "",
) -> BiasedWordLists:
    """Pick the n most male- and n most female-biased non-definition words.

    Male side: largest positive raw projections on he - she; female side most
    negative. Ties break toward the lower vocabulary index.
    """
    if n_per_gender < 1:
        raise InputError("n_per_gender must be >= 1")
    direction = gender_direction(embeddings)
    neutral = part.neutral_indices
    proj = embeddings.vectors[neutral] @ direction

    male_mask = proj > 0
    female_mask = proj < 0
    if int(male_mask.sum()) < n_per_gender:
        raise InputError(
            f"only {int(male_mask.sum())} male-biased candidates, need {n_per_gender}"
        )
    if int(female_mask.sum()) < n_per_gender:
        raise InputError(
            f"only {int(female_mask.sum())} female-biased candidates, need {n_per_gender}"
        )

    male_idx = neutral[male_mask]
    male_order = np.lexsort((male_idx, -proj[male_mask]))
    female_idx = neutral[female_mask]
    female_order = np.lexsort((female_idx, proj[female_mask]))
    return BiasedWordLists(
        male_biased=tuple(embeddings.words[i] for i in male_idx[male_order[:n_per_gender]]),
        female_biased=tuple(embeddings.words[i] for i in female_idx[female_order[:n_per_gender]]),
        source=source,
    )


def sembias_eval(
    embeddings: EmbeddingSet, instances: Sequence[SemBiasInstance]
) -> tuple[float, int, int]:
    """Definition-pair selection accuracy.

    For each instance the pair (a, b) whose difference a - b has the highest
    cosine with he - she is predicted; ties take the first maximal pair.
    Instances with out-of-vocabulary tokens are skipped. Returns
    (accuracy, used, skipped).
    """
    direction = gender_direction(embeddings)
    used = 0
    skipped = 0
    correct = 0
    for instance in instances:
        tokens = [w for pair in instance.pairs for w in pair[:2]]
        if any(w not in embeddings for w in tokens):
            skipped += 1
            continue
        sims = [
            cosine_similarity(embeddings.vector(a) - embeddings.vector(b), direction)
            for a, b, _ in instance.pairs
        ]
        prediction = int(np.argmax(sims))
        correct += prediction == instance.definition_index()
        used += 1
    if used == 0:
        raise InputError("no usable instance (all contained out-of-vocabulary tokens)")
    return correct / used, used, skipped


def gbwr_clustering(embeddings: EmbeddingSet, lists: BiasedWordLists, seed: int) -> float:
    """k-means (k=2) the listed words; purity against their list membership."""
    words = lists.all_words()
    points = embeddings.vectors[[embeddings.index(w) for w in words]]
    labels = np.array([1] * len(lists.male_biased) + [0] * len(lists.female_biased))
    assignments = kmeans(points, 2, seed)
    return purity(assignments, labels)


def _pool_indices(embeddings: EmbeddingSet, lists: BiasedWordLists) -> np.ndarray:
    return np.asarray([embeddings.index(w) for w in lists.all_words()], dtype=np.int64)


def bias_by_neighbors(
    embeddings: EmbeddingSet,
    word: str,
    lists: BiasedWordLists,
    k: int = DEFAULT_NEIGHBORS,
) -> float:
    """Fraction of male-biased words among the k nearest pool members.

    The candidate pool is the union of both biased lists, minus the word
    itself; neighbors are ranked by cosine similarity.
    """
    query = embeddings.index(word)
    pool = _pool_indices(embeddings, lists)
    neighbors = nearest_neighbors(embeddings, query, k, pool)
    male = {embeddings.index(w) for w in lists.male_biased}
    return sum(i in male for i in neighbors) / k


def gbwr_correlation(
    embeddings: EmbeddingSet,
    lists: BiasedWordLists,
    original: EmbeddingSet,
    k: int = DEFAULT_NEIGHBORS,
    normalized: bool = False,
) -> float:
    """Pearson correlation between original projection bias and neighbor bias.

    Projection bias comes from the original embedding; neighbor bias from the
    embedding under evaluation.
    """
    words = lists.all_words()
    projections = [bias_by_projection(original, w, normalized) for w in words]
    neighbor_bias = [bias_by_neighbors(embeddings, w, lists, k) for w in words]
    return pearson(projections, neighbor_bias)


def gbwr_profession(
    embeddings: EmbeddingSet,
    professions: Sequence[str],
    lists: BiasedWordLists,
    original: EmbeddingSet,
    k: int = DEFAULT_NEIGHBORS,
    normalized: bool = False,
) -> tuple[float, list[tuple[str, int, float]]]:
    """Male-neighbor counts of profession words vs. their original bias.

    For each in-vocabulary profession, counts male-list words among its k
    nearest neighbors (pool = biased-word union) and correlates the counts
    with the original-embedding projection bias. Returns the Pearson
    coefficient and (word, male_count, original_bias) rows for plotting.
    """
    male = set(lists.male_biased)
    pool = _pool_indices(embeddings, lists)
    points: list[tuple[str, int, float]] = []
    for word in professions:
        if word not in embeddings or word not in original:
            continue
        neighbors = nearest_neighbors(embeddings, embeddings.index(word), k, pool)
        count = sum(embeddings.words[i] in male for i in neighbors)
        points.append((word, count, bias_by_projection(original, word, normalized)))
    if len(points) < 2:
        raise InputError("fewer than 2 professions are present in the vocabulary")
    correlation = pearson([p[2] for p in points], [p[1] for p in points])
    return correlation, points


def weat_test(
    embeddings: EmbeddingSet,
    spec: WeatSpec,
    seed: int,
    exact_limit: int = WEAT_EXACT_LIMIT,
) -> tuple[float, float]:
    """Differential-association permutation test.

    Per-word association s(w) is the mean cosine with attribute set A minus
    the mean with set B; the statistic sums s over targets X minus targets Y.
    The one-sided p-value is the fraction of equal-size re-partitions of
    X union Y whose statistic is >= the observed one: exact enumeration when
    the partition count fits exact_limit, otherwise seeded sampling with the
    observed partition included, so p is always in (0, 1].
    """
    for word in itertools.chain(
        spec.targets_x, spec.targets_y, spec.attributes_a, spec.attributes_b
    ):
        if word not in embeddings:
            raise InputError(f"token {word!r} not in vocabulary")

    a_vecs = [embeddings.vector(w) for w in spec.attributes_a]
    b_vecs = [embeddings.vector(w) for w in spec.attributes_b]

    def association(word: str) -> float:
        v = embeddings.vector(word)
        mean_a = np.mean([cosine_similarity(v, a) for a in a_vecs])
        mean_b = np.mean([cosine_similarity(v, b) for b in b_vecs])
        return float(mean_a - mean_b)

    s = np.array([association(w) for w in spec.targets_x + spec.targets_y])
    nx = len(spec.targets_x)
    total = 2 * nx
    statistic = float(np.sum(s[:nx]) - np.sum(s[nx:]))

    def subset_statistic(idx: np.ndarray) -> float:
        comp = np.setdiff1d(np.arange(total), idx, assume_unique=True)
        return float(np.sum(s[idx]) - np.sum(s[comp]))

    n_partitions = comb(total, nx)
    if n_partitions <= exact_limit:
        count = 0
        for combo in itertools.combinations(range(total), nx):
            if subset_statistic(np.asarray(combo)) >= statistic:
                count += 1
        p_value = count / n_partitions
    else:
        rng = np.random.default_rng(seed)
        count = 1  # the observed partition itself
        for _ in range(WEAT_SAMPLES):
            perm = rng.permutation(total)
            if subset_statistic(np.sort(perm[:nx])) >= statistic:
                count += 1
        p_value = count / (WEAT_SAMPLES + 1)
    return statistic, p_value


def gbwr_classification(
    embeddings: EmbeddingSet,
    part: WordPartition,
    original: EmbeddingSet,
    seed: int,
    n_per_gender: int = 2500,
    train_per_gender: int = 500,
) -> float:
    """Accuracy of a linear classifier separating previously biased words.

    The top n_per_gender biased words per gender are selected on the original
    embedding; the train_per_gender most biased of each side form the training
    split and the rest the test split. Vectors come from the embedding under
    evaluation.
    """
    if not 1 <= train_per_gender < n_per_gender:
        raise InputError("need 1 <= train_per_gender < n_per_gender")
    lists = select_biased_words(original, part, n_per_gender)

    def vectors(words: Iterable[str]) -> np.ndarray:
        return embeddings.vectors[[embeddings.index(w) for w in words]]

    train_words = lists.male_biased[:train_per_gender] + lists.female_biased[:train_per_gender]
    test_words = lists.male_biased[train_per_gender:] + lists.female_biased[train_per_gender:]
    train_labels = np.array([1] * train_per_gender + [0] * train_per_gender)
    test_labels = np.array(
        [1] * (n_per_gender - train_per_gender) + [0] * (n_per_gender - train_per_gender)
    )
    model = train_linear_classifier(vectors(train_words), train_labels, seed)
    predictions = model.predict(vectors(test_words))
    return float(np.mean(predictions == test_labels))


def load_sembias(source: Iterable[str]) -> list[SemBiasInstance]:
    """Parse the definition-pair selection dataset.

    Each line holds four tab-separated fields "wordA wordB tag" with tag in
    {definition, biased, other}; an optional fifth field "subset" marks the
    instance as part of the held-out subset. '#' lines are ignored.
    """
    instances = []
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        subset = False
        if len(fields) == 5:
            if fields[4].strip() != "subset":
                raise ParseError(f"line {lineno}: unknown marker {fields[4]!r}")
            subset = True
            fields = fields[:4]
        if len(fields) != 4:
            raise ParseError(f"line {lineno}: expected 4 tab-separated pairs, got {len(fields)}")
        pairs = []
        for item in fields:
            parts = item.split()
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: field {item!r} is not 'wordA wordB tag'")
            a, b, tag = parts
            if tag not in ("definition", "biased", "other"):
                raise ParseError(f"line {lineno}: unknown tag {tag!r}")
            pairs.append((a, b, tag))
        try:
            instances.append(SemBiasInstance(pairs=tuple(pairs), subset=subset))
        except InputError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return instances


_WEAT_SECTIONS = ("targets_x", "targets_y", "attributes_a", "attributes_b")


def load_weat_spec(source: Iterable[str], name: str = "") -> WeatSpec:
    """Parse a WEAT spec file: [section] headers with one token per line."""
    sections: dict[str, list[str]] = {key: [] for key in _WEAT_SECTIONS}
    current: str | None = None
    for lineno, line in enumerate(source, start=1):
        token = line.strip()
        if not token or token.startswith("#"):
            continue
        if token.startswith("name:"):
            name = token[len("name:"):].strip()
            continue
        if token.startswith("[") and token.endswith("]"):
            section = token[1:-1].strip()
            if section not in sections:
                raise ParseError(f"line {lineno}: unknown section {section!r}")
            current = section
            continue
        if current is None:
            raise ParseError(f"line {lineno}: token before any [section] header")
        sections[current].append(token)
    return WeatSpec(
        targets_x=tuple(sections["targets_x"]),
        targets_y=tuple(sections["targets_y"]),
        attributes_a=tuple(sections["attributes_a"]),
        attributes_b=tuple(sections["attributes_b"]),
        name=name,
    )
