"""Gender debiasing for word embeddings, with bias and quality diagnostics."""

from .bias_metrics import (
    BiasedWordLists,
    BiasReport,
    SemBiasInstance,
    WeatSpec,
    bias_by_neighbors,
    bias_by_projection,
    gbwr_classification,
    gbwr_clustering,
    gbwr_correlation,
    gbwr_profession,
    gender_direction,
    load_sembias,
    load_weat_spec,
    mean_abs_projection_bias,
    select_biased_words,
    sembias_eval,
    weat_test,
)
from .debias import (
    DEFAULT_ALPHA,
    DebiasResult,
    HsrConfig,
    approximate_gender_info,
    hard_debias,
    hsr_debias,
)
from .embedding_store import (
    EmbeddingSet,
    WordPartition,
    load_embeddings,
    load_word_list,
    nearest_neighbors,
    partition,
    save_embeddings,
)
from .errors import (
    ConfigError,
    FairvecError,
    InputError,
    NumericalError,
    ParseError,
    UndefinedCorrelationError,
)
from .matrix_core import (
    LinearClassifier,
    RidgeSolution,
    cosine_similarity,
    kmeans,
    pearson,
    purity,
    solve_ridge,
    spearman,
    train_linear_classifier,
)
from .quality_eval import (
    SentencePairDataset,
    WordPairDataset,
    load_sentence_pairs,
    load_word_pairs,
    sentence_embedding,
    sts_eval,
    word_similarity_eval,
    yearly_average,
)

__version__ = "0.1.0"

__all__ = [
    "BiasReport",
    "BiasedWordLists",
    "ConfigError",
    "DEFAULT_ALPHA",
    "DebiasResult",
    "EmbeddingSet",
    "FairvecError",
    "HsrConfig",
    "InputError",
    "LinearClassifier",
    "NumericalError",
    "ParseError",
    "RidgeSolution",
    "SemBiasInstance",
    "SentencePairDataset",
    "UndefinedCorrelationError",
    "WeatSpec",
    "WordPairDataset",
    "WordPartition",
    "approximate_gender_info",
    "bias_by_neighbors",
    "bias_by_projection",
    "cosine_similarity",
    "gbwr_classification",
    "gbwr_clustering",
    "gbwr_correlation",
    "gbwr_profession",
    "gender_direction",
    "hard_debias",
    "hsr_debias",
    "kmeans",
    "load_embeddings",
    "load_sembias",
    "load_sentence_pairs",
    "load_weat_spec",
    "load_word_list",
    "load_word_pairs",
    "mean_abs_projection_bias",
    "nearest_neighbors",
    "partition",
    "pearson",
    "purity",
    "save_embeddings",
    "select_biased_words",
    "sembias_eval",
    "sentence_embedding",
    "solve_ridge",
    "spearman",
    "sts_eval",
    "train_linear_classifier",
    "weat_test",
    "word_similarity_eval",
    "yearly_average",
]
