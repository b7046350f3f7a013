"""Cross-lingual alignment scoring for decoder-only language models.

Given per-layer embedding dumps of parallel sentences, the package scores
how well each language aligns with a pivot language (English by default):
per layer, the score is the fraction of parallel pairs whose cross-lingual
cosine similarity strictly dominates its row and column of the all-pairs
similarity matrix, i.e. bidirectional sentence-retrieval P@1. Layer-pooled
scores can then be adjusted by English task accuracy, correlated with task
results, and converted into downstream-performance estimates.
"""

from pivotalign.alignment import (
    AlignmentProfile,
    SimilarityMatrix,
    ac_nonparallel,
    ac_parallel,
    cosine,
    language_alignment,
    layer_alignment_score,
    pool_layers,
    similarity_matrix,
)
from pivotalign.dumpio import (
    DumpFormatError,
    DumpManifest,
    EmbeddingDump,
    PairCheck,
    read_dump,
    validate_pair,
    write_dump,
)
from pivotalign.pooling import pool_last_token, pool_tokens, pool_weighted_average
from pivotalign.stats import (
    CorrelationReport,
    LinearFit,
    Prediction,
    adjust_scores,
    fit_line,
    ideal_line,
    pearson,
    predict_performance,
    random_baseline,
)

__version__ = "0.1.0"
