"""Cross-lingual similarity matrices and retrieval-style alignment scores.

For one layer, the two sides of a parallel corpus give embedding matrices
``A`` (language) and ``B`` (pivot); ``C[i, j]`` is the cosine similarity of
sentence ``i`` in the language with sentence ``j`` in the pivot. The layer
alignment score is the fraction of diagonal entries that are *strictly*
greater than every other entry in their row and column, i.e. bidirectional
sentence-retrieval P@1. Ties count as failures, so a constant matrix scores
0. Because only order comparisons enter, the score is invariant under any
strictly increasing entrywise transform of ``C`` and under rescaling of the
embeddings; the absolute-cosine baselines below are not, which is exactly
why they are kept as baselines.

All operations are pure on immutable inputs; per-layer and per-language
computations may run concurrently with results identical to sequential
execution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pivotalign import _kernels
from pivotalign.dumpio import EmbeddingDump, validate_pair
from pivotalign.pooling import METHODS, pool_token_matrix

__all__ = [
    "DEGENERATE_NORM",
    "AlignmentProfile",
    "SimilarityMatrix",
    "ac_nonparallel",
    "ac_parallel",
    "cosine",
    "language_alignment",
    "layer_alignment_score",
    "pool_layers",
    "similarity_matrix",
]

# Below this Euclidean norm an embedding is treated as degenerate: its
# cosines are defined as 0 and the row is flagged instead of raising, so one
# bad sentence cannot abort a multi-language sweep.
DEGENERATE_NORM = 1e-12


@dataclass(frozen=True)
class SimilarityMatrix:
    """n x n cosine matrix for one layer of one language pair.

    ``degenerate_rows``/``degenerate_cols`` list input rows whose norm fell
    below :data:`DEGENERATE_NORM` (rows of the first/second input).
    """

    values: np.ndarray
    layer: int = 0
    lang_pair: tuple[str, str] = ("", "")
    degenerate_rows: tuple[int, ...] = ()
    degenerate_cols: tuple[int, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"similarity matrix must be square, got shape {values.shape}")
        if not np.isfinite(values).all():
            raise ValueError("similarity matrix contains non-finite values")
        if values.size and (values.min() < -1.0 - 1e-6 or values.max() > 1.0 + 1e-6):
            raise ValueError("cosine similarities must lie in [-1, 1]")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _as_square(matrix) -> np.ndarray:
    if isinstance(matrix, SimilarityMatrix):
        return matrix.values
    arr = np.ascontiguousarray(matrix, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def cosine(u, v) -> float:
    """Cosine similarity in float64; 0.0 if either vector is degenerate."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu < DEGENERATE_NORM or nv < DEGENERATE_NORM:
        return 0.0
    return float(u @ v / (nu * nv))


def _unit_rows(matrix) -> tuple[np.ndarray, tuple[int, ...]]:
    arr = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(arr, axis=1)
    degenerate = np.flatnonzero(norms < DEGENERATE_NORM)
    safe = np.where(norms < DEGENERATE_NORM, 1.0, norms)
    unit = arr / safe[:, None]
    unit[degenerate] = 0.0
    return unit, tuple(int(i) for i in degenerate)


def similarity_matrix(
    emb_a,
    emb_b,
    layer: int = 0,
    lang_pair: tuple[str, str] = ("", ""),
) -> SimilarityMatrix:
    """All-pairs cosine matrix of two aligned ``(n, dim)`` embedding sets.

    Row ``i`` of each input must embed parallel sentence ``i``. Computation
    is in float64 regardless of input dtype.
    """
    a = np.asarray(emb_a, dtype=np.float64)
    b = np.asarray(emb_b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    unit_a, degenerate_a = _unit_rows(a)
    unit_b, degenerate_b = _unit_rows(b)
    values = np.clip(unit_a @ unit_b.T, -1.0, 1.0)
    return SimilarityMatrix(
        values=values,
        layer=layer,
        lang_pair=lang_pair,
        degenerate_rows=degenerate_a,
        degenerate_cols=degenerate_b,
    )


def layer_alignment_score(matrix) -> float:
    """Fraction of diagonal entries strictly dominant in row and column.

    Always of the form k/n for integer k; a 1x1 matrix scores 1.0 (no
    competitors).
    """
    values = _as_square(matrix)
    n = values.shape[0]
    if n == 0:
        raise ValueError("empty similarity matrix")
    return _kernels.dominant_diagonal_count(values) / n


def ac_parallel(matrix) -> float:
    """Mean cosine of parallel pairs (the diagonal)."""
    values = _as_square(matrix)
    if values.shape[0] == 0:
        raise ValueError("empty similarity matrix")
    return float(np.diag(values).mean())


def ac_nonparallel(matrix) -> float:
    """Mean cosine over the n^2 - n non-parallel (off-diagonal) pairs."""
    values = _as_square(matrix)
    n = values.shape[0]
    if n < 2:
        raise ValueError("non-parallel mean requires n >= 2")
    return float((values.sum() - np.trace(values)) / (n * n - n))


def pool_layers(scores, method: str, subset=None) -> float:
    """Mean or max of per-layer scores, optionally over a layer subset.

    Layer indices count stored hidden-state levels from 0 (the embedding
    output), matching the per-layer score order.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1:
        raise ValueError("per-layer scores must be one-dimensional")
    if subset is not None:
        subset = list(subset)
        for index in subset:
            if not 0 <= index < scores.shape[0]:
                raise ValueError(
                    f"layer index {index} out of range for {scores.shape[0]} layers"
                )
        scores = scores[subset]
    if scores.size == 0:
        raise ValueError("empty layer set")
    if method == "mean":
        return float(scores.mean())
    if method == "max":
        return float(scores.max())
    raise ValueError(f"unknown layer pooling {method!r}; expected 'mean' or 'max'")


@dataclass(frozen=True)
class AlignmentProfile:
    """Per-layer alignment of one language against the pivot.

    ``degenerate`` maps layer index -> sentence indices whose embedding was
    degenerate on either side (empty layers omitted).
    """

    language: str
    pivot: str
    per_layer_scores: tuple[float, ...]
    pooled_mean: float
    pooled_max: float
    layer_subset: tuple[int, ...] | None = None
    subset_score: float | None = None
    degenerate: dict[int, tuple[int, ...]] | None = None


def _sentence_layers(dump: EmbeddingDump, pooling: str) -> list[np.ndarray]:
    manifest = dump.manifest
    if pooling not in METHODS:
        raise ValueError(f"unknown pooling method {pooling!r}; expected one of {METHODS}")
    if manifest.granularity == "sentence":
        if manifest.pooling != pooling:
            raise ValueError(
                f"{manifest.language}: dump was pooled with {manifest.pooling!r}, "
                f"run requested {pooling!r}"
            )
        return list(dump.layers)
    return [
        pool_token_matrix(layer, manifest.token_counts, pooling)
        for layer in dump.layers
    ]


def language_alignment(
    dump_pivot: EmbeddingDump,
    dump_lang: EmbeddingDump,
    pooling: str = "weighted_average",
    layer_pool: str = "mean",
    subset=None,
) -> AlignmentProfile:
    """Score one language dump against the pivot dump, layer by layer.

    Token dumps are pooled here with ``pooling``; sentence dumps must have
    been pre-pooled with the same method. ``layer_pool`` only selects the
    method for the optional ``subset_score``; the profile always carries
    both the mean- and max-pooled scalar.
    """
    check = validate_pair(dump_pivot, dump_lang)
    if not check.ok:
        raise ValueError(
            "dumps are not comparable: " + "; ".join(check.mismatches)
        )
    pivot_layers = _sentence_layers(dump_pivot, pooling)
    lang_layers = _sentence_layers(dump_lang, pooling)

    pair = (dump_lang.manifest.language, dump_pivot.manifest.language)
    per_layer = []
    degenerate: dict[int, tuple[int, ...]] = {}
    for index, (lang_emb, pivot_emb) in enumerate(zip(lang_layers, pivot_layers)):
        matrix = similarity_matrix(lang_emb, pivot_emb, layer=index, lang_pair=pair)
        per_layer.append(layer_alignment_score(matrix))
        flagged = sorted(set(matrix.degenerate_rows) | set(matrix.degenerate_cols))
        if flagged:
            degenerate[index] = tuple(flagged)

    subset = tuple(subset) if subset is not None else None
    return AlignmentProfile(
        language=dump_lang.manifest.language,
        pivot=dump_pivot.manifest.language,
        per_layer_scores=tuple(per_layer),
        pooled_mean=pool_layers(per_layer, "mean"),
        pooled_max=pool_layers(per_layer, "max"),
        layer_subset=subset,
        subset_score=pool_layers(per_layer, layer_pool, subset) if subset else None,
        degenerate=degenerate or None,
    )
