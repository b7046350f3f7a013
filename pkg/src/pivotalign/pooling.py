"""Token-to-sentence pooling for causal-attention models.

Under causal attention a token only sees its predecessors, so sentence-final
tokens carry the most context while sentence-initial ones carry almost none.
Plain averaging therefore biases the embedding toward the start of the
sentence. Two reductions are supported:

``last_token``
    The final token vector, unchanged. No instruction prompt is prepended;
    the target models are plain pre-trained LMs.
``weighted_average``
    Position-weighted mean ``sum_t w_t h_t`` with ``w_t = t / (T(T+1)/2)``
    for 1-based position ``t``, i.e. weights growing linearly toward the end
    of the sentence and summing to 1.

Accumulation happens in float64 and results are emitted as float32 (the
dump payload precision). All functions are pure and safe to call
concurrently.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "METHODS",
    "pool_last_token",
    "pool_token_matrix",
    "pool_tokens",
    "pool_weighted_average",
    "position_weights",
]

METHODS = ("last_token", "weighted_average")


def _token_matrix(tokens) -> np.ndarray:
    arr = np.asarray(tokens)
    if arr.ndim != 2:
        raise ValueError(f"token sequence must be a (T, dim) matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("empty sentence")
    if not np.isfinite(arr).all():
        raise ValueError("non-finite token embedding")
    return arr


def position_weights(count: int) -> np.ndarray:
    """Weights for positions 1..count, ``w_t = t / (count*(count+1)/2)``.

    Nonnegative, strictly increasing, and summing to 1.
    """
    if count < 1:
        raise ValueError("empty sentence")
    positions = np.arange(1, count + 1, dtype=np.float64)
    return positions / (count * (count + 1) / 2.0)


def pool_last_token(tokens) -> np.ndarray:
    seq = _token_matrix(tokens)
    return np.asarray(seq[-1], dtype=np.float32)


def pool_weighted_average(tokens) -> np.ndarray:
    seq = _token_matrix(tokens)
    weights = position_weights(seq.shape[0])
    pooled = weights @ seq.astype(np.float64, copy=False)
    return pooled.astype(np.float32)


def pool_tokens(tokens, method: str) -> np.ndarray:
    if method == "last_token":
        return pool_last_token(tokens)
    if method == "weighted_average":
        return pool_weighted_average(tokens)
    raise ValueError(f"unknown pooling method {method!r}; expected one of {METHODS}")


def pool_token_matrix(matrix, token_counts, method: str) -> np.ndarray:
    """Pool a ragged layer matrix (concatenated per-sentence token rows)
    into one ``(n_sentences, dim)`` float32 matrix."""
    matrix = np.asarray(matrix)
    pooled = np.empty((len(token_counts), matrix.shape[1]), dtype=np.float32)
    offset = 0
    for index, count in enumerate(token_counts):
        pooled[index] = pool_tokens(matrix[offset : offset + count], method)
        offset += count
    if offset != matrix.shape[0]:
        raise ValueError(
            f"token_counts cover {offset} rows but the matrix has {matrix.shape[0]}"
        )
    return pooled
