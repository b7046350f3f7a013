"""Extractor-side sentence pooling.

Same definitions as the scoring toolkit (last token; position-weighted
average with weights t / (T(T+1)/2), float64 accumulation, float32 output)
so pre-pooled sentence dumps and core-side pooling of token dumps agree.
The interop test suite cross-checks the two implementations against each
other.
"""

from __future__ import annotations

import numpy as np

METHODS = ("last_token", "weighted_average")


def last_token(tokens: np.ndarray) -> np.ndarray:
    if len(tokens) == 0:
        raise ValueError("empty sentence")
    return np.asarray(tokens[-1], dtype=np.float32)


def weighted_average(tokens: np.ndarray) -> np.ndarray:
    count = len(tokens)
    if count == 0:
        raise ValueError("empty sentence")
    positions = np.arange(1, count + 1, dtype=np.float64)
    weights = positions / (count * (count + 1) / 2.0)
    return (weights @ np.asarray(tokens, dtype=np.float64)).astype(np.float32)


def pool(tokens: np.ndarray, method: str) -> np.ndarray:
    if method == "last_token":
        return last_token(tokens)
    if method == "weighted_average":
        return weighted_average(tokens)
    raise ValueError(f"unknown pooling method {method!r}; expected one of {METHODS}")
