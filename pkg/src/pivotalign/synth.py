"""Synthetic embeddings with controlled alignment, and a Monte Carlo oracle.

Alignment strength is synthesized by additive noise in the shared space:
``normalize(pivot_i + sigma * g_i)`` with standard Gaussian ``g_i``. A
global rotation would NOT work here: it moves every sentence coherently and
so preserves cross-matrix diagonal dominance perfectly at any angle, while
per-row noise sweeps the alignment score smoothly from 1 at ``sigma = 0``
down to the random-retrieval floor ``1/(2n-1)`` as ``sigma`` grows.

Randomness policy: numpy's Philox counter-based bit generator, keyed through
``SeedSequence`` and consumed with numpy's ``standard_normal``. Every
consumer derives an independent stream from integer key tuples, and Monte
Carlo trials are keyed as (seed, trial index), so partitioning trials across
workers cannot change the results. Outputs are bit-reproducible for a fixed
numpy build.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from pivotalign import _kernels
from pivotalign.dumpio import DumpManifest, write_dump

__all__ = [
    "BaselineDistribution",
    "SynthSpec",
    "gen_aligned",
    "gen_pivot",
    "gen_unaligned",
    "monte_carlo_baseline",
    "write_synthetic_dumps",
]

KINDS = ("pivot", "aligned", "unaligned")

# Stream tags keeping the seed space of distinct consumers disjoint.
_STREAM_PIVOT = 0
_STREAM_NOISE = 1
_STREAM_UNALIGNED = 2
_STREAM_TRIAL = 3


@dataclass(frozen=True)
class SynthSpec:
    n: int
    d: int
    seed: int
    sigma: float = 0.0
    kind: str = "pivot"

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def _generator(*key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(key))))


def _unit_gaussian_rows(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    rows = rng.standard_normal((n, d))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def gen_pivot(spec: SynthSpec) -> np.ndarray:
    """i.i.d. standard Gaussian rows, normalized to unit length."""
    if spec.kind != "pivot":
        raise ValueError(f"expected kind='pivot', got {spec.kind!r}")
    return _unit_gaussian_rows(_generator(spec.seed, _STREAM_PIVOT), spec.n, spec.d)


def gen_aligned(pivot: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    """Rows ``normalize(pivot_i + sigma * g_i)``; sigma = 0 returns the
    pivot bitwise."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    pivot = np.asarray(pivot, dtype=np.float64)
    if sigma == 0.0:
        return pivot.copy()
    noise = _generator(seed, _STREAM_NOISE).standard_normal(pivot.shape)
    noisy = pivot + sigma * noise
    return noisy / np.linalg.norm(noisy, axis=1, keepdims=True)


def gen_unaligned(spec: SynthSpec) -> np.ndarray:
    """Fresh unit-Gaussian rows, independent of any pivot."""
    if spec.kind != "unaligned":
        raise ValueError(f"expected kind='unaligned', got {spec.kind!r}")
    return _unit_gaussian_rows(_generator(spec.seed, _STREAM_UNALIGNED), spec.n, spec.d)


@dataclass(frozen=True)
class BaselineDistribution:
    """Empirical alignment-score distribution of unaligned pairs."""

    n: int
    scores: np.ndarray

    @property
    def trials(self) -> int:
        return self.scores.shape[0]

    @property
    def mean(self) -> float:
        return float(self.scores.mean())

    @property
    def standard_error(self) -> float:
        if self.trials < 2:
            return float("inf")
        return float(self.scores.std(ddof=1) / np.sqrt(self.trials))

    def tail(self, k: int) -> float:
        """Empirical P(score >= k/n)."""
        if not 0 <= k <= self.n:
            raise ValueError(f"k must lie in [0, n={self.n}], got {k}")
        return float(np.mean(self.scores >= k / self.n))

    def tail_curve(self) -> np.ndarray:
        return np.array([self.tail(k) for k in range(self.n + 1)])


def monte_carlo_baseline(
    n: int, trials: int, seed: int, dim: int = 32
) -> BaselineDistribution:
    """Sample the alignment score of ``trials`` independent unaligned pairs.

    Trial ``t`` draws both sides from the (seed, t) stream, so the result is
    independent of any batching or parallel schedule. The analytic
    counterpart is ``stats.random_baseline``; the two agree statistically
    (the analytic model assumes independence across diagonal indices, so
    agreement is within Monte Carlo error, not exact).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    scores = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        rng = _generator(seed, _STREAM_TRIAL, t)
        a = _unit_gaussian_rows(rng, n, dim)
        b = _unit_gaussian_rows(rng, n, dim)
        scores[t] = _kernels.dominant_diagonal_count(a @ b.T) / n
    return BaselineDistribution(n=n, scores=scores)


def write_synthetic_dumps(
    directory: str | Path,
    languages: Mapping[str, float],
    n: int,
    dim: int,
    seed: int,
    pivot_label: str = "eng_Latn",
    layer_count: int = 1,
    pooling: str = "weighted_average",
) -> dict[str, Path]:
    """Emit a pivot dump plus one dump per (label, sigma) in dump format.

    Every layer gets an independent pivot matrix and per-language noise
    stream, so multi-layer dumps exercise the full scoring pipeline.
    Returns label -> manifest path (pivot included).
    """
    directory = Path(directory)
    # Collision-free per-layer / per-language seed derivation; SeedSequence
    # accepts arbitrary-precision integer keys.
    layer_seed = [(seed << 32) | layer for layer in range(layer_count)]
    pivot_layers = [
        gen_pivot(SynthSpec(n=n, d=dim, seed=layer_seed[layer], kind="pivot"))
        for layer in range(layer_count)
    ]

    def _manifest(label: str) -> DumpManifest:
        return DumpManifest(
            model_id="synthetic",
            language=label,
            granularity="sentence",
            layer_count=layer_count,
            sentence_count=n,
            dim=dim,
            corpus_id=f"synthetic-n{n}-d{dim}-seed{seed}",
            pooling=pooling,
        )

    written = {
        pivot_label: write_dump(_manifest(pivot_label), pivot_layers, directory / pivot_label)
    }
    for index, label in enumerate(sorted(languages)):
        sigma = languages[label]
        layers = [
            gen_aligned(pivot_layers[layer], sigma, (layer_seed[layer] << 32) | (index + 1))
            for layer in range(layer_count)
        ]
        written[label] = write_dump(_manifest(label), layers, directory / label)
    return written
