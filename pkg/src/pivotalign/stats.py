"""Robustness bound, Pearson correlation, and performance estimation.

The chance level of the alignment score on an n x n random matrix follows
from each diagonal entry competing with the 2n - 2 other entries of its row
and column: it is the strict maximum of 2n - 1 exchangeable values with
probability ``p = 1/(2n - 1)``. Modelling the n diagonal indices as
independent gives a Binomial(n, p) count, whose upper tail bounds the
probability of reaching a given score by chance.

Correlation between alignment scores and task accuracies uses Pearson's r
with a two-sided p-value from the Student-t transform
``t = r * sqrt((N-2)/(1-r^2))`` evaluated through the regularized
incomplete beta function. Score-to-performance conversion is ordinary
least squares on (adjusted score, task accuracy) pairs, where an adjusted
score is the alignment score times the model's English task accuracy.

All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.special import betainc, gammaln, logsumexp, xlog1py, xlogy

__all__ = [
    "CorrelationReport",
    "LinearFit",
    "Prediction",
    "adjust_scores",
    "binomial_pmf",
    "fit_line",
    "ideal_line",
    "pearson",
    "predict_performance",
    "random_baseline",
]


def binomial_pmf(n: int, p: float) -> np.ndarray:
    """Binomial(n, p) probabilities for k = 0..n, computed in log space.

    Stable for n up to at least 10^4; ``xlogy`` conventions make the
    degenerate p = 0 and p = 1 cases exact.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    k = np.arange(n + 1, dtype=np.float64)
    log_terms = (
        gammaln(n + 1)
        - gammaln(k + 1)
        - gammaln(n - k + 1)
        + xlogy(k, p)
        + xlog1py(n - k, -p)
    )
    return np.exp(log_terms)


def random_baseline(n: int, k: int) -> float:
    """P(X >= k) for X ~ Binomial(n, 1/(2n-1)): the probability that a
    random n x n matrix reaches alignment score k/n or better.

    ``k = 0`` returns 1. The tail is summed directly in log space, so tiny
    tails keep full relative precision.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, n={n}], got {k}")
    if k == 0:
        return 1.0
    p = 1.0 / (2.0 * n - 1.0)
    i = np.arange(k, n + 1, dtype=np.float64)
    log_terms = (
        gammaln(n + 1)
        - gammaln(i + 1)
        - gammaln(n - i + 1)
        + xlogy(i, p)
        + xlog1py(n - i, -p)
    )
    return float(min(1.0, np.exp(logsumexp(log_terms))))


@dataclass(frozen=True)
class CorrelationReport:
    r: float
    p_value: float
    sample_size: int
    pairs: tuple[tuple[str, float, float], ...]


def pearson(pairs: Sequence[tuple[float, float]], labels=None) -> CorrelationReport:
    """Pearson r over (x, y) pairs with a two-sided Student-t p-value.

    Requires at least 3 pairs and nonzero variance in both coordinates.
    ``labels`` optionally names the pairs in the report.
    """
    xs = np.asarray([pair[0] for pair in pairs], dtype=np.float64)
    ys = np.asarray([pair[1] for pair in pairs], dtype=np.float64)
    size = xs.shape[0]
    if size < 3:
        raise ValueError(f"Pearson correlation needs at least 3 pairs, got {size}")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance in one coordinate")
    r = float(np.clip(dx @ dy / np.sqrt(sxx * syy), -1.0, 1.0))

    df = size - 2
    if 1.0 - r * r <= 0.0:
        p_value = 0.0
    else:
        t_squared = r * r * df / (1.0 - r * r)
        p_value = float(betainc(df / 2.0, 0.5, df / (df + t_squared)))

    if labels is None:
        labels = [""] * size
    named = tuple(
        (str(label), float(x), float(y)) for label, x, y in zip(labels, xs, ys)
    )
    return CorrelationReport(r=r, p_value=p_value, sample_size=size, pairs=named)


def adjust_scores(scores, english_task_score: float):
    """Multiply alignment scores by the English task accuracy.

    The raw score says how well a language aligns with the pivot; scaling by
    English performance turns it into an estimated task score. Accepts a
    mapping (returns a dict) or a sequence (returns a list).
    """
    if not 0.0 <= english_task_score <= 1.0:
        raise ValueError(f"English task score must lie in [0, 1], got {english_task_score}")

    def _one(value: float) -> float:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"alignment score must lie in [0, 1], got {value}")
        return value * english_task_score

    if isinstance(scores, Mapping):
        return {label: _one(value) for label, value in scores.items()}
    return [_one(value) for value in scores]


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    residual_sum_squares: float

    def predict(self, x: float) -> float:
        return self.slope * x + self.intercept


def fit_line(points: Sequence[tuple[float, float]]) -> LinearFit:
    """Ordinary least squares line through (x, y) points."""
    xs = np.asarray([point[0] for point in points], dtype=np.float64)
    ys = np.asarray([point[1] for point in points], dtype=np.float64)
    if xs.shape[0] < 2:
        raise ValueError(f"line fit needs at least 2 points, got {xs.shape[0]}")
    dx = xs - xs.mean()
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise ValueError("zero variance in x")
    slope = float(dx @ (ys - ys.mean()) / sxx)
    intercept = float(ys.mean() - slope * xs.mean())
    residuals = ys - (slope * xs + intercept)
    return LinearFit(
        slope=slope,
        intercept=intercept,
        residual_sum_squares=float(residuals @ residuals),
    )


def ideal_line(num_choices: int) -> LinearFit:
    """Reference line for an m-way multiple-choice task.

    An unaligned language should land at chance accuracy 1/m while a
    perfectly aligned one reaches the (adjusted) score itself, giving slope
    ``1 - 1/m`` and intercept ``1/m``.
    """
    if num_choices < 2:
        raise ValueError(f"num_choices must be >= 2, got {num_choices}")
    intercept = 1.0 / num_choices
    return LinearFit(slope=1.0 - intercept, intercept=intercept, residual_sum_squares=0.0)


@dataclass(frozen=True)
class Prediction:
    value: float
    clamped: bool


def predict_performance(fit: LinearFit, adjusted_score: float) -> Prediction:
    """Evaluate a fit at an adjusted score, clamping into [0, 1].

    Clamping is reported rather than silent: a prediction leaving [0, 1]
    usually means the fit was extrapolated or pathological.
    """
    raw = fit.predict(adjusted_score)
    value = min(1.0, max(0.0, raw))
    return Prediction(value=value, clamped=value != raw)
