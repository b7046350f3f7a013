"""Coverage buckets, leaderboard tables, and per-layer curve emission.

All emitters are deterministic byte-for-byte given identical inputs: rows
and columns are sorted, floats are rendered with ``repr`` (which
round-trips float64 exactly), and no timestamps are written.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from pivotalign.alignment import AlignmentProfile

__all__ = [
    "BUCKET_COUNT",
    "CoverageEntry",
    "CoverageReport",
    "Table",
    "bucketize",
    "coverage",
    "layer_curves",
    "leaderboard",
]

# Adjusted-score bands, best to worst: (0.8, 1.0], (0.6, 0.8], (0.4, 0.6],
# (0.2, 0.4], [0.0, 0.2]. Upper edges are exclusive except for 1.0, so a
# score sitting exactly on an internal edge falls in the lower band.
BUCKET_COUNT = 5
_LOWER_EDGES = (0.8, 0.6, 0.4, 0.2, 0.0)

BUCKET_NAMES = (
    "well covered",
    "covered",
    "moderately covered",
    "weakly covered",
    "not covered",
)


def bucketize(adjusted_score: float) -> int:
    """Bucket index 0 (well covered) .. 4 (not covered) of a score in [0, 1]."""
    if not 0.0 <= adjusted_score <= 1.0:
        raise ValueError(f"adjusted score must lie in [0, 1], got {adjusted_score}")
    for index, edge in enumerate(_LOWER_EDGES[:-1]):
        if adjusted_score > edge:
            return index
    return BUCKET_COUNT - 1


@dataclass(frozen=True)
class CoverageEntry:
    language: str
    adjusted_score: float
    bucket: int


@dataclass(frozen=True)
class CoverageReport:
    entries: tuple[CoverageEntry, ...]

    def counts(self) -> list[int]:
        totals = [0] * BUCKET_COUNT
        for entry in self.entries:
            totals[entry.bucket] += 1
        return totals


def coverage(adjusted_scores: Mapping[str, float]) -> CoverageReport:
    """Bucket per-language adjusted scores; entries sorted by language."""
    entries = tuple(
        CoverageEntry(language=label, adjusted_score=float(score), bucket=bucketize(score))
        for label, score in sorted(adjusted_scores.items())
    )
    return CoverageReport(entries=entries)


@dataclass(frozen=True)
class Table:
    """A rectangular table with deterministic text emission.

    Cells are floats, strings, ints, or None (emitted as an empty CSV field
    and a JSON null).
    """

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def to_csv(self) -> str:
        def cell(value):
            if value is None:
                return ""
            if isinstance(value, float):
                return repr(value)
            return str(value)

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([cell(value) for value in row])
        return buffer.getvalue()

    def to_json(self) -> str:
        body = {
            "columns": list(self.columns),
            "rows": [list(row) for row in self.rows],
        }
        return json.dumps(body, indent=2, sort_keys=True) + "\n"


def leaderboard(scores_by_model: Mapping[str, Mapping[str, float]]) -> Table:
    """Languages (rows, sorted by label) x models (columns, sorted by id).

    Cells carry whatever scalar the caller supplies (pooled or adjusted
    scores); a model without a given language gets an empty cell, so the row
    set is the union over models.
    """
    if not scores_by_model:
        raise ValueError("leaderboard needs at least one model")
    models = sorted(scores_by_model)
    languages = sorted({lang for scores in scores_by_model.values() for lang in scores})
    rows = tuple(
        (lang, *(scores_by_model[model].get(lang) for model in models))
        for lang in languages
    )
    return Table(columns=("language", *models), rows=rows)


def layer_curves(profiles: Iterable[AlignmentProfile]) -> Table:
    """Long-format (language, layer, score) table for external plotting.

    One row per (language, layer), sorted by language then layer; scores are
    the profile entries, bit-exact.
    """
    rows = []
    for profile in sorted(profiles, key=lambda p: p.language):
        for layer, score in enumerate(profile.per_layer_scores):
            rows.append((profile.language, layer, score))
    return Table(columns=("language", "layer", "score"), rows=tuple(rows))
