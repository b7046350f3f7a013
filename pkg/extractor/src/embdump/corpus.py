"""Parallel corpus loading.

A corpus directory holds one UTF-8 text file per language label
(``<label>.txt`` or bare ``<label>``), one sentence per line, where line i
of every file is the same sentence translated. Lists are truncated to the
sentence limit (100 for FLORES-style sets, 103 for Bible-style); files with
fewer lines are refused so a ragged corpus can never slip through.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["CorpusError", "CorpusSpec", "load_parallel"]


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusSpec:
    directory: Path
    languages: tuple[str, ...]
    sentence_limit: int = 100
    encoding: str = "utf-8"

    def __post_init__(self):
        object.__setattr__(self, "directory", Path(self.directory))
        object.__setattr__(self, "languages", tuple(self.languages))
        if not self.languages:
            raise CorpusError("no languages requested")
        if self.sentence_limit < 1:
            raise CorpusError("sentence_limit must be >= 1")


def _language_file(spec: CorpusSpec, label: str) -> Path:
    for candidate in (spec.directory / f"{label}.txt", spec.directory / label):
        if candidate.is_file():
            return candidate
    raise CorpusError(f"no corpus file for {label!r}: tried {label}.txt and {label} in {spec.directory}")


def load_parallel(spec: CorpusSpec) -> dict[str, list[str]]:
    """Aligned sentence lists per language, truncated to the sentence limit."""
    corpus: dict[str, list[str]] = {}
    for label in spec.languages:
        path = _language_file(spec, label)
        lines = path.read_text(encoding=spec.encoding).splitlines()
        if len(lines) < spec.sentence_limit:
            raise CorpusError(
                f"{path}: {len(lines)} sentences, need {spec.sentence_limit}"
            )
        sentences = lines[: spec.sentence_limit]
        for number, sentence in enumerate(sentences, 1):
            if not sentence.strip():
                raise CorpusError(f"{path}:{number}: empty sentence breaks parallelism")
        corpus[label] = sentences
    return corpus
