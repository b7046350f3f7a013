"""On-disk embedding dump format: JSON manifest beside a raw float32 payload.

A dump decouples model inference from scoring. An extractor (or the
synthetic generator) writes one manifest/payload pair per (model, language,
corpus); scoring tools read them back without ever touching a model.

Layout
------
``<stem>.json``
    UTF-8 JSON manifest carrying the fields of :class:`DumpManifest`.
``<stem>.bin``
    Little-endian float32, row-major, layers concatenated in ascending
    layer order. Sentence dumps store an ``n x dim`` matrix per layer;
    token dumps are ragged, sentence ``i`` contributing
    ``token_counts[i]`` rows per layer, sentences in order.

Unknown manifest keys are ignored, so producers may attach annotations
(inference precision, special-token policy, ...) without breaking readers.

Dumps are immutable once written: concurrent readers are safe, and a writer
assumes exclusive access to its output stem. Validation is total; malformed
input raises :class:`DumpFormatError` with a specific diagnostic, never a
crash or a silent acceptance. Non-finite values are a hard error because a
single NaN poisons every cosine in its row and column.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "DumpFormatError",
    "DumpManifest",
    "EmbeddingDump",
    "PairCheck",
    "read_dump",
    "scan_dump_dir",
    "validate_pair",
    "write_dump",
]

PAYLOAD_DTYPE = "float32-le"
GRANULARITIES = ("sentence", "token")
POOLINGS = ("last_token", "weighted_average")

# ISO 639-3 code, underscore, four-letter script code (FLORES-200 labels).
_LABEL_RE = re.compile(r"^[a-z]{3}_[A-Z][a-z]{3}$")

_MANIFEST_FIELDS = (
    "model_id",
    "language",
    "granularity",
    "layer_count",
    "sentence_count",
    "dim",
    "corpus_id",
    "dtype",
)


class DumpFormatError(ValueError):
    """Malformed manifest or payload."""


@dataclass(frozen=True)
class DumpManifest:
    model_id: str
    language: str
    granularity: str
    layer_count: int
    sentence_count: int
    dim: int
    corpus_id: str
    pooling: str | None = None
    token_counts: tuple[int, ...] | None = None
    dtype: str = PAYLOAD_DTYPE

    def validate(self) -> None:
        if not self.model_id:
            raise DumpFormatError("model_id must be non-empty")
        if not self.corpus_id:
            raise DumpFormatError("corpus_id must be non-empty")
        if not _LABEL_RE.match(self.language):
            raise DumpFormatError(
                f"language label {self.language!r} is not of the form "
                "xxx_Xxxx (ISO 639-3 + script code)"
            )
        if self.granularity not in GRANULARITIES:
            raise DumpFormatError(f"unknown granularity {self.granularity!r}")
        if self.dtype != PAYLOAD_DTYPE:
            raise DumpFormatError(f"unknown dtype {self.dtype!r}")
        for name in ("layer_count", "sentence_count", "dim"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise DumpFormatError(f"{name} must be a positive integer, got {value!r}")
        if self.granularity == "sentence":
            if self.pooling not in POOLINGS:
                raise DumpFormatError(
                    f"sentence dumps require pooling in {POOLINGS}, got {self.pooling!r}"
                )
            if self.token_counts is not None:
                raise DumpFormatError("sentence dumps must not carry token_counts")
        else:
            if self.pooling is not None:
                raise DumpFormatError("token dumps must not declare a pooling method")
            if self.token_counts is None:
                raise DumpFormatError("token dumps require token_counts")
            if len(self.token_counts) != self.sentence_count:
                raise DumpFormatError(
                    f"token_counts has {len(self.token_counts)} entries, "
                    f"expected sentence_count={self.sentence_count}"
                )
            if any(not isinstance(t, int) or t < 1 for t in self.token_counts):
                raise DumpFormatError("token_counts entries must be integers >= 1")

    @property
    def rows_per_layer(self) -> int:
        if self.granularity == "token":
            return sum(self.token_counts)
        return self.sentence_count

    @property
    def payload_bytes(self) -> int:
        return self.layer_count * self.rows_per_layer * self.dim * 4

    def to_json(self) -> str:
        record = {name: getattr(self, name) for name in _MANIFEST_FIELDS}
        record["pooling"] = self.pooling
        record["token_counts"] = (
            list(self.token_counts) if self.token_counts is not None else None
        )
        return json.dumps(record, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str, source: str = "<manifest>") -> "DumpManifest":
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DumpFormatError(f"{source}: manifest is not valid JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise DumpFormatError(f"{source}: manifest must be a JSON object")
        missing = [name for name in _MANIFEST_FIELDS if name not in record]
        if missing:
            raise DumpFormatError(f"{source}: manifest missing fields {missing}")
        token_counts = record.get("token_counts")
        if token_counts is not None:
            token_counts = tuple(token_counts)
        manifest = cls(
            model_id=record["model_id"],
            language=record["language"],
            granularity=record["granularity"],
            layer_count=record["layer_count"],
            sentence_count=record["sentence_count"],
            dim=record["dim"],
            corpus_id=record["corpus_id"],
            pooling=record.get("pooling"),
            token_counts=token_counts,
            dtype=record["dtype"],
        )
        manifest.validate()
        return manifest


@dataclass(frozen=True)
class EmbeddingDump:
    """A validated dump: manifest plus one float32 matrix per layer.

    Sentence dumps hold ``(sentence_count, dim)`` matrices; token dumps hold
    ``(sum(token_counts), dim)`` matrices whose rows are the concatenated
    per-sentence token embeddings.
    """

    manifest: DumpManifest
    layers: tuple[np.ndarray, ...]

    def token_rows(self, layer: int, sentence: int) -> np.ndarray:
        """Token matrix of one sentence within a token dump."""
        if self.manifest.granularity != "token":
            raise DumpFormatError("token_rows is only defined for token dumps")
        counts = self.manifest.token_counts
        start = sum(counts[:sentence])
        return self.layers[layer][start : start + counts[sentence]]


@dataclass(frozen=True)
class PairCheck:
    """Comparability report for two dumps; failures are listed, not raised."""

    ok: bool
    mismatches: tuple[str, ...] = field(default_factory=tuple)


def _paths(path: str | Path) -> tuple[Path, Path]:
    base = Path(path)
    if base.suffix in (".json", ".bin"):
        base = base.with_suffix("")
    return base.with_suffix(".json"), base.with_suffix(".bin")


def write_dump(
    manifest: DumpManifest, layers: Sequence[np.ndarray], path: str | Path
) -> Path:
    """Write ``<path>.json`` and ``<path>.bin``; returns the manifest path.

    Layer matrices are stored as little-endian float32 exactly as given
    (already-float32 input round-trips bit-exactly through :func:`read_dump`).
    """
    manifest.validate()
    if len(layers) != manifest.layer_count:
        raise DumpFormatError(
            f"manifest declares {manifest.layer_count} layers, got {len(layers)}"
        )
    expected = (manifest.rows_per_layer, manifest.dim)
    flat = []
    for index, matrix in enumerate(layers):
        arr = np.asarray(matrix, dtype="<f4")
        if arr.shape != expected:
            raise DumpFormatError(
                f"layer {index}: expected shape {expected}, got {arr.shape}"
            )
        if not np.isfinite(arr).all():
            row, col = np.argwhere(~np.isfinite(arr))[0]
            raise DumpFormatError(
                f"non-finite value at (layer={index}, row={row}, col={col})"
            )
        flat.append(np.ascontiguousarray(arr))

    manifest_path, payload_path = _paths(path)
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    with open(payload_path, "wb") as handle:
        for arr in flat:
            handle.write(arr.tobytes())
    manifest_path.write_text(manifest.to_json(), encoding="utf-8")
    return manifest_path


def read_dump(path: str | Path) -> EmbeddingDump:
    """Read and validate a dump; ``path`` may be the stem or either file."""
    manifest_path, payload_path = _paths(path)
    if not manifest_path.exists():
        raise FileNotFoundError(manifest_path)
    manifest = DumpManifest.from_json(
        manifest_path.read_text(encoding="utf-8"), source=str(manifest_path)
    )
    if not payload_path.exists():
        raise FileNotFoundError(payload_path)

    raw = payload_path.read_bytes()
    expected = manifest.payload_bytes
    if len(raw) < expected:
        raise DumpFormatError(
            f"{payload_path}: truncated payload: expected {expected} bytes, "
            f"found {len(raw)}"
        )
    if len(raw) > expected:
        raise DumpFormatError(
            f"{payload_path}: manifest/payload length mismatch: manifest "
            f"declares {expected} bytes, file has {len(raw)}"
        )

    values = np.frombuffer(raw, dtype="<f4")
    rows = manifest.rows_per_layer
    layers = []
    for index in range(manifest.layer_count):
        matrix = values[index * rows * manifest.dim : (index + 1) * rows * manifest.dim]
        matrix = matrix.reshape(rows, manifest.dim)
        if not np.isfinite(matrix).all():
            row, col = np.argwhere(~np.isfinite(matrix))[0]
            raise DumpFormatError(
                f"{payload_path}: non-finite value at "
                f"(layer={index}, row={row}, col={col})"
            )
        layers.append(matrix)
    return EmbeddingDump(manifest=manifest, layers=tuple(layers))


_COMPARABLE_FIELDS = ("model_id", "corpus_id", "sentence_count", "layer_count", "dim")


def validate_pair(a: DumpManifest | EmbeddingDump, b: DumpManifest | EmbeddingDump) -> PairCheck:
    """Check that two dumps are comparable (same model, corpus and shapes).

    Languages are expected to differ; they are not compared.
    """
    ma = a.manifest if isinstance(a, EmbeddingDump) else a
    mb = b.manifest if isinstance(b, EmbeddingDump) else b
    mismatches = []
    for name in _COMPARABLE_FIELDS:
        left, right = getattr(ma, name), getattr(mb, name)
        if left != right:
            mismatches.append(f"{name}: {left!r} != {right!r}")
    return PairCheck(ok=not mismatches, mismatches=tuple(mismatches))


def scan_dump_dir(directory: str | Path) -> dict[str, Path]:
    """Map language label -> manifest path for every dump in a directory.

    Non-manifest ``.json`` files are skipped; two dumps for the same
    language are an error.
    """
    directory = Path(directory)
    found: dict[str, Path] = {}
    for manifest_path in sorted(directory.glob("*.json")):
        try:
            manifest = DumpManifest.from_json(
                manifest_path.read_text(encoding="utf-8"), source=str(manifest_path)
            )
        except DumpFormatError:
            continue
        if manifest.language in found:
            raise DumpFormatError(
                f"duplicate dump for {manifest.language}: "
                f"{found[manifest.language]} and {manifest_path}"
            )
        found[manifest.language] = manifest_path
    return found
