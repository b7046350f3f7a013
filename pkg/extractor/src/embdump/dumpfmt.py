"""Writer for the scoring toolkit's dump wire format.

One JSON manifest beside one raw payload of little-endian float32 rows,
layers concatenated in ascending order. Writes are atomic (temp file plus
rename) so a crashed extraction never leaves a half-written dump that a
reader could mistake for a real one.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

PAYLOAD_DTYPE = "float32-le"


def write_dump(
    stem: str | Path,
    layers,
    *,
    model_id: str,
    language: str,
    granularity: str,
    sentence_count: int,
    dim: int,
    corpus_id: str,
    pooling: str | None = None,
    token_counts: tuple[int, ...] | None = None,
    annotations: dict | None = None,
) -> Path:
    """Write ``<stem>.json`` + ``<stem>.bin``; returns the manifest path.

    ``annotations`` become extra manifest keys (readers ignore unknown keys).
    """
    stem = Path(stem)
    stem.parent.mkdir(parents=True, exist_ok=True)
    rows = sum(token_counts) if granularity == "token" else sentence_count

    flat = []
    for index, matrix in enumerate(layers):
        arr = np.ascontiguousarray(matrix, dtype="<f4")
        if arr.shape != (rows, dim):
            raise ValueError(f"layer {index}: expected shape {(rows, dim)}, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError(f"layer {index}: non-finite hidden state")
        flat.append(arr)

    manifest = {
        "model_id": model_id,
        "language": language,
        "granularity": granularity,
        "layer_count": len(flat),
        "sentence_count": sentence_count,
        "dim": dim,
        "corpus_id": corpus_id,
        "pooling": pooling,
        "token_counts": list(token_counts) if token_counts is not None else None,
        "dtype": PAYLOAD_DTYPE,
    }
    manifest.update(annotations or {})

    payload_path = stem.with_suffix(".bin")
    manifest_path = stem.with_suffix(".json")
    payload_tmp = payload_path.with_suffix(".bin.tmp")
    manifest_tmp = manifest_path.with_suffix(".json.tmp")
    with open(payload_tmp, "wb") as handle:
        for arr in flat:
            handle.write(arr.tobytes())
    manifest_tmp.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    os.replace(payload_tmp, payload_path)
    os.replace(manifest_tmp, manifest_path)
    return manifest_path
