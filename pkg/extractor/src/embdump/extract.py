"""Hidden-state extraction from causal language models.

For every sentence, the hidden states at the output of each layer are
captured, including the embedding-layer output as level 0, so a model with
B transformer blocks yields B + 1 levels. Sequence-start special tokens
inserted by the tokenizer are kept: they are part of the model's actual
input, count toward the token total, and take the first position weight.
The policy is recorded in the manifest (``special_tokens_included``), as is
the inference precision.

Batching uses right padding with an attention mask, which leaves the hidden
states of real token positions unchanged under causal attention; results
are therefore batch-size-invariant (checked in the tests to 1e-4).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch

from embdump import pooling as pool_mod
from embdump.dumpfmt import write_dump

__all__ = ["ExtractionError", "extract", "extract_many", "load_model"]


class ExtractionError(RuntimeError):
    pass


def load_model(model_id: str, device: str = "cpu"):
    from transformers import AutoModelForCausalLM, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_id)
        model = AutoModelForCausalLM.from_pretrained(model_id)
    except Exception as exc:
        raise ExtractionError(f"cannot load model {model_id!r}: {exc}") from exc
    if tokenizer.pad_token is None:
        if tokenizer.eos_token is not None:
            tokenizer.pad_token = tokenizer.eos_token
        elif tokenizer.unk_token is not None:
            tokenizer.pad_token = tokenizer.unk_token
        else:
            raise ExtractionError(f"tokenizer of {model_id!r} has no usable pad token")
    model.eval()
    model.to(device)
    return model, tokenizer


def _hidden_states(model, tokenizer, sentences, batch_size: int, device: str):
    """Per-layer lists of per-sentence (T_i, dim) float32 arrays."""
    per_layer = None
    token_counts: list[int] = []
    for start in range(0, len(sentences), batch_size):
        batch = sentences[start : start + batch_size]
        encoded = tokenizer(batch, return_tensors="pt", padding=True)
        lengths = encoded["attention_mask"].sum(dim=1).tolist()
        for offset, length in enumerate(lengths):
            if length == 0:
                raise ExtractionError(
                    f"tokenizer produced zero tokens for sentence {start + offset}"
                )
        with torch.no_grad():
            output = model(
                input_ids=encoded["input_ids"].to(device),
                attention_mask=encoded["attention_mask"].to(device),
                output_hidden_states=True,
            )
        if per_layer is None:
            per_layer = [[] for _ in output.hidden_states]
        for level, hidden in enumerate(output.hidden_states):
            values = hidden.to(torch.float32).cpu().numpy()
            for offset, length in enumerate(lengths):
                per_layer[level].append(values[offset, : int(length)])
        token_counts.extend(int(length) for length in lengths)
    return per_layer, tuple(token_counts)


def _adds_special_tokens(tokenizer) -> bool:
    probe = "probe"
    return len(tokenizer(probe).input_ids) != len(
        tokenizer(probe, add_special_tokens=False).input_ids
    )


def extract_many(
    model_id: str,
    corpus: dict[str, list[str]],
    corpus_id: str,
    out_dir: str | Path,
    granularity: str = "sentence",
    pooling: str = "weighted_average",
    batch_size: int = 8,
    device: str = "cpu",
) -> dict[str, Path]:
    """Extract dumps for several languages with one model load.

    ``corpus`` maps language label -> sentence list; returns label ->
    manifest path.
    """
    if granularity not in ("sentence", "token"):
        raise ExtractionError(f"unknown granularity {granularity!r}")
    if pooling not in pool_mod.METHODS:
        raise ExtractionError(f"unknown pooling {pooling!r}")
    for label, sentences in corpus.items():
        if not sentences:
            raise ExtractionError(f"{label}: no sentences to extract")

    model, tokenizer = load_model(model_id, device=device)
    annotations = {
        "special_tokens_included": _adds_special_tokens(tokenizer),
        "inference_precision": str(next(model.parameters()).dtype).removeprefix("torch."),
    }

    written: dict[str, Path] = {}
    for label in sorted(corpus):
        sentences = corpus[label]
        per_layer, token_counts = _hidden_states(
            model, tokenizer, sentences, batch_size, device
        )
        dim = per_layer[0][0].shape[1]
        if granularity == "sentence":
            layers = [
                np.stack([pool_mod.pool(tokens, pooling) for tokens in layer])
                for layer in per_layer
            ]
            written[label] = write_dump(
                Path(out_dir) / label,
                layers,
                model_id=model_id,
                language=label,
                granularity="sentence",
                sentence_count=len(sentences),
                dim=dim,
                corpus_id=corpus_id,
                pooling=pooling,
                annotations=annotations,
            )
        else:
            layers = [np.concatenate(layer) for layer in per_layer]
            written[label] = write_dump(
                Path(out_dir) / label,
                layers,
                model_id=model_id,
                language=label,
                granularity="token",
                sentence_count=len(sentences),
                dim=dim,
                corpus_id=corpus_id,
                token_counts=token_counts,
                annotations=annotations,
            )
    return written


def extract(
    model_id: str,
    sentences: list[str],
    language: str,
    corpus_id: str,
    out_dir: str | Path,
    **kwargs,
) -> Path:
    """Single-language convenience wrapper around :func:`extract_many`."""
    return extract_many(model_id, {language: sentences}, corpus_id, out_dir, **kwargs)[
        language
    ]
