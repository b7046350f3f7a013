import numpy as np
import pytest

from pivotalign.dumpio import DumpManifest, write_dump


@pytest.fixture
def make_sentence_dump(tmp_path):
    """Write a sentence dump from a list of (n, d) float32 layer matrices."""

    def _make(
        layers,
        language="deu_Latn",
        model_id="test-model",
        corpus_id="test-corpus",
        pooling="weighted_average",
        stem=None,
    ):
        layers = [np.asarray(layer, dtype=np.float32) for layer in layers]
        manifest = DumpManifest(
            model_id=model_id,
            language=language,
            granularity="sentence",
            layer_count=len(layers),
            sentence_count=layers[0].shape[0],
            dim=layers[0].shape[1],
            corpus_id=corpus_id,
            pooling=pooling,
        )
        return write_dump(manifest, layers, tmp_path / (stem or language))

    return _make


@pytest.fixture
def make_token_dump(tmp_path):
    """Write a token dump from per-sentence token matrices, one list per layer."""

    def _make(
        layers_of_sentences,
        language="deu_Latn",
        model_id="test-model",
        corpus_id="test-corpus",
        stem=None,
    ):
        token_counts = tuple(len(tokens) for tokens in layers_of_sentences[0])
        dim = np.asarray(layers_of_sentences[0][0]).shape[1]
        layers = [
            np.concatenate([np.asarray(t, dtype=np.float32) for t in sentences])
            for sentences in layers_of_sentences
        ]
        manifest = DumpManifest(
            model_id=model_id,
            language=language,
            granularity="token",
            layer_count=len(layers),
            sentence_count=len(token_counts),
            dim=dim,
            corpus_id=corpus_id,
            token_counts=token_counts,
        )
        return write_dump(manifest, layers, tmp_path / (stem or language))

    return _make
