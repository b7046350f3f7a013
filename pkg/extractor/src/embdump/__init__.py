"""Embedding dump extractor for causal language models.

Runs a Hugging Face causal LM over a parallel corpus and writes one dump
per language in the scoring toolkit's wire format (JSON manifest beside a
raw little-endian float32 payload): hidden states of every layer including
the embedding output, either token-level or pre-pooled to sentence level.
"""

from embdump.corpus import CorpusError, CorpusSpec, load_parallel
from embdump.extract import ExtractionError, extract

__version__ = "0.1.0"
