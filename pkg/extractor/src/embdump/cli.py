"""Command-line entry point: run a model over a parallel corpus, emit dumps."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from embdump.corpus import CorpusError, CorpusSpec, load_parallel
from embdump.extract import ExtractionError, extract_many
from embdump.pooling import METHODS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embdump",
        description="Extract per-layer embedding dumps from a causal LM over a parallel corpus.",
    )
    parser.add_argument("--model", required=True, help="Hugging Face model id or local path")
    parser.add_argument("--corpus", required=True, help="directory with one <label>.txt per language")
    parser.add_argument("--languages", nargs="+", required=True, metavar="LABEL")
    parser.add_argument("--limit", type=int, default=100,
                        help="sentences per language (FLORES-style 100, Bible-style 103)")
    parser.add_argument("--granularity", choices=("sentence", "token"), default="sentence")
    parser.add_argument("--pooling", choices=METHODS, default="weighted_average",
                        help="sentence pooling applied when granularity=sentence")
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--corpus-id",
                        help="manifest corpus id (default: <corpus dir name>-first<limit>)")
    parser.add_argument("--out", required=True, help="output dump directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    corpus_dir = Path(args.corpus)
    corpus_id = args.corpus_id or f"{corpus_dir.name}-first{args.limit}"
    try:
        corpus = load_parallel(
            CorpusSpec(
                directory=corpus_dir,
                languages=tuple(args.languages),
                sentence_limit=args.limit,
            )
        )
        written = extract_many(
            args.model,
            corpus,
            corpus_id=corpus_id,
            out_dir=args.out,
            granularity=args.granularity,
            pooling=args.pooling,
            batch_size=args.batch_size,
            device=args.device,
        )
    except (CorpusError, ExtractionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for label in sorted(written):
        print(f"{label}\t{written[label]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
