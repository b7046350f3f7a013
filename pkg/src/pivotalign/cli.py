"""Command-line front end tying dumps, scoring, statistics, and reports.

Subcommands
-----------
score       score every language dump in a directory against the pivot dump
correlate   Pearson correlation of scores against task accuracies, plus an
            OLS fit on adjusted scores
estimate    convert adjusted scores to task-performance estimates via a line
robustness  analytic probability of reaching a score by chance
synth       generate synthetic dumps with controlled alignment
report      leaderboard, per-layer curves, and coverage buckets

Exit codes: 0 success, 2 usage (argparse), 3 validation or input error,
4 partial failure (some languages scored, some rejected). Every command is
deterministic given identical inputs and seed; file outputs carry a header
block with the tool version and the effective configuration, never a
timestamp.

The default dump directory may be set with the ``PIVOTALIGN_DUMP_DIR``
environment variable. Task-result files are UTF-8 text with one record per
line, ``language_label<TAB>accuracy``; the pivot-language row doubles as the
English accuracy used for score adjustment. Layer indices count stored
hidden-state levels from 0 (the embedding-layer output).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from pivotalign import __version__, stats, synth
from pivotalign.alignment import AlignmentProfile, language_alignment
from pivotalign.dumpio import DumpFormatError, read_dump, scan_dump_dir
from pivotalign.pooling import METHODS
from pivotalign.report import Table, coverage, layer_curves, leaderboard

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_PARTIAL = 4

ENV_DUMP_DIR = "PIVOTALIGN_DUMP_DIR"
DEFAULT_PIVOT = "eng_Latn"


class CommandError(Exception):
    """Input or validation failure; maps to exit code 3."""


def _header(command: str, config: dict) -> dict:
    return {
        "tool": "pivotalign",
        "version": __version__,
        "command": command,
        "config": config,
    }


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_csv(path: Path, table, command: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"# tool=pivotalign version={__version__} command={command}\n"
    path.write_text(header + table.to_csv(), encoding="utf-8")


def _parse_subset(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        subset = tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise CommandError(f"invalid layer subset {text!r}: {exc}") from exc
    if not subset:
        raise CommandError("layer subset must name at least one layer")
    return subset


def _read_task_file(path: Path) -> dict[str, float]:
    if not path.exists():
        raise CommandError(f"task file not found: {path}")
    table: dict[str, float] = {}
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise CommandError(
                f"{path}:{number}: expected 'language_label<TAB>accuracy', got {raw!r}"
            )
        label, text_value = parts[0].strip(), parts[1].strip()
        try:
            value = float(text_value)
        except ValueError as exc:
            raise CommandError(f"{path}:{number}: bad accuracy {text_value!r}") from exc
        if not 0.0 <= value <= 1.0:
            raise CommandError(f"{path}:{number}: accuracy {value} outside [0, 1]")
        if label in table:
            raise CommandError(f"{path}:{number}: duplicate language {label}")
        table[label] = value
    if not table:
        raise CommandError(f"{path}: no task records found")
    return table


# --- score -------------------------------------------------------------


def cmd_score(args) -> int:
    dump_dir = args.dumps or os.environ.get(ENV_DUMP_DIR)
    if not dump_dir:
        raise CommandError(f"no dump directory: pass --dumps or set {ENV_DUMP_DIR}")
    dump_dir = Path(dump_dir)
    if not dump_dir.is_dir():
        raise CommandError(f"dump directory not found: {dump_dir}")

    subset = _parse_subset(args.subset)
    paths = scan_dump_dir(dump_dir)
    if args.pivot not in paths:
        raise CommandError(f"pivot dump {args.pivot!r} not found in {dump_dir}")
    if len(paths) < 2:
        raise CommandError("no comparison languages: directory holds only the pivot dump")

    try:
        pivot_dump = read_dump(paths[args.pivot])
    except DumpFormatError as exc:
        raise CommandError(f"pivot dump is invalid: {exc}") from exc

    profiles: dict[str, AlignmentProfile] = {}
    failures: dict[str, str] = {}
    for label in sorted(paths):
        if label == args.pivot:
            continue
        try:
            dump = read_dump(paths[label])
            profiles[label] = language_alignment(
                pivot_dump,
                dump,
                pooling=args.pooling,
                layer_pool=args.layer_pool,
                subset=subset,
            )
        except (DumpFormatError, ValueError) as exc:
            failures[label] = str(exc)

    if not profiles:
        details = "; ".join(f"{label}: {message}" for label, message in failures.items())
        raise CommandError(f"no language could be scored: {details}")

    config = {
        "dump_dir": str(dump_dir),
        "pivot": args.pivot,
        "pooling": args.pooling,
        "layer_pool": args.layer_pool,
        "layer_subset": list(subset) if subset else None,
        "model_id": pivot_dump.manifest.model_id,
        "corpus_id": pivot_dump.manifest.corpus_id,
        "seed": None,
    }
    payload = _header("score", config)
    payload["languages"] = {
        label: {
            "per_layer": list(profile.per_layer_scores),
            "pooled_mean": profile.pooled_mean,
            "pooled_max": profile.pooled_max,
            "subset_score": profile.subset_score,
            "degenerate": (
                {str(layer): list(rows) for layer, rows in profile.degenerate.items()}
                if profile.degenerate
                else None
            ),
        }
        for label, profile in profiles.items()
    }
    payload["failures"] = failures
    _write_json(Path(args.out), payload)

    print(f"scored {len(profiles)} language(s) against {args.pivot} -> {args.out}")
    if failures:
        for label, message in sorted(failures.items()):
            print(f"skipped {label}: {message}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


# --- correlate ----------------------------------------------------------


def _load_score_file(path: Path) -> dict:
    if not path.exists():
        raise CommandError(f"score file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CommandError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "languages" not in payload:
        raise CommandError(f"{path}: not a score file (missing 'languages')")
    return payload


def _pooled_scores(payload: dict, layer_pool: str, path: Path) -> dict[str, float]:
    key = {"mean": "pooled_mean", "max": "pooled_max", "subset": "subset_score"}[layer_pool]
    scores = {}
    for label, record in payload["languages"].items():
        value = record.get(key)
        if value is None:
            raise CommandError(
                f"{path}: no {key} recorded for {label} (was score run with --subset?)"
            )
        scores[label] = float(value)
    return scores


def cmd_correlate(args) -> int:
    score_path = Path(args.scores)
    payload = _load_score_file(score_path)
    pivot = payload.get("config", {}).get("pivot", DEFAULT_PIVOT)
    scores = _pooled_scores(payload, args.layer_pool, score_path)

    tasks = _read_task_file(Path(args.tasks))
    english = args.english if args.english is not None else tasks.get(pivot)
    if english is None:
        raise CommandError(
            f"English accuracy unknown: pass --english or add a {pivot} row to the task file"
        )
    if not 0.0 <= english <= 1.0:
        raise CommandError(f"--english must lie in [0, 1], got {english}")

    common = sorted(set(scores) & set(tasks))
    if not args.include_pivot and pivot in common:
        common.remove(pivot)
    if len(common) < 3:
        raise CommandError(
            f"need at least 3 common languages, found {len(common)}: {common}"
        )

    adjusted = stats.adjust_scores({label: scores[label] for label in common}, english)
    pairs = [(adjusted[label], tasks[label]) for label in common]
    correlation = stats.pearson(pairs, labels=common)
    fit = stats.fit_line(pairs)

    config = {
        "scores_file": str(score_path),
        "tasks_file": str(args.tasks),
        "layer_pool": args.layer_pool,
        "english_score": english,
        "include_pivot": args.include_pivot,
        "pivot": pivot,
        "seed": None,
    }
    out = _header("correlate", config)
    out.update(
        {
            "r": correlation.r,
            "p_value": correlation.p_value,
            "sample_size": correlation.sample_size,
            "languages": common,
            "pairs": [[label, x, y] for label, x, y in correlation.pairs],
            "fit": {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "residual_sum_squares": fit.residual_sum_squares,
            },
        }
    )
    _write_json(Path(args.out), out)
    print(
        f"r={correlation.r:.4f} p={correlation.p_value:.3g} "
        f"n={correlation.sample_size} slope={fit.slope:.4f} "
        f"intercept={fit.intercept:.4f} -> {args.out}"
    )
    return EXIT_OK


# --- estimate -----------------------------------------------------------


def _estimate_fit(args) -> stats.LinearFit:
    sources = sum(
        1
        for chosen in (args.fit_from is not None, args.ideal_choices is not None,
                       args.slope is not None or args.intercept is not None)
        if chosen
    )
    if sources != 1:
        raise CommandError(
            "pick exactly one line source: --fit-from, --ideal-choices, or --slope/--intercept"
        )
    if args.fit_from is not None:
        path = Path(args.fit_from)
        if not path.exists():
            raise CommandError(f"fit file not found: {path}")
        payload = json.loads(path.read_text(encoding="utf-8"))
        fit = payload.get("fit")
        if not fit:
            raise CommandError(f"{path}: no 'fit' block (expected a correlate output)")
        return stats.LinearFit(
            slope=float(fit["slope"]),
            intercept=float(fit["intercept"]),
            residual_sum_squares=float(fit.get("residual_sum_squares", 0.0)),
        )
    if args.ideal_choices is not None:
        try:
            return stats.ideal_line(args.ideal_choices)
        except ValueError as exc:
            raise CommandError(str(exc)) from exc
    if args.slope is None or args.intercept is None:
        raise CommandError("--slope and --intercept must be given together")
    return stats.LinearFit(
        slope=args.slope, intercept=args.intercept, residual_sum_squares=0.0
    )


def cmd_estimate(args) -> int:
    fit = _estimate_fit(args)
    for x in args.adjusted_score:
        prediction = stats.predict_performance(fit, x)
        flag = "clamped" if prediction.clamped else "ok"
        print(f"{x!r}\t{prediction.value!r}\t{flag}")
    return EXIT_OK


# --- robustness ---------------------------------------------------------


def cmd_robustness(args) -> int:
    try:
        probability = stats.random_baseline(args.n, args.k)
    except ValueError as exc:
        raise CommandError(str(exc)) from exc
    print(f"{probability:.6g}")
    return EXIT_OK


# --- synth --------------------------------------------------------------


def _parse_pairs(pairs: list[str]) -> dict[str, float]:
    languages: dict[str, float] = {}
    for item in pairs:
        label, _, sigma_text = item.partition("=")
        if not sigma_text:
            raise CommandError(f"bad --pair {item!r}: expected LABEL=SIGMA")
        try:
            sigma = float(sigma_text)
        except ValueError as exc:
            raise CommandError(f"bad --pair {item!r}: {exc}") from exc
        if sigma < 0:
            raise CommandError(f"bad --pair {item!r}: sigma must be >= 0")
        if label in languages:
            raise CommandError(f"duplicate language in --pair: {label}")
        languages[label] = sigma
    return languages


def cmd_synth(args) -> int:
    languages = _parse_pairs(args.pair)
    try:
        written = synth.write_synthetic_dumps(
            args.out,
            languages,
            n=args.n,
            dim=args.dim,
            seed=args.seed,
            pivot_label=args.pivot,
            layer_count=args.layers,
            pooling=args.pooling,
        )
    except (DumpFormatError, ValueError) as exc:
        raise CommandError(str(exc)) from exc
    for label in sorted(written):
        print(f"{label}\t{written[label]}")
    return EXIT_OK


# --- report -------------------------------------------------------------


def cmd_report(args) -> int:
    out_dir = Path(args.out)
    layer_pool = args.layer_pool

    models: dict[str, dict] = {}
    for item in args.scores:
        path = Path(item)
        payload = _load_score_file(path)
        if not payload["languages"]:
            raise CommandError(f"{path}: no languages")
        model_id = payload.get("config", {}).get("model_id") or path.stem
        if model_id in models:
            raise CommandError(f"duplicate model id {model_id!r} across score files")
        models[model_id] = {"path": path, "payload": payload}

    english = args.english
    if args.tasks is not None:
        tasks = _read_task_file(Path(args.tasks))
        if english is None:
            pivot = next(iter(models.values()))["payload"].get("config", {}).get(
                "pivot", DEFAULT_PIVOT
            )
            english = tasks.get(pivot)

    cells: dict[str, dict[str, float]] = {}
    for model_id, record in models.items():
        pooled = _pooled_scores(record["payload"], layer_pool, record["path"])
        if english is not None:
            pooled = stats.adjust_scores(pooled, english)
        cells[model_id] = pooled

    board = leaderboard(cells)
    _write_csv(out_dir / "leaderboard.csv", board, "report")
    _write_json(
        out_dir / "leaderboard.json",
        {
            **_header(
                "report",
                {
                    "scores": sorted(str(Path(p)) for p in args.scores),
                    "layer_pool": layer_pool,
                    "english_score": english,
                    "seed": None,
                },
            ),
            "columns": list(board.columns),
            "rows": [list(row) for row in board.rows],
        },
    )
    written = ["leaderboard.csv", "leaderboard.json"]

    for model_id, record in sorted(models.items()):
        profiles = [
            AlignmentProfile(
                language=label,
                pivot=record["payload"].get("config", {}).get("pivot", DEFAULT_PIVOT),
                per_layer_scores=tuple(entry["per_layer"]),
                pooled_mean=entry["pooled_mean"],
                pooled_max=entry["pooled_max"],
            )
            for label, entry in record["payload"]["languages"].items()
        ]
        curves = layer_curves(profiles)
        name = f"curves_{model_id.replace('/', '_')}.csv"
        _write_csv(out_dir / name, curves, "report")
        written.append(name)

        if english is not None:
            report = coverage(cells[model_id])
            table = Table(
                columns=("language", "adjusted_score", "bucket"),
                rows=tuple(
                    (entry.language, entry.adjusted_score, entry.bucket)
                    for entry in report.entries
                ),
            )
            name = f"coverage_{model_id.replace('/', '_')}.csv"
            _write_csv(out_dir / name, table, "report")
            written.append(name)

    for name in written:
        print(f"{out_dir / name}")
    return EXIT_OK


# --- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pivotalign",
        description="Cross-lingual alignment scoring and downstream-performance estimation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score language dumps against the pivot dump")
    p.add_argument("--dumps", help=f"dump directory (default: ${ENV_DUMP_DIR})")
    p.add_argument("--pivot", default=DEFAULT_PIVOT, help="pivot language label")
    p.add_argument("--pooling", choices=METHODS, default="weighted_average",
                   help="token pooling for token dumps / declared pooling of sentence dumps")
    p.add_argument("--layer-pool", choices=("mean", "max"), default="mean",
                   help="pooling method used for the optional layer subset score")
    p.add_argument("--subset", help="comma-separated layer indices, e.g. 5,10,15,20,25")
    p.add_argument("--out", required=True, help="output score file (JSON)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("correlate", help="correlate scores with task accuracies")
    p.add_argument("--scores", required=True, help="score file from `score`")
    p.add_argument("--tasks", required=True, help="task file: label<TAB>accuracy per line")
    p.add_argument("--english", type=float,
                   help="English task accuracy (default: pivot row of the task file)")
    p.add_argument("--layer-pool", choices=("mean", "max", "subset"), default="mean")
    p.add_argument("--include-pivot", action="store_true",
                   help="keep the pivot language as a data point")
    p.add_argument("--out", required=True, help="output correlation report (JSON)")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("estimate", help="estimate task performance from adjusted scores")
    p.add_argument("adjusted_score", type=float, nargs="+")
    p.add_argument("--slope", type=float)
    p.add_argument("--intercept", type=float)
    p.add_argument("--ideal-choices", type=int,
                   help="use the ideal line for an m-way multiple-choice task")
    p.add_argument("--fit-from", help="read the line from a correlate output file")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("robustness", help="chance probability of alignment score >= k/n")
    p.add_argument("n", type=int, help="number of parallel sentences")
    p.add_argument("k", type=int, help="number of dominant diagonal entries")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("synth", help="generate synthetic dumps with controlled alignment")
    p.add_argument("--out", required=True, help="output dump directory")
    p.add_argument("--n", type=int, default=100, help="sentences per dump")
    p.add_argument("--dim", type=int, default=64, help="embedding dimension")
    p.add_argument("--layers", type=int, default=1, help="stored hidden-state levels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pivot", default=DEFAULT_PIVOT)
    p.add_argument("--pooling", choices=METHODS, default="weighted_average",
                   help="pooling tag declared in the synthetic manifests")
    p.add_argument("--pair", action="append", required=True, metavar="LABEL=SIGMA",
                   help="language label and noise scale; repeatable")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", help="emit leaderboard, curves, and coverage tables")
    p.add_argument("--scores", action="append", required=True,
                   help="score file; repeatable for multi-model leaderboards")
    p.add_argument("--layer-pool", choices=("mean", "max", "subset"), default="mean")
    p.add_argument("--tasks", help="task file supplying the English accuracy")
    p.add_argument("--english", type=float,
                   help="English accuracy used to adjust scores (overrides --tasks)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DumpFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
