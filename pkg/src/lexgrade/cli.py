"""Command-line pipeline: fetch, analyze, stats, report.

    lexgrade fetch   --manifest corpus.csv --cache cache/
    lexgrade analyze --manifest corpus.csv --texts cache/ --out results.csv
    lexgrade stats   --results results.csv --out stats.csv
    lexgrade report  --results results.csv --out by_year.csv

Outputs are deterministic for fixed inputs: rerunning a command writes
byte-identical files. CSV is the default format; --format json carries
the same logical content. Result files are self-describing (tool
version and linsear mode ride along as comment lines / a meta object)
so downstream stats stay auditable. Diagnostics go to stderr only.

Exit codes: 0 success, 1 some documents failed, 2 configuration or
input-format errors. Network settings honour environment overrides
(LEXGRADE_BASE_URL, LEXGRADE_DELAY_MS, LEXGRADE_CONCURRENCY,
LEXGRADE_RETRIES, LEXGRADE_USER_AGENT); flags win over environment.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .corpus import analyze_corpus, directory_resolver, load_manifest
from .errors import (
    CorpusAnalysisError,
    LexgradeError,
    ManifestError,
    ResultsFormatError,
)
from .fetcher import DEFAULT_BASE_URL, FetchSettings, fetch_all
from .indices import LINSEAR_MODES
from .stats import QUANTILE_CONVENTION, per_year_aggregate

ANALYZE_COLUMNS = (
    "id",
    "doc_type",
    "year",
    "domain",
    "sentence_count",
    "word_count",
    "syllable_count",
    "polysyllable_count",
    "character_count",
    "letter_count",
    "easy_word_count",
    "hard_word_count",
    "g1_flesch_kincaid",
    "g2_smog",
    "g3_ari",
    "g4_coleman_liau",
    "g5_linsear",
    "sum_variable",
)

_INT_COLUMNS = frozenset(
    c
    for c in ANALYZE_COLUMNS
    if c not in ("id", "doc_type", "domain", "sum_variable")
)


def _env(name: str, fallback: str) -> str:
    return os.environ.get(f"LEXGRADE_{name}", fallback)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexgrade",
        description="Readability grading and corpus statistics for legal texts.",
    )
    parser.add_argument("--version", action="version", version=f"lexgrade {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fetch = sub.add_parser("fetch", help="download manifest documents into a cache")
    fetch.add_argument("--manifest", required=True)
    fetch.add_argument("--cache", required=True)
    fetch.add_argument("--base-url", default=_env("BASE_URL", DEFAULT_BASE_URL))
    fetch.add_argument("--delay-ms", default=_env("DELAY_MS", "1000"))
    fetch.add_argument("--concurrency", default=_env("CONCURRENCY", "1"))
    fetch.add_argument("--retries", default=_env("RETRIES", "3"))
    fetch.set_defaults(func=_run_fetch)

    analyze = sub.add_parser("analyze", help="grade every document in a manifest")
    analyze.add_argument("--manifest", required=True)
    group = analyze.add_mutually_exclusive_group(required=True)
    group.add_argument("--texts", help="directory of <id>.txt files")
    group.add_argument("--cache", help="fetch cache directory (same layout)")
    analyze.add_argument("--out", required=True)
    analyze.add_argument("--format", choices=("csv", "json"), default="csv")
    analyze.add_argument(
        "--linsear-mode", choices=LINSEAR_MODES, default="windowed"
    )
    analyze.set_defaults(func=_run_analyze)

    stats = sub.add_parser("stats", help="corpus statistics of an analyze results file")
    stats.add_argument("--results", required=True)
    stats.add_argument("--out", required=True)
    stats.add_argument("--format", choices=("csv", "json"), default="csv")
    stats.set_defaults(func=_run_stats)

    report = sub.add_parser("report", help="per-year sum-variable plot data")
    report.add_argument("--results", required=True)
    report.add_argument("--out", required=True)
    report.add_argument("--format", choices=("csv", "json"), default="csv")
    report.set_defaults(func=_run_report)

    return parser


def _fail(message: str) -> None:
    print(f"lexgrade: error: {message}", file=sys.stderr)


def _int_setting(name: str, value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise LexgradeError(f"{name} must be an integer, got '{value}'") from None
    if number < 0:
        raise LexgradeError(f"{name} must be non-negative, got {number}")
    return number


def _run_fetch(args: argparse.Namespace) -> int:
    records = load_manifest(args.manifest)
    settings = FetchSettings(
        base_url=args.base_url,
        delay_ms=_int_setting("--delay-ms", args.delay_ms),
        concurrency=max(1, _int_setting("--concurrency", args.concurrency)),
        retries=_int_setting("--retries", args.retries),
        user_agent=_env("USER_AGENT", FetchSettings().user_agent),
    )
    results = fetch_all(records, args.cache, settings)
    failed = [r for r in results if not r.ok]
    for result in results:
        line = f"{result.id}: {result.status.value}"
        if result.detail:
            line += f" ({result.detail})"
        print(line, file=sys.stderr)
    print(
        f"fetched {sum(r.status.value == 'FetchedFresh' for r in results)} fresh, "
        f"{sum(r.status.value == 'FromCache' for r in results)} cached, "
        f"{len(failed)} failed",
        file=sys.stderr,
    )
    return 1 if failed else 0


def _grade_row(row) -> dict:
    record, m, g = row.record, row.metrics, row.grades
    return {
        "id": record.id,
        "doc_type": record.doc_type.value,
        "year": record.year,
        "domain": record.domain.value,
        "sentence_count": m.sentence_count,
        "word_count": m.word_count,
        "syllable_count": m.syllable_count,
        "polysyllable_count": m.polysyllable_count,
        "character_count": m.character_count,
        "letter_count": m.letter_count,
        "easy_word_count": m.easy_word_count,
        "hard_word_count": m.hard_word_count,
        "g1_flesch_kincaid": g.g1_flesch_kincaid,
        "g2_smog": g.g2_smog,
        "g3_ari": g.g3_ari,
        "g4_coleman_liau": g.g4_coleman_liau,
        "g5_linsear": g.g5_linsear,
        "sum_variable": g.sum_variable,
    }


def _write_table(path: str, fmt: str, meta: dict, columns, rows: list[dict]) -> None:
    if fmt == "json":
        payload = {"meta": meta, "rows": rows}
        Path(path).write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
        return
    buffer = io.StringIO()
    for key, value in meta.items():
        buffer.write(f"# {key}: {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    Path(path).write_text(buffer.getvalue(), encoding="utf-8")


def _run_analyze(args: argparse.Namespace) -> int:
    records = load_manifest(args.manifest)
    texts_dir = args.texts or args.cache
    if not Path(texts_dir).is_dir():
        raise ManifestError(f"texts directory '{texts_dir}' does not exist")

    try:
        report = analyze_corpus(
            records, directory_resolver(texts_dir), mode=args.linsear_mode
        )
    except CorpusAnalysisError as exc:
        _fail(str(exc))
        return 1

    meta = {"lexgrade_version": __version__, "linsear_mode": args.linsear_mode}
    rows = [_grade_row(r) for r in report.rows]
    _write_table(args.out, args.format, meta, ANALYZE_COLUMNS, rows)

    for failure in report.failures:
        print(f"FAIL {failure.id}: {failure.reason}", file=sys.stderr)
    print(
        f"analyzed {len(report.rows)} of {len(records)} documents",
        file=sys.stderr,
    )
    return 1 if report.failures else 0


def _read_results(path: str) -> tuple[dict, list[dict]]:
    """Read an analyze results file (CSV or JSON) back into typed rows."""
    p = Path(path)
    if not p.exists():
        raise ResultsFormatError(f"results file '{path}' does not exist")
    if p.suffix.lower() == ".json":
        try:
            payload = json.loads(p.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise ResultsFormatError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(payload, dict) or "rows" not in payload:
            raise ResultsFormatError(f"{path}: expected an object with 'rows'")
        meta = payload.get("meta", {})
        raw_rows = payload["rows"]
        where = [f"{path} row {i}" for i in range(1, len(raw_rows) + 1)]
    else:
        meta = {}
        header_line = None
        data_lines: list[str] = []
        line_numbers: list[int] = []
        with open(p, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.rstrip("\n")
                if stripped.startswith("#"):
                    body = stripped.lstrip("#").strip()
                    if ":" in body:
                        key, _, value = body.partition(":")
                        meta[key.strip()] = value.strip()
                    continue
                if header_line is None:
                    header_line = stripped
                    continue
                if stripped:
                    data_lines.append(stripped)
                    line_numbers.append(lineno)
        if header_line is None:
            raise ResultsFormatError(f"{path}: no header row")
        header = next(csv.reader([header_line]))
        if tuple(header) != ANALYZE_COLUMNS:
            raise ResultsFormatError(
                f"{path}: header does not match an analyze results file"
            )
        raw_rows = []
        where = []
        for lineno, line in zip(line_numbers, data_lines):
            fields = next(csv.reader([line]))
            if len(fields) != len(ANALYZE_COLUMNS):
                raise ResultsFormatError(
                    f"{path} line {lineno}: expected {len(ANALYZE_COLUMNS)} "
                    f"fields, got {len(fields)}"
                )
            raw_rows.append(dict(zip(ANALYZE_COLUMNS, fields)))
            where.append(f"{path} line {lineno}")

    rows = []
    for raw, location in zip(raw_rows, where):
        if not isinstance(raw, dict) or set(raw) != set(ANALYZE_COLUMNS):
            raise ResultsFormatError(f"{location}: wrong columns")
        typed = dict(raw)
        for column in ANALYZE_COLUMNS:
            value = raw[column]
            try:
                if column in _INT_COLUMNS:
                    typed[column] = int(value)
                elif column == "sum_variable":
                    typed[column] = float(value)
            except (TypeError, ValueError):
                raise ResultsFormatError(
                    f"{location}: column '{column}' has non-numeric value {value!r}"
                ) from None
        rows.append(typed)
    return meta, rows


def _summary_payload(rows: list[dict]) -> dict:
    from .stats import INDEX_LABELS, describe

    columns = {
        "flesch_kincaid": [r["g1_flesch_kincaid"] for r in rows],
        "smog": [r["g2_smog"] for r in rows],
        "ari": [r["g3_ari"] for r in rows],
        "coleman_liau": [r["g4_coleman_liau"] for r in rows],
        "linsear": [r["g5_linsear"] for r in rows],
        "sum_variable": [r["sum_variable"] for r in rows],
    }
    summary = {}
    for name, column in columns.items():
        s = describe(column)
        summary[name] = {
            "n": s.n,
            "mean": s.mean,
            "standard_deviation": s.standard_deviation,
            "median": s.median,
            "q1": s.q1,
            "q3": s.q3,
            "min": s.min,
            "max": s.max,
        }
    return summary


def _stats_payload(meta_in: dict, rows: list[dict]) -> dict:
    from .errors import StatisticsError
    from .indices import GradeVector
    from .stats import correlation_matrix, cronbach_alpha

    payload: dict = {
        "meta": {
            "tool_version": __version__,
            "linsear_mode": meta_in.get("linsear_mode", "unspecified"),
            "quantile_convention": QUANTILE_CONVENTION,
            "n_documents": len(rows),
        },
        "summary": _summary_payload(rows),
        "correlations": None,
        "correlations_note": None,
        "alpha": None,
        "alpha_note": None,
    }

    if len(rows) < 2:
        payload["correlations_note"] = "n < 2"
        payload["alpha_note"] = "n < 2"
        return payload

    grades = [
        GradeVector(
            g1_flesch_kincaid=r["g1_flesch_kincaid"],
            g2_smog=r["g2_smog"],
            g3_ari=r["g3_ari"],
            g4_coleman_liau=r["g4_coleman_liau"],
            g5_linsear=r["g5_linsear"],
            sum_variable=r["sum_variable"],
        )
        for r in rows
    ]
    try:
        matrix = correlation_matrix(grades)
        payload["correlations"] = {
            "labels": list(matrix.labels),
            "values": [list(row) for row in matrix.values],
        }
    except StatisticsError as exc:
        payload["correlations_note"] = str(exc)
    try:
        payload["alpha"] = cronbach_alpha(
            [
                [g.g1_flesch_kincaid for g in grades],
                [g.g2_smog for g in grades],
                [g.g3_ari for g in grades],
            ]
        )
    except StatisticsError as exc:
        payload["alpha_note"] = str(exc)
    return payload


def _write_stats(path: str, fmt: str, payload: dict) -> None:
    if fmt == "json":
        Path(path).write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
        return
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("section", "name", "field", "value"))
    for key, value in payload["meta"].items():
        writer.writerow(("meta", key, "", value))
    for index, cells in payload["summary"].items():
        for stat, value in cells.items():
            writer.writerow(("summary", index, stat, value))
    if payload["correlations"] is not None:
        labels = payload["correlations"]["labels"]
        for label, row in zip(labels, payload["correlations"]["values"]):
            for other, value in zip(labels, row):
                writer.writerow(("correlations", label, other, value))
    if payload["correlations_note"]:
        writer.writerow(("note", "correlations", "", payload["correlations_note"]))
    if payload["alpha"] is not None:
        writer.writerow(("alpha", "fk_smog_ari", "", payload["alpha"]))
    if payload["alpha_note"]:
        writer.writerow(("note", "alpha", "", payload["alpha_note"]))
    Path(path).write_text(buffer.getvalue(), encoding="utf-8")


def _run_stats(args: argparse.Namespace) -> int:
    meta, rows = _read_results(args.results)
    if not rows:
        raise ResultsFormatError(f"{args.results}: no result rows")
    payload = _stats_payload(meta, rows)
    _write_stats(args.out, args.format, payload)
    print(f"stats over {len(rows)} documents written to {args.out}", file=sys.stderr)
    return 0


def _run_report(args: argparse.Namespace) -> int:
    meta, rows = _read_results(args.results)
    aggregate = per_year_aggregate([(r["year"], r["sum_variable"]) for r in rows])
    out_rows = [
        {"year": a.year, "count": a.count, "mean": a.mean, "median": a.median}
        for a in aggregate
    ]
    out_meta = {"lexgrade_version": __version__, "value": "sum_variable"}
    _write_table(
        args.out, args.format, out_meta, ("year", "count", "mean", "median"), out_rows
    )
    print(f"{len(out_rows)} year rows written to {args.out}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LexgradeError as exc:
        _fail(str(exc))
        return 2
    except OSError as exc:
        _fail(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
