"""Corpus model and batch analysis.

A corpus is described by a manifest (CSV or JSON) with one row per
document: id, doc_type, year, title, domain, source. Texts are resolved
through a pluggable callable so the same pipeline works on a local
directory or a fetch cache. Documents that fail are reported in a
failures list, never silently dropped: rows + failures always add up to
the manifest length.
"""

from __future__ import annotations

import csv
import json
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import (
    CorpusAnalysisError,
    DegenerateTextError,
    ManifestError,
    StatisticsError,
)
from .indices import GradeVector, grade_metrics
from .segmenter import TextMetrics, compute_metrics
from .stats import (
    CorrelationMatrix,
    SummaryStats,
    YearAggregate,
    correlation_matrix,
    cronbach_alpha,
    describe,
    per_year_aggregate,
)

__all__ = [
    "DocType",
    "Domain",
    "DocumentRecord",
    "ReportRow",
    "Failure",
    "CorpusReport",
    "MANIFEST_FIELDS",
    "load_manifest",
    "clean_text",
    "analyze_document",
    "analyze_corpus",
    "directory_resolver",
]


class DocType(Enum):
    """Document types admitted to the corpus; anything else is rejected."""

    DIRECTIVE = "Directive"
    REGULATION = "Regulation"
    DECISION = "Decision"
    COM = "COM"
    SWD = "SWD"
    RECOMMENDATION = "Recommendation"
    JOIN = "JOIN"


class Domain(Enum):
    """The five digital-single-market policy domains."""

    GENERAL_RULES = "GeneralRules"
    ELECTRONIC_COMMUNICATIONS = "ElectronicCommunications"
    PERSONAL_DATA_PRIVACY = "PersonalDataPrivacy"
    COPYRIGHT_AUDIOVISUAL = "CopyrightAudiovisual"
    DATA_ECONOMY_PROTECTION = "DataEconomyProtection"


MANIFEST_FIELDS = ("id", "doc_type", "year", "title", "domain", "source")

_DOC_TYPES = {member.value: member for member in DocType}
_DOMAINS = {member.value: member for member in Domain}


@dataclass(frozen=True)
class DocumentRecord:
    id: str
    doc_type: DocType
    year: int
    title: str
    domain: Domain
    source: str


@dataclass(frozen=True)
class ReportRow:
    record: DocumentRecord
    metrics: TextMetrics
    grades: GradeVector


@dataclass(frozen=True)
class Failure:
    id: str
    reason: str


@dataclass
class CorpusReport:
    """Per-document results plus the corpus-level statistics block.

    correlations and alpha are None when they cannot be computed; the
    matching *_note fields say why (e.g. "n < 2").
    """

    rows: list[ReportRow]
    failures: list[Failure]
    summary: dict[str, SummaryStats]
    correlations: CorrelationMatrix | None
    correlations_note: str | None
    alpha: float | None
    alpha_note: str | None
    by_year: list[YearAggregate]
    linsear_mode: str = "windowed"
    notes: list[str] = field(default_factory=list)


def _parse_record(raw: dict, where: str, seen_ids: set[str]) -> DocumentRecord:
    missing = [k for k in MANIFEST_FIELDS if k not in raw or raw[k] is None]
    if missing:
        raise ManifestError(f"{where}: missing field(s) {', '.join(missing)}")
    extra = [k for k in raw if k not in MANIFEST_FIELDS]
    if extra:
        raise ManifestError(f"{where}: unknown field(s) {', '.join(sorted(extra))}")

    doc_id = str(raw["id"]).strip()
    if not doc_id:
        raise ManifestError(f"{where}: id must be non-empty")
    if doc_id in seen_ids:
        raise ManifestError(f"{where}: duplicate id '{doc_id}'")

    doc_type_raw = str(raw["doc_type"]).strip()
    if doc_type_raw not in _DOC_TYPES:
        allowed = ", ".join(m.value for m in DocType)
        raise ManifestError(
            f"{where}: doc_type '{doc_type_raw}' is not admitted; "
            f"the corpus accepts only: {allowed}"
        )

    domain_raw = str(raw["domain"]).strip()
    if domain_raw not in _DOMAINS:
        allowed = ", ".join(m.value for m in Domain)
        raise ManifestError(
            f"{where}: domain '{domain_raw}' is unknown; expected one of: {allowed}"
        )

    year_raw = str(raw["year"]).strip()
    if not re.fullmatch(r"\d{4}", year_raw):
        raise ManifestError(f"{where}: year '{year_raw}' is not a 4-digit integer")

    return DocumentRecord(
        id=doc_id,
        doc_type=_DOC_TYPES[doc_type_raw],
        year=int(year_raw),
        title=str(raw["title"]),
        domain=_DOMAINS[domain_raw],
        source=str(raw["source"]),
    )


def load_manifest(path: str | Path) -> list[DocumentRecord]:
    """Load and validate a manifest file (.csv or .json, UTF-8).

    CSV needs exactly the header id,doc_type,year,title,domain,source;
    JSON is a list of objects with the same keys. Errors carry the row
    number (CSV rows count from 2, after the header).
    """
    path = Path(path)
    suffix = path.suffix.lower()
    records: list[DocumentRecord] = []
    seen: set[str] = set()

    if suffix == ".csv":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise ManifestError(f"{path}: empty manifest")
            if sorted(reader.fieldnames) != sorted(MANIFEST_FIELDS):
                raise ManifestError(
                    f"{path}: header must be exactly {', '.join(MANIFEST_FIELDS)}"
                    f" (got {', '.join(reader.fieldnames)})"
                )
            for i, raw in enumerate(reader, start=2):
                if None in raw or None in raw.values():
                    raise ManifestError(f"{path} row {i}: wrong number of fields")
                record = _parse_record(raw, f"{path} row {i}", seen)
                seen.add(record.id)
                records.append(record)
    elif suffix == ".json":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(data, list):
            raise ManifestError(f"{path}: expected a JSON list of objects")
        for i, raw in enumerate(data, start=1):
            if not isinstance(raw, dict):
                raise ManifestError(f"{path} entry {i}: expected an object")
            record = _parse_record(raw, f"{path} entry {i}", seen)
            seen.add(record.id)
            records.append(record)
    else:
        raise ManifestError(f"{path}: unsupported manifest format '{suffix}'")

    return records


# Mastheads and page furniture of Official Journal layouts; matching
# lines are dropped before segmentation because they distort sentence
# counts. Callers can extend the list.
DEFAULT_BOILERPLATE_PATTERNS = (
    r"Official Journal of the European (Union|Communities)",
    r"^\s*\d{1,2}\.\d{1,2}\.\d{4}\s+EN\s*$",
    r"^\s*EN\s*$",
    r"^\s*[LC]\s?\d+/\d+\s*$",
)

_CONTROL = {c: " " for c in range(32) if chr(c) not in "\n\t"}
_CONTROL[127] = " "


def clean_text(raw: str, boilerplate: Iterable[str] = DEFAULT_BOILERPLATE_PATTERNS) -> str:
    """Normalize a raw document text.

    Strips control characters, drops boilerplate-matched lines, collapses
    whitespace runs to single spaces, and preserves paragraph breaks as
    blank lines. Idempotent.
    """
    patterns = [re.compile(p) for p in boilerplate]
    text = unicodedata.normalize("NFC", raw)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = text.translate(_CONTROL)

    paragraphs: list[str] = []
    current: list[str] = []
    for line in text.split("\n"):
        if any(p.search(line) for p in patterns):
            continue
        if line.strip():
            current.append(" ".join(line.split()))
        elif current:
            paragraphs.append(" ".join(current))
            current = []
    if current:
        paragraphs.append(" ".join(current))
    return "\n\n".join(paragraphs)


def analyze_document(
    record: DocumentRecord,
    text: str,
    mode: str = "windowed",
    boilerplate: Iterable[str] = DEFAULT_BOILERPLATE_PATTERNS,
) -> tuple[TextMetrics, GradeVector]:
    """Clean, count and grade one document.

    Raises DegenerateTextError naming the document when the cleaned text
    has no measurable prose.
    """
    cleaned = clean_text(text, boilerplate)
    metrics = compute_metrics(cleaned)
    try:
        grades = grade_metrics(metrics, cleaned, mode)
    except DegenerateTextError as exc:
        raise DegenerateTextError(f"document '{record.id}': {exc}") from exc
    return metrics, grades


def directory_resolver(texts_dir: str | Path) -> Callable[[DocumentRecord], str]:
    """Resolve document texts from a directory of <id>.txt files."""
    base = Path(texts_dir)

    def resolve(record: DocumentRecord) -> str:
        return (base / f"{record.id}.txt").read_text(encoding="utf-8")

    return resolve


def analyze_corpus(
    records: Sequence[DocumentRecord],
    resolver: Callable[[DocumentRecord], str],
    mode: str = "windowed",
    boilerplate: Iterable[str] = DEFAULT_BOILERPLATE_PATTERNS,
) -> CorpusReport:
    """Analyze every manifest record and assemble the corpus report.

    Row order follows the manifest. Documents whose text cannot be
    resolved or graded land in the failures list; the run is fatal only
    when no document succeeds.
    """
    rows: list[ReportRow] = []
    failures: list[Failure] = []
    for record in records:
        try:
            text = resolver(record)
            metrics, grades = analyze_document(record, text, mode, boilerplate)
        except (DegenerateTextError, OSError, LookupError, UnicodeError) as exc:
            failures.append(Failure(id=record.id, reason=str(exc)))
            continue
        rows.append(ReportRow(record=record, metrics=metrics, grades=grades))

    if not rows:
        raise CorpusAnalysisError(
            "no document could be analyzed; "
            + "; ".join(f"{f.id}: {f.reason}" for f in failures)
        )

    grade_columns = {
        "flesch_kincaid": [r.grades.g1_flesch_kincaid for r in rows],
        "smog": [r.grades.g2_smog for r in rows],
        "ari": [r.grades.g3_ari for r in rows],
        "coleman_liau": [r.grades.g4_coleman_liau for r in rows],
        "linsear": [r.grades.g5_linsear for r in rows],
    }
    sums = [r.grades.sum_variable for r in rows]
    summary = {name: describe(col) for name, col in grade_columns.items()}
    summary["sum_variable"] = describe(sums)

    correlations = None
    correlations_note = None
    alpha = None
    alpha_note = None
    if len(rows) < 2:
        correlations_note = "n < 2"
        alpha_note = "n < 2"
    else:
        try:
            correlations = correlation_matrix([r.grades for r in rows])
        except StatisticsError as exc:
            correlations_note = str(exc)
        try:
            alpha = cronbach_alpha(
                [
                    grade_columns["flesch_kincaid"],
                    grade_columns["smog"],
                    grade_columns["ari"],
                ]
            )
        except StatisticsError as exc:
            alpha_note = str(exc)

    by_year = per_year_aggregate(
        [(r.record.year, r.grades.sum_variable) for r in rows]
    )

    return CorpusReport(
        rows=rows,
        failures=failures,
        summary=summary,
        correlations=correlations,
        correlations_note=correlations_note,
        alpha=alpha,
        alpha_note=alpha_note,
        by_year=by_year,
        linsear_mode=mode,
    )
