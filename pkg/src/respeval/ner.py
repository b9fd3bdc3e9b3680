"""NER subtitle accuracy from annotated error counts, plus the reduction rate.

Accuracy is (N - E - R) / N * 100 where N counts tokens (punctuation
included), E is the weighted sum of re-speaker edition errors and R the
recognition errors charged to the ASR system. Classifying an error's severity
is a human judgment and stays outside this module; R arrives pre-weighted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable


class InvalidRecordError(ValueError):
    """Record violates N > 0 or E + R <= N."""


class InvalidInputError(ValueError):
    """Reduction rate needs a positive original length."""


class AnnotationParseError(ValueError):
    """Malformed annotation CSV; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ErrorSeverity(Enum):
    MINOR = "minor"
    STANDARD = "standard"
    SERIOUS = "serious"

    @property
    def weight(self) -> float:
        return _SEVERITY_WEIGHTS[self]


_SEVERITY_WEIGHTS = {
    ErrorSeverity.MINOR: 0.25,
    ErrorSeverity.STANDARD: 0.5,
    ErrorSeverity.SERIOUS: 1.0,
}


@dataclass(frozen=True)
class NerRecord:
    """One annotated transcript: token count, edition errors by severity and
    pre-weighted recognition errors.

    ``original_length``/``subtitle_length`` are optional source/subtitle sizes
    (token or character counts) that feed the reduction rate when present.
    """

    tokens: int
    edition_errors: tuple[tuple[ErrorSeverity, int], ...] = ()
    recognition_errors: float = 0.0
    original_length: int | None = None
    subtitle_length: int | None = None

    @property
    def weighted_edition_errors(self) -> float:
        return sum(severity.weight * count for severity, count in self.edition_errors)

    def validate(self) -> None:
        if self.tokens <= 0:
            raise InvalidRecordError(f"token count must be positive, got {self.tokens}")
        if any(count < 0 for _, count in self.edition_errors):
            raise InvalidRecordError("edition error counts must be non-negative")
        if self.recognition_errors < 0:
            raise InvalidRecordError("recognition errors must be non-negative")
        total = self.weighted_edition_errors + self.recognition_errors
        if total > self.tokens:
            raise InvalidRecordError(
                f"errors exceed token count: E + R = {total} > N = {self.tokens}"
            )


def ner_accuracy(record: NerRecord) -> float:
    """Accuracy percentage (N - E - R) / N * 100, in [0, 100]."""
    record.validate()
    e = record.weighted_edition_errors
    return (record.tokens - e - record.recognition_errors) / record.tokens * 100.0


def reduction_rate(original_tokens: int, subtitle_tokens: int) -> float:
    """Relative shortening of the subtitle versus the original, in percent.

    Negative output is legal: a subtitle longer than its source.
    """
    if original_tokens <= 0:
        raise InvalidInputError(f"original length must be positive, got {original_tokens}")
    return (original_tokens - subtitle_tokens) / original_tokens * 100.0


ANNOTATION_COLUMNS = ("N", "minor_count", "standard_count", "serious_count", "R_weighted")
# Optional trailing columns enabling the per-row reduction-rate report.
OPTIONAL_COLUMNS = ("original_tokens", "subtitle_tokens", "original_chars", "subtitle_chars")


def _parse_int(value: str, column: str, line: int) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise AnnotationParseError(f"column {column!r} must be an integer, got {value!r}", line)


def _parse_float(value: str, column: str, line: int) -> float:
    try:
        return float(value.strip())
    except ValueError:
        raise AnnotationParseError(f"column {column!r} must be a number, got {value!r}", line)


def parse_ner_annotations(
    source: str | Path | Iterable[str], use_chars: bool = False
) -> list[NerRecord]:
    """Parse an annotation CSV into validated records.

    Required header: ``N,minor_count,standard_count,serious_count,R_weighted``.
    The optional ``original_tokens,subtitle_tokens`` (or, with ``use_chars``,
    ``original_chars,subtitle_chars``) columns feed the reduction rate.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as handle:
            return _parse_rows(list(csv.reader(handle)), use_chars)
    return _parse_rows(list(csv.reader(source)), use_chars)


def _parse_rows(rows: list[list[str]], use_chars: bool) -> list[NerRecord]:
    if not rows:
        raise AnnotationParseError("missing header row", 1)
    header = [cell.strip() for cell in rows[0]]
    if tuple(header[: len(ANNOTATION_COLUMNS)]) != ANNOTATION_COLUMNS:
        raise AnnotationParseError(
            f"header must start with {','.join(ANNOTATION_COLUMNS)}, got {','.join(header)}", 1
        )
    extras = header[len(ANNOTATION_COLUMNS) :]
    for name in extras:
        if name not in OPTIONAL_COLUMNS:
            raise AnnotationParseError(f"unknown column {name!r}", 1)
    unit = "chars" if use_chars else "tokens"
    original_col = f"original_{unit}"
    subtitle_col = f"subtitle_{unit}"

    records: list[NerRecord] = []
    for line, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise AnnotationParseError(f"expected {len(header)} fields, got {len(row)}", line)
        n = _parse_int(row[0], "N", line)
        minor = _parse_int(row[1], "minor_count", line)
        standard = _parse_int(row[2], "standard_count", line)
        serious = _parse_int(row[3], "serious_count", line)
        r = _parse_float(row[4], "R_weighted", line)
        named = {
            name: _parse_int(row[len(ANNOTATION_COLUMNS) + k], name, line)
            for k, name in enumerate(extras)
        }
        record = NerRecord(
            tokens=n,
            edition_errors=(
                (ErrorSeverity.MINOR, minor),
                (ErrorSeverity.STANDARD, standard),
                (ErrorSeverity.SERIOUS, serious),
            ),
            recognition_errors=r,
            original_length=named.get(original_col),
            subtitle_length=named.get(subtitle_col),
        )
        try:
            record.validate()
        except InvalidRecordError as exc:
            raise AnnotationParseError(str(exc), line) from exc
        records.append(record)
    return records
