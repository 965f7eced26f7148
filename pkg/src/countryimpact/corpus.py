"""Publication records and corpora.

Records are immutable once constructed; every constructor path runs the same
invariant checks, so a ``PublicationRecord`` in hand is always valid.  The
unit of analysis is the affiliation list: a record carries no author-level
structure.
"""

from __future__ import annotations

import enum
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

N_DISCIPLINES = 27


class DocType(str, enum.Enum):
    ARTICLE = "Article"
    REVIEW = "Review"
    NOTE = "Note"
    SHORT_SURVEY = "ShortSurvey"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Issue:
    """One violated invariant, identified by a stable ``code``."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class RecordValidationError(ValueError):
    """Raised when a candidate record violates one or more invariants.

    ``issues`` lists every violation found, not just the first.
    """

    def __init__(self, issues: Sequence[Issue], doc_id: str | None = None):
        self.issues = list(issues)
        self.doc_id = doc_id
        prefix = f"record {doc_id!r}: " if doc_id else ""
        super().__init__(prefix + "; ".join(str(i) for i in self.issues))

    @property
    def codes(self) -> list[str]:
        return [i.code for i in self.issues]


class DuplicateDocIdError(ValueError):
    pass


_COUNTRY_CODE = re.compile(r"[A-Z]{3}\Z")


def is_country_code(code: object) -> bool:
    return type(code) is str and _COUNTRY_CODE.match(code) is not None


def _is_int(value: object) -> bool:
    return type(value) is int


@dataclass(frozen=True)
class Affiliation:
    institution_id: str
    country: str


@dataclass(frozen=True)
class PublicationRecord:
    """A single document with its affiliations and citation count.

    ``corresponding_index`` points into ``affiliations``; ``None`` means the
    corresponding author is unknown.
    """

    doc_id: str
    year: int
    doc_type: DocType
    disciplines: tuple[int, ...]
    affiliations: tuple[Affiliation, ...]
    corresponding_index: int | None
    citations: int

    def __post_init__(self) -> None:
        issues = _record_issues(self)
        if issues:
            raise RecordValidationError(issues, doc_id=self.doc_id or None)

    @cached_property
    def countries(self) -> tuple[str, ...]:
        return tuple(sorted({a.country for a in self.affiliations}))

    @cached_property
    def institutions(self) -> frozenset[tuple[str, str]]:
        return frozenset((a.institution_id, a.country) for a in self.affiliations)


def _record_issues(rec: PublicationRecord) -> list[Issue]:
    issues: list[Issue] = []
    if type(rec.doc_id) is not str or not rec.doc_id:
        issues.append(Issue("BadDocId", "doc_id must be a non-empty string"))
    if not _is_int(rec.year):
        issues.append(Issue("BadYear", f"year must be an integer, got {rec.year!r}"))
    if not isinstance(rec.doc_type, DocType):
        issues.append(Issue("BadDocType", f"unknown document type {rec.doc_type!r}"))

    if len(rec.disciplines) == 0:
        issues.append(Issue("EmptyDisciplines", "at least one discipline is required"))
    else:
        bad = [d for d in rec.disciplines if not _is_int(d) or not 1 <= d <= N_DISCIPLINES]
        if bad:
            issues.append(
                Issue("BadDiscipline", f"disciplines must be integers in 1..{N_DISCIPLINES}, got {bad}")
            )
        if len(set(rec.disciplines)) != len(rec.disciplines):
            issues.append(Issue("DuplicateDiscipline", f"duplicate disciplines in {list(rec.disciplines)}"))

    if len(rec.affiliations) == 0:
        issues.append(Issue("EmptyAffiliations", "at least one affiliation is required"))
    for pos, aff in enumerate(rec.affiliations):
        if type(aff.institution_id) is not str or not aff.institution_id:
            issues.append(Issue("EmptyInstitution", f"affiliation {pos} has an empty institution id"))
        if not is_country_code(aff.country):
            issues.append(Issue("BadCountryCode", f"affiliation {pos} has country {aff.country!r}"))

    ci = rec.corresponding_index
    if ci is not None and (not _is_int(ci) or not 0 <= ci < len(rec.affiliations)):
        issues.append(
            Issue(
                "BadCorrespondingIndex",
                f"corresponding index {ci!r} out of range for {len(rec.affiliations)} affiliations",
            )
        )

    if not _is_int(rec.citations):
        issues.append(Issue("BadCitations", f"citations must be an integer, got {rec.citations!r}"))
    elif rec.citations < 0:
        issues.append(Issue("NegativeCitations", f"citations must be >= 0, got {rec.citations}"))
    return issues


def validate_record(raw: Mapping[str, Any]) -> PublicationRecord:
    """Build a ``PublicationRecord`` from its external mapping form.

    Expected keys: ``doc_id``, ``year``, ``doc_type``, ``disciplines``,
    ``affiliations`` (list of ``{"institution", "country"}``), optional
    ``corresponding`` and ``citations``.  All violations are collected and
    raised together as a ``RecordValidationError``.
    """
    if type(raw) is not dict and not isinstance(raw, Mapping):
        raise RecordValidationError([Issue("NotAnObject", "record must be a JSON object")])

    issues: list[Issue] = []
    for key in ("doc_id", "year", "doc_type", "disciplines", "affiliations", "citations"):
        if key not in raw:
            issues.append(Issue("MissingField", f"missing field {key!r}"))
    if issues:
        raise RecordValidationError(issues, doc_id=raw.get("doc_id") if isinstance(raw.get("doc_id"), str) else None)

    doc_type: Any = raw["doc_type"]
    try:
        doc_type = DocType(doc_type)
    except ValueError:
        pass  # reported by the invariant checks below

    disciplines = raw["disciplines"]
    if not isinstance(disciplines, list):
        issues.append(Issue("BadDiscipline", "disciplines must be a list"))
        disciplines = []

    affiliations: list[Affiliation] = []
    raw_affs = raw["affiliations"]
    if not isinstance(raw_affs, list):
        issues.append(Issue("EmptyAffiliations", "affiliations must be a list"))
        raw_affs = []
    for pos, aff in enumerate(raw_affs):
        if type(aff) is not dict or "institution" not in aff or "country" not in aff:
            issues.append(Issue("BadAffiliation", f"affiliation {pos} needs 'institution' and 'country'"))
            continue
        affiliations.append(Affiliation(aff["institution"], aff["country"]))

    fields_ = dict(
        doc_id=raw["doc_id"],
        year=raw["year"],
        doc_type=doc_type,
        disciplines=tuple(disciplines),
        affiliations=tuple(affiliations),
        corresponding_index=raw.get("corresponding"),
        citations=raw["citations"],
    )
    try:
        record = PublicationRecord(**fields_)
    except RecordValidationError as exc:
        raise RecordValidationError(issues + exc.issues, doc_id=exc.doc_id) from None
    if issues:
        raise RecordValidationError(issues, doc_id=record.doc_id)
    return record


def distinct_countries(record: PublicationRecord) -> tuple[str, ...]:
    """Unique country codes of a record, in lexicographic order."""
    return record.countries


@dataclass(frozen=True)
class Corpus:
    records: tuple[PublicationRecord, ...]
    census_note: str = ""
    _ids: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.records, tuple):
            object.__setattr__(self, "records", tuple(self.records))
        ids = set()
        for rec in self.records:
            if rec.doc_id in ids:
                raise DuplicateDocIdError(f"duplicate doc_id {rec.doc_id!r}")
            ids.add(rec.doc_id)
        object.__setattr__(self, "_ids", frozenset(ids))

    @classmethod
    def from_records(cls, records: Iterable[PublicationRecord], census_note: str = "") -> Corpus:
        return cls(tuple(records), census_note)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def countries(self) -> list[str]:
        return sorted({c for rec in self.records for c in rec.countries})
