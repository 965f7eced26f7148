"""Collaboration type and corresponding-country classification of records."""

from __future__ import annotations

from dataclasses import dataclass

from countryimpact.corpus import PublicationRecord


@dataclass(frozen=True)
class CollabFlags:
    """Non-exclusive collaboration flags.

    A record with domestic multi-institution links and foreign links is both
    ``international`` and ``national``.  ``exclusive`` collapses the flags to
    a single label with precedence IC > NC > WC.
    """

    international: bool
    national: bool
    single_institution: bool

    @property
    def exclusive(self) -> str:
        if self.international:
            return "ic"
        if self.national:
            return "nc"
        return "wc"


def classify(record: PublicationRecord) -> CollabFlags:
    institutions = record.institutions
    single = len(institutions) == 1
    international = len(record.countries) >= 2
    national = False
    if not single:
        seen: set[str] = set()
        for _, country in institutions:
            if country in seen:
                national = True
                break
            seen.add(country)
    return CollabFlags(international=international, national=national, single_institution=single)


def corresponding_country(record: PublicationRecord) -> str | None:
    if record.corresponding_index is None:
        return None
    return record.affiliations[record.corresponding_index].country


def has_corresponding_authorship(record: PublicationRecord, country: str) -> bool:
    ca = corresponding_country(record)
    return ca is not None and ca == country
