"""Whole, fractional and corresponding-author counting of papers by country.

These are the direct, record-at-a-time definitions.  The streaming
aggregation in :mod:`countryimpact.indicators` computes the same quantities
for all countries in one pass and is cross-checked against this module.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Iterable
from fractions import Fraction

from countryimpact.classification import corresponding_country
from countryimpact.corpus import PublicationRecord
from countryimpact.normalization import Baselines, ni, normalized_score


class CountingScheme(str, enum.Enum):
    WHOLE = "whole"
    FRACTIONAL = "fractional"
    CORRESPONDING_AUTHOR = "corresponding_author"


class UndefinedIndicatorError(ValueError):
    pass


def scheme_weights(record: PublicationRecord, scheme: CountingScheme) -> dict[str, float]:
    countries = record.countries
    if scheme is CountingScheme.WHOLE:
        return {c: 1.0 for c in countries}
    if scheme is CountingScheme.FRACTIONAL:
        share = 1.0 / len(countries)
        return {c: share for c in countries}
    if scheme is CountingScheme.CORRESPONDING_AUTHOR:
        ca = corresponding_country(record)
        return {} if ca is None else {ca: 1.0}
    raise ValueError(f"unknown counting scheme {scheme!r}")


def _exact_weight(record: PublicationRecord, country: str, scheme: CountingScheme) -> Fraction:
    if country not in record.countries:
        return Fraction(0)
    if scheme is CountingScheme.WHOLE:
        return Fraction(1)
    if scheme is CountingScheme.FRACTIONAL:
        return Fraction(1, len(record.countries))
    return Fraction(int(corresponding_country(record) == country))


def country_output(records: Iterable[PublicationRecord], country: str, scheme: CountingScheme) -> float:
    """Papers credited to ``country`` under ``scheme`` (summed exactly, then rounded once)."""
    return float(sum((_exact_weight(r, country, scheme) for r in records), Fraction(0)))


def weighted_scores(
    records: Iterable[PublicationRecord],
    country: str,
    scheme: CountingScheme,
    baselines: Baselines,
    where: Callable[[PublicationRecord], bool] | None = None,
) -> tuple[list[tuple[float, float]], int]:
    """``(score, weight)`` items for ``country`` plus the number of excluded items."""
    items = []
    excluded = 0
    for rec in records:
        if where is not None and not where(rec):
            continue
        weight = scheme_weights(rec, scheme).get(country, 0.0)
        if weight == 0.0:
            continue
        score = normalized_score(rec, baselines)
        if score is None:
            excluded += 1
            continue
        items.append((score, weight))
    return items, excluded


def ni_by_scheme(
    records: Iterable[PublicationRecord],
    country: str,
    scheme: CountingScheme,
    baselines: Baselines,
    where: Callable[[PublicationRecord], bool] | None = None,
) -> float | None:
    items, _ = weighted_scores(records, country, scheme, baselines, where)
    return ni(items)


def full_counting_bonus(records: Iterable[PublicationRecord], country: str, baselines: Baselines) -> float:
    records = list(records)
    whole = ni_by_scheme(records, country, CountingScheme.WHOLE, baselines)
    frac = ni_by_scheme(records, country, CountingScheme.FRACTIONAL, baselines)
    if whole is None or frac is None:
        raise UndefinedIndicatorError(f"normalized impact undefined for {country}")
    return whole - frac
