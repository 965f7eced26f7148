"""Field-, year- and document-type-normalized citation scores.

Each record is scored against the mean citation rate of its
(discipline, year, doc_type) strata.  A record listed under k disciplines
contributes 1/k of itself and of its citations to each stratum, and its
expected citation rate is the plain average of its strata means.

Baseline masses are accumulated as integers per (stratum, k) and only turned
into a rational mean at the end, so a baseline built from any partition of a
corpus is bit-identical to one built serially.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from countryimpact.corpus import DocType, PublicationRecord


class Stratum(NamedTuple):
    discipline: int
    year: int
    doc_type: DocType

    def __str__(self) -> str:
        return f"(discipline={self.discipline}, year={self.year}, doc_type={self.doc_type.value})"


@dataclass(frozen=True)
class StratumStats:
    mean_citations: float
    item_mass: float
    item_count: int


class EmptyCorpusError(ValueError):
    pass


class MissingStratumError(KeyError):
    def __init__(self, stratum: Stratum, doc_id: str | None = None):
        self.stratum = stratum
        self.doc_id = doc_id
        super().__init__(stratum)

    def __str__(self) -> str:
        where = f" (record {self.doc_id!r})" if self.doc_id else ""
        return f"no baseline for stratum {self.stratum}{where}"


def record_strata(record: PublicationRecord) -> list[Stratum]:
    return [Stratum(d, record.year, record.doc_type) for d in sorted(record.disciplines)]


class Baselines(Mapping):
    """Read-only mapping ``Stratum -> StratumStats``."""

    def __init__(self, strata: Mapping[Stratum, StratumStats]):
        self._strata = dict(sorted(strata.items()))
        for stratum, stats in self._strata.items():
            if not stats.mean_citations >= 0:
                raise ValueError(f"negative mean citations for {stratum}")

    def __getitem__(self, key: Stratum) -> StratumStats:
        return self._strata[key]

    def __iter__(self) -> Iterator[Stratum]:
        return iter(self._strata)

    def __len__(self) -> int:
        return len(self._strata)

    def mean(self, stratum: Stratum) -> float:
        return self._strata[stratum].mean_citations

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Baselines):
            return NotImplemented
        return self._strata == other._strata

    def __repr__(self) -> str:
        return f"Baselines({len(self)} strata)"


class BaselineAccumulator:
    """Mergeable, order-independent builder for ``Baselines``."""

    def __init__(self) -> None:
        # stratum -> k -> [citation sum, item count] over records with k disciplines
        self._sums: dict[Stratum, dict[int, list[int]]] = defaultdict(dict)
        self.n_records = 0

    def add(self, record: PublicationRecord) -> None:
        k = len(record.disciplines)
        for stratum in record_strata(record):
            slot = self._sums[stratum].get(k)
            if slot is None:
                self._sums[stratum][k] = [record.citations, 1]
            else:
                slot[0] += record.citations
                slot[1] += 1
        self.n_records += 1

    def merge(self, other: BaselineAccumulator) -> None:
        for stratum, by_k in other._sums.items():
            mine = self._sums[stratum]
            for k, (cits, count) in by_k.items():
                slot = mine.get(k)
                if slot is None:
                    mine[k] = [cits, count]
                else:
                    slot[0] += cits
                    slot[1] += count
        self.n_records += other.n_records

    def result(self) -> Baselines:
        if self.n_records == 0:
            raise EmptyCorpusError("cannot build baselines from an empty corpus")
        strata = {}
        for stratum, by_k in self._sums.items():
            citation_mass = sum((Fraction(c, k) for k, (c, _) in by_k.items()), Fraction(0))
            item_mass = sum((Fraction(n, k) for k, (_, n) in by_k.items()), Fraction(0))
            strata[stratum] = StratumStats(
                mean_citations=float(citation_mass / item_mass),
                item_mass=float(item_mass),
                item_count=sum(n for _, n in by_k.values()),
            )
        return Baselines(strata)


def build_baselines(records: Iterable[PublicationRecord]) -> Baselines:
    acc = BaselineAccumulator()
    for rec in records:
        acc.add(rec)
    return acc.result()


def expected_citations(record: PublicationRecord, baselines: Baselines) -> float | None:
    """Average of the record's strata means; ``None`` when that average is 0."""
    means = []
    for stratum in record_strata(record):
        try:
            means.append(baselines.mean(stratum))
        except KeyError:
            raise MissingStratumError(stratum, record.doc_id) from None
    expected = math.fsum(means) / len(means)
    return expected if expected > 0 else None


def normalized_score(record: PublicationRecord, baselines: Baselines) -> float | None:
    """Citations relative to the expected rate.

    Returns ``None`` for an excluded item, i.e. one whose expected rate is 0.
    Callers aggregating scores skip these and report how many there were.
    """
    expected = expected_citations(record, baselines)
    if expected is None:
        return None
    return record.citations / expected


def ni(items: Iterable[tuple[float, float]]) -> float | None:
    """Weighted mean of ``(score, weight)`` pairs; ``None`` if total weight is 0."""
    num = []
    den = []
    for score, weight in items:
        if weight < 0:
            raise ValueError(f"negative weight {weight}")
        num.append(weight * score)
        den.append(weight)
    total = math.fsum(den)
    if total == 0:
        return None
    return math.fsum(num) / total
