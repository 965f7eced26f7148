"""Per-country indicator rows.

All countries are aggregated in a single pass over the records.  Scores are
never summed as floats while streaming: each subset keeps integer citation
totals keyed by the expected citation rate, and the sum of scores is formed
once at the end as ``fsum(citations / expected)``.  Since ``fsum`` is exact
before its final rounding, accumulators built over any partition of a corpus
merge into a result bit-identical to a serial run.

Impact subsets (``ni_ic``, ``ni_ca`` ...) weight every paper 1; counting
schemes enter only through ``ni_frac``, ``ni_ca`` and ``fcb``.
"""

from __future__ import annotations

import math
import statistics
from collections.abc import Iterable
from dataclasses import astuple, dataclass, fields
from fractions import Fraction

from countryimpact.classification import classify, corresponding_country
from countryimpact.corpus import PublicationRecord
from countryimpact.normalization import Baselines, expected_citations

SUBSETS = ("all", "ic", "nc", "wc", "ca", "ic_ca", "ic_nonca")


@dataclass(frozen=True)
class CountryIndicators:
    """One country's indicator row.  ``None`` marks an undefined value.

    Percentages are over the country's whole-counted papers; ``pct_ca`` and
    ``pct_ca_ic`` only over papers whose corresponding author is known.
    ``ni_ic_nonca`` covers IC papers on which the country does not hold
    corresponding authorship (unknown included), so ``ni_ic`` is always a
    weighted mean of ``ni_ic_ca`` and ``ni_ic_nonca``.
    """

    country: str
    output_whole: float
    output_frac: float
    output_ca: float
    pct_ic: float | None
    pct_nc: float | None
    pct_wc: float | None
    pct_ic_x: float | None
    pct_nc_x: float | None
    pct_wc_x: float | None
    pct_ca: float | None
    pct_ca_ic: float | None
    ni_all: float | None
    ni_ic: float | None
    ni_nc: float | None
    ni_wc: float | None
    ni_ca: float | None
    ni_ic_ca: float | None
    ni_ic_nonca: float | None
    ni_frac: float | None
    fcb: float | None
    ca_unknown_count: int
    excluded_count: int

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def values(self) -> tuple:
        return astuple(self)


NUMERIC_COLUMNS = tuple(c for c in CountryIndicators.columns() if c != "country")


def _pct(part: int, whole: int) -> float | None:
    return 100.0 * part / whole if whole else None


def _add(table: dict, key, citations: int) -> None:
    table[key] = table.get(key, 0) + citations


def _merge_into(mine: dict, other: dict) -> None:
    for key, value in other.items():
        mine[key] = mine.get(key, 0) + value


class _CountryState:
    __slots__ = (
        "papers", "by_n", "ic", "nc", "wc", "x_nc", "x_wc",
        "ca_known", "ca_held", "ic_ca_known", "ic_ca_held", "ca_unknown", "excluded",
        "cites", "counts", "frac_cites", "frac_by_n",
    )

    def __init__(self) -> None:
        self.papers = 0
        self.by_n: dict[int, int] = {}
        self.ic = self.nc = self.wc = 0
        self.x_nc = self.x_wc = 0
        self.ca_known = self.ca_held = 0
        self.ic_ca_known = self.ic_ca_held = 0
        self.ca_unknown = 0
        self.excluded = 0
        # subset -> expected rate -> citation total, over scored papers
        self.cites: dict[str, dict[float, int]] = {s: {} for s in SUBSETS}
        self.counts = dict.fromkeys(SUBSETS, 0)
        # (expected rate, n countries) -> citation total; n -> scored papers
        self.frac_cites: dict[tuple[float, int], int] = {}
        self.frac_by_n: dict[int, int] = {}

    def merge(self, other: _CountryState) -> None:
        self.papers += other.papers
        _merge_into(self.by_n, other.by_n)
        for name in ("ic", "nc", "wc", "x_nc", "x_wc", "ca_known", "ca_held",
                     "ic_ca_known", "ic_ca_held", "ca_unknown", "excluded"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        for s in SUBSETS:
            _merge_into(self.cites[s], other.cites[s])
            self.counts[s] += other.counts[s]
        _merge_into(self.frac_cites, other.frac_cites)
        _merge_into(self.frac_by_n, other.frac_by_n)

    def _ni(self, subset: str) -> float | None:
        n = self.counts[subset]
        if not n:
            return None
        return math.fsum(c / e for e, c in self.cites[subset].items()) / n

    def _ni_frac(self) -> float | None:
        weight = sum((Fraction(k, n) for n, k in self.frac_by_n.items()), Fraction(0))
        if not weight:
            return None
        return math.fsum(c / e / n for (e, n), c in self.frac_cites.items()) / float(weight)

    def row(self, country: str) -> CountryIndicators:
        papers = self.papers
        ni_all = self._ni("all")
        ni_frac = self._ni_frac()
        return CountryIndicators(
            country=country,
            output_whole=float(papers),
            output_frac=float(sum((Fraction(k, n) for n, k in self.by_n.items()), Fraction(0))),
            output_ca=float(self.ca_held),
            pct_ic=_pct(self.ic, papers),
            pct_nc=_pct(self.nc, papers),
            pct_wc=_pct(self.wc, papers),
            pct_ic_x=_pct(self.ic, papers),
            pct_nc_x=_pct(self.x_nc, papers),
            pct_wc_x=_pct(self.x_wc, papers),
            pct_ca=_pct(self.ca_held, self.ca_known),
            pct_ca_ic=_pct(self.ic_ca_held, self.ic_ca_known),
            ni_all=ni_all,
            ni_ic=self._ni("ic"),
            ni_nc=self._ni("nc"),
            ni_wc=self._ni("wc"),
            ni_ca=self._ni("ca"),
            ni_ic_ca=self._ni("ic_ca"),
            ni_ic_nonca=self._ni("ic_nonca"),
            ni_frac=ni_frac,
            fcb=None if ni_all is None or ni_frac is None else ni_all - ni_frac,
            ca_unknown_count=self.ca_unknown,
            excluded_count=self.excluded,
        )


class IndicatorAccumulator:
    """Single-pass, mergeable aggregation of indicator rows for every country."""

    def __init__(self, only: Iterable[str] | None = None):
        self._states: dict[str, _CountryState] = {}
        self._only = None if only is None else frozenset(only)
        self.n_records = 0
        self.n_ca_known = 0
        self.n_ic = 0
        self.excluded = 0

    def add(self, record: PublicationRecord, expected: float | None) -> None:
        """Add one record given its expected citation rate (``None`` = excluded item)."""
        flags = classify(record)
        ca = corresponding_country(record)
        countries = record.countries
        n = len(countries)
        cites = record.citations
        exclusive = flags.exclusive
        self.n_records += 1
        self.n_ic += flags.international
        if ca is not None:
            self.n_ca_known += 1
        if expected is None:
            self.excluded += 1

        states = self._states
        for country in countries:
            if self._only is not None and country not in self._only:
                continue
            st = states.get(country)
            if st is None:
                st = states[country] = _CountryState()
            st.papers += 1
            st.by_n[n] = st.by_n.get(n, 0) + 1
            st.ic += flags.international
            st.nc += flags.national
            st.wc += flags.single_institution
            if exclusive == "nc":
                st.x_nc += 1
            elif exclusive == "wc":
                st.x_wc += 1
            holds = ca == country
            if ca is None:
                st.ca_unknown += 1
            else:
                st.ca_known += 1
                st.ca_held += holds
                if flags.international:
                    st.ic_ca_known += 1
                    st.ic_ca_held += holds

            if expected is None:
                st.excluded += 1
                continue
            subsets = ["all"]
            if flags.international:
                subsets.append("ic")
                subsets.append("ic_ca" if holds else "ic_nonca")
            if flags.national:
                subsets.append("nc")
            if flags.single_institution:
                subsets.append("wc")
            if holds:
                subsets.append("ca")
            for s in subsets:
                _add(st.cites[s], expected, cites)
                st.counts[s] += 1
            _add(st.frac_cites, (expected, n), cites)
            st.frac_by_n[n] = st.frac_by_n.get(n, 0) + 1

    def add_scored(self, record: PublicationRecord, baselines: Baselines) -> None:
        self.add(record, expected_citations(record, baselines))

    def merge(self, other: IndicatorAccumulator) -> None:
        for country, st in other._states.items():
            mine = self._states.get(country)
            if mine is None:
                self._states[country] = mine = _CountryState()
            mine.merge(st)
        self.n_records += other.n_records
        self.n_ca_known += other.n_ca_known
        self.n_ic += other.n_ic
        self.excluded += other.excluded

    def countries(self) -> list[str]:
        return sorted(self._states)

    def rows(self) -> dict[str, CountryIndicators]:
        return {c: self._states[c].row(c) for c in sorted(self._states)}


def compute_indicators(records: Iterable[PublicationRecord], baselines: Baselines) -> IndicatorAccumulator:
    acc = IndicatorAccumulator()
    for rec in records:
        acc.add_scored(rec, baselines)
    return acc


def indicator_row(records: Iterable[PublicationRecord], baselines: Baselines, country: str) -> CountryIndicators:
    acc = IndicatorAccumulator(only=[country])
    for rec in records:
        if country in rec.countries:
            acc.add_scored(rec, baselines)
    rows = acc.rows()
    if country not in rows:
        raise KeyError(f"country {country!r} has no papers in the corpus")
    return rows[country]


def select_rows(
    rows: Iterable[CountryIndicators],
    top: int | None = None,
    min_output: float | None = None,
) -> list[CountryIndicators]:
    """Sort by whole-counted output (descending, ties by code) and select.

    ``min_output`` keeps countries with at least that many papers; ``top``
    then keeps the first N.
    """
    ordered = sorted(rows, key=lambda r: (-r.output_whole, r.country))
    if min_output is not None:
        ordered = [r for r in ordered if r.output_whole >= min_output]
    if top is not None:
        if top < 0:
            raise ValueError("top must be non-negative")
        ordered = ordered[:top]
    return ordered


def indicator_table(
    records: Iterable[PublicationRecord],
    baselines: Baselines,
    top: int | None = None,
    min_output: float | None = None,
) -> list[CountryIndicators]:
    return select_rows(compute_indicators(records, baselines).rows().values(), top, min_output)


def ca_gap_summary(rows: Iterable[CountryIndicators]) -> dict[str, float | int | None]:
    """Impact of corresponding-author papers relative to all papers.

    The gap can be summarised either as the mean (or median) of per-country
    ratios ``ni_ca / ni_all`` or as the ratio of the unweighted means over
    countries; both are reported.
    """
    pairs = [(r.ni_ca, r.ni_all) for r in rows if r.ni_ca is not None and r.ni_all]
    if not pairs:
        return {"n": 0, "mean_ratio": None, "median_ratio": None, "ratio_of_means": None}
    ratios = [ca / all_ for ca, all_ in pairs]
    mean_all = math.fsum(a for _, a in pairs) / len(pairs)
    mean_ca = math.fsum(c for c, _ in pairs) / len(pairs)
    return {
        "n": len(pairs),
        "mean_ratio": math.fsum(ratios) / len(ratios),
        "median_ratio": statistics.median(ratios),
        "ratio_of_means": mean_ca / mean_all,
    }
