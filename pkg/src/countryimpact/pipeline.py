"""Streaming, optionally chunk-parallel analysis of record files.

The file is split at line boundaries into contiguous byte ranges.  Each
range is parsed and validated independently and reduced into mergeable
accumulators; results do not depend on the number of chunks.  With
self-normalization two passes are made (baselines, then indicators); with
supplied baselines a single pass suffices.  Only accumulators and the set of
doc ids are held in memory, never the records.
"""

from __future__ import annotations

import os
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from countryimpact.corpus import Issue, PublicationRecord
from countryimpact.indicators import CountryIndicators, IndicatorAccumulator
from countryimpact.io import LineDiagnostic, RecordFileError, parse_line, scan_lines
from countryimpact.normalization import BaselineAccumulator, Baselines, expected_citations


@dataclass
class Analysis:
    rows: dict[str, CountryIndicators]
    baselines: Baselines
    n_records: int
    n_ca_known: int
    n_ic: int
    excluded: int
    years: list[int] = field(default_factory=list)

    @property
    def ca_unknown(self) -> int:
        return self.n_records - self.n_ca_known


def split_file(path: str | Path, parts: int) -> list[tuple[int, int, int]]:
    """``(start, end, first_line_number)`` byte ranges cut at line boundaries."""
    size = os.path.getsize(path)
    parts = max(1, parts)
    cuts = [0]
    with open(path, "rb") as fh:
        for i in range(1, parts):
            target = max(size * i // parts, cuts[-1])
            fh.seek(target)
            if target > 0:
                fh.readline()  # advance to the start of the next line
            cuts.append(min(fh.tell(), size))
        cuts.append(size)
        ranges = []
        line = 1
        for start, end in zip(cuts, cuts[1:]):
            ranges.append((start, end, line))
            fh.seek(start)
            line += fh.read(end - start).count(b"\n")
    return ranges


def _chunk_lines(path: str | Path, start: int, end: int, first_line: int) -> Iterable[tuple[int, bytes]]:
    with open(path, "rb") as fh:
        fh.seek(start)
        data = fh.read(end - start)
    return enumerate(data.split(b"\n"), start=first_line)


class _ChunkResult:
    def __init__(self) -> None:
        self.ids: dict[str, int] = {}
        self.bad: list[LineDiagnostic] = []
        self.dupes: list[LineDiagnostic] = []
        self.baselines: BaselineAccumulator | None = None
        self.indicators: IndicatorAccumulator | None = None
        self.years: set[int] = set()

    def note(self, rec: PublicationRecord, line: int) -> None:
        if rec.doc_id in self.ids:
            self.dupes.append(LineDiagnostic(line, rec.doc_id, (Issue("DuplicateDocId", "doc_id already used"),)))
        else:
            self.ids[rec.doc_id] = line
        self.years.add(rec.year)


def _scan(path, start, end, first_line, baselines: Baselines | None) -> _ChunkResult:
    out = _ChunkResult()
    if baselines is None:
        out.baselines = BaselineAccumulator()
    else:
        out.indicators = IndicatorAccumulator()
    for lineno, text in _chunk_lines(path, start, end, first_line):
        if not text.strip():
            continue
        try:
            item = parse_line(text, lineno)
        except RecordFileError as exc:
            out.bad.extend(exc.diagnostics)
            continue
        out.note(item, lineno)
        if out.bad:
            continue
        if baselines is None:
            out.baselines.add(item)
        else:
            out.indicators.add(item, expected_citations(item, baselines))
    return out


def _score(path, start, end, first_line, baselines: Baselines) -> IndicatorAccumulator:
    acc = IndicatorAccumulator()
    for item in scan_lines(_chunk_lines(path, start, end, first_line)):
        acc.add(item, expected_citations(item, baselines))
    return acc


def _run(fn, jobs: list[tuple], workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _merge_ids(chunks: list[_ChunkResult]) -> list[LineDiagnostic]:
    seen: dict[str, int] = {}
    problems = []
    for chunk in chunks:
        problems.extend(chunk.dupes)
        for doc_id, line in chunk.ids.items():
            if doc_id in seen:
                problems.append(
                    LineDiagnostic(line, doc_id, (Issue("DuplicateDocId", f"doc_id first used on line {seen[doc_id]}"),))
                )
            else:
                seen[doc_id] = line
    return problems


def analyze_file(path: str | Path, baselines: Baselines | None = None, workers: int = 1) -> Analysis:
    """Validate ``path`` and compute indicator rows for every country.

    Raises ``RecordFileError`` listing every bad line, or
    ``MissingStratumError`` when supplied baselines do not cover a record.
    """
    ranges = split_file(path, workers)
    jobs = [(path, s, e, line, baselines) for s, e, line in ranges]
    chunks = _run(_scan, jobs, workers)
    problems = sorted(
        [d for c in chunks for d in c.bad] + _merge_ids(chunks), key=lambda d: d.line
    )
    if problems:
        raise RecordFileError(problems, path)
    years = sorted(set().union(*(c.years for c in chunks)))

    if baselines is None:
        acc = BaselineAccumulator()
        for chunk in chunks:
            acc.merge(chunk.baselines)
        baselines = acc.result()
        parts = _run(_score, [(path, s, e, line, baselines) for s, e, line in ranges], workers)
    else:
        parts = [c.indicators for c in chunks]

    total = IndicatorAccumulator()
    for part in parts:
        total.merge(part)
    return _analysis(total, baselines, years)


def analyze_records(records: Iterable[PublicationRecord], baselines: Baselines | None = None) -> Analysis:
    """In-memory equivalent of :func:`analyze_file`."""
    records = list(records)
    if baselines is None:
        acc = BaselineAccumulator()
        for rec in records:
            acc.add(rec)
        baselines = acc.result()
    total = IndicatorAccumulator()
    for rec in records:
        total.add(rec, expected_citations(rec, baselines))
    return _analysis(total, baselines, sorted({r.year for r in records}))


def _analysis(total: IndicatorAccumulator, baselines: Baselines, years: list[int]) -> Analysis:
    return Analysis(
        rows=total.rows(),
        baselines=baselines,
        n_records=total.n_records,
        n_ca_known=total.n_ca_known,
        n_ic=total.n_ic,
        excluded=total.excluded,
        years=years,
    )


def validate_file(path: str | Path) -> tuple[int, list[LineDiagnostic]]:
    """Count valid records and collect a diagnostic for every invalid line.

    A record repeating an earlier doc_id counts as invalid.
    """
    valid = 0
    seen: dict[str, int] = {}
    problems: list[LineDiagnostic] = []
    with open(path, "rb") as fh:
        for lineno, text in enumerate(fh, start=1):
            if not text.strip():
                continue
            try:
                rec = parse_line(text, lineno)
            except RecordFileError as exc:
                problems.extend(exc.diagnostics)
                continue
            if rec.doc_id in seen:
                problems.append(
                    LineDiagnostic(
                        lineno, rec.doc_id,
                        (Issue("DuplicateDocId", f"doc_id first used on line {seen[rec.doc_id]}"),),
                    )
                )
                continue
            seen[rec.doc_id] = lineno
            valid += 1
    return valid, problems
