"""File formats: record files, baselines, indicator tables, generator configs.

Record files are UTF-8 JSON Lines, one record per line::

    {"doc_id": "p1", "year": 2010, "doc_type": "Article", "disciplines": [5],
     "affiliations": [{"institution": "i1", "country": "NLD"}],
     "corresponding": 0, "citations": 3}

Tables are tab-separated with a header row.  Floats are written with
``repr`` (shortest round-trip form) and undefined values as ``NA``.
"""

from __future__ import annotations

import csv
import hashlib
import json
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from countryimpact.corpus import DocType, Issue, PublicationRecord, RecordValidationError, validate_record
from countryimpact.indicators import CountryIndicators
from countryimpact.normalization import Baselines, Stratum, StratumStats
from countryimpact.synthgen import CountryProfile, GeneratorConfig, InvalidConfigError, Phase

NA = "NA"


@dataclass(frozen=True)
class LineDiagnostic:
    line: int
    doc_id: str | None
    issues: tuple[Issue, ...]

    def __str__(self) -> str:
        who = f" ({self.doc_id})" if self.doc_id else ""
        return f"line {self.line}{who}: " + "; ".join(str(i) for i in self.issues)


class RecordFileError(ValueError):
    """A record file failed to parse or validate; carries every diagnostic."""

    def __init__(self, diagnostics: Sequence[LineDiagnostic], path: str | Path | None = None):
        self.diagnostics = list(diagnostics)
        self.path = path
        head = "; ".join(str(d) for d in self.diagnostics[:5])
        more = f" (+{len(self.diagnostics) - 5} more)" if len(self.diagnostics) > 5 else ""
        super().__init__(f"{len(self.diagnostics)} invalid record(s) in {path or 'input'}: {head}{more}")


# --- records -----------------------------------------------------------------


def record_to_dict(record: PublicationRecord) -> dict[str, Any]:
    return {
        "doc_id": record.doc_id,
        "year": record.year,
        "doc_type": record.doc_type.value,
        "disciplines": list(record.disciplines),
        "affiliations": [{"institution": a.institution_id, "country": a.country} for a in record.affiliations],
        "corresponding": record.corresponding_index,
        "citations": record.citations,
    }


def dumps_record(record: PublicationRecord) -> str:
    return json.dumps(record_to_dict(record), ensure_ascii=False, separators=(",", ":"))


_decode = json.JSONDecoder().decode


def parse_line(text: str | bytes, line: int) -> PublicationRecord:
    """Parse one JSON line; raises ``RecordFileError`` with a single diagnostic."""
    try:
        raw = _decode(text if type(text) is str else text.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise RecordFileError([LineDiagnostic(line, None, (Issue("ParseError", str(exc)),))]) from None
    try:
        return validate_record(raw)
    except RecordValidationError as exc:
        raise RecordFileError([LineDiagnostic(line, exc.doc_id, tuple(exc.issues))]) from None


def scan_lines(lines: Iterable[tuple[int, bytes | str]]) -> Iterator[PublicationRecord | LineDiagnostic]:
    """Yield a record or a diagnostic for every non-blank line."""
    for lineno, text in lines:
        if not text.strip():
            continue
        try:
            yield parse_line(text, lineno)
        except RecordFileError as exc:
            yield exc.diagnostics[0]


def read_records(path: str | Path) -> list[PublicationRecord]:
    """Load and validate a whole record file, rejecting it on any bad line."""
    records, bad = [], []
    with open(path, "rb") as fh:
        for item in scan_lines(enumerate(fh, start=1)):
            (bad if isinstance(item, LineDiagnostic) else records).append(item)
    if bad:
        raise RecordFileError(bad, path)
    return records


def write_records(records: Iterable[PublicationRecord], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(dumps_record(rec))
            fh.write("\n")
            n += 1
    return n


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


# --- tables -------------------------------------------------------------------


def fmt(value: Any) -> str:
    if value is None:
        return NA
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_table(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def read_table(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, [])
        return header, [row for row in reader]


def write_indicator_table(path: str | Path, rows: Iterable[CountryIndicators]) -> None:
    write_table(path, CountryIndicators.columns(), (r.values() for r in rows))


def read_indicator_table(path: str | Path) -> list[CountryIndicators]:
    header, rows = read_table(path)
    if header != CountryIndicators.columns():
        raise ValueError(f"unexpected indicator columns in {path}")
    out = []
    for row in rows:
        values: dict[str, Any] = {}
        for name, cell in zip(header, row):
            if name == "country":
                values[name] = cell
            elif cell == NA:
                values[name] = None
            elif name in ("ca_unknown_count", "excluded_count"):
                values[name] = int(cell)
            else:
                values[name] = float(cell)
        out.append(CountryIndicators(**values))
    return out


BASELINE_COLUMNS = ("discipline", "year", "doc_type", "mean_citations", "item_mass", "item_count")


def write_baselines(path: str | Path, baselines: Baselines) -> None:
    write_table(
        path,
        BASELINE_COLUMNS,
        (
            (s.discipline, s.year, s.doc_type.value, st.mean_citations, st.item_mass, st.item_count)
            for s, st in baselines.items()
        ),
    )


def read_baselines(path: str | Path) -> Baselines:
    header, rows = read_table(path)
    if tuple(header) != BASELINE_COLUMNS:
        raise ValueError(f"{path}: expected columns {', '.join(BASELINE_COLUMNS)}")
    strata = {}
    for lineno, row in enumerate(rows, start=2):
        try:
            d, y, dt, mean, mass, count = row
            stratum = Stratum(int(d), int(y), DocType(dt))
            strata[stratum] = StratumStats(float(mean), float(mass), int(count))
        except ValueError as exc:
            raise ValueError(f"{path}, line {lineno}: {exc}") from None
    return Baselines(strata)


# --- generator configs --------------------------------------------------------


def config_to_dict(config: GeneratorConfig) -> dict[str, Any]:
    return {
        "seed": config.seed,
        "years": list(config.years),
        "disciplines_active": list(config.disciplines_active),
        "citation_base": {int(d): float(v) for d, v in sorted(config.citation_base.items())},
        "ic_boost": config.ic_boost,
        "ca_discount": config.ca_discount,
        "institutions_per_country": config.institutions_per_country,
        "partner_count_weights": list(config.partner_count_weights),
        "ca_unknown_share": config.ca_unknown_share,
        "doc_type_weights": {d.value: w for d, w in config.doc_type_weights.items()},
        "census_note": config.census_note,
        "profiles": [
            {
                "country": p.country,
                "papers_per_year": p.papers_per_year,
                "ic_propensity": p.ic_propensity,
                "nc_propensity": p.nc_propensity,
                "ca_share_ic": p.ca_share_ic,
                "partner_pool_quality": p.partner_pool_quality,
                "phase_label": p.phase_label.value if p.phase_label else None,
            }
            for p in config.profiles
        ],
    }


def config_hash(config: GeneratorConfig) -> str:
    canonical = json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


_PROFILE_KEYS = {
    "country", "papers_per_year", "ic_propensity", "nc_propensity",
    "ca_share_ic", "partner_pool_quality", "phase_label",
}
_CONFIG_KEYS = {
    "seed", "years", "disciplines_active", "citation_base", "ic_boost", "ca_discount",
    "institutions_per_country", "partner_count_weights", "ca_unknown_share",
    "doc_type_weights", "census_note", "profiles",
}


def config_from_dict(data: Mapping[str, Any]) -> GeneratorConfig:
    """Build a ``GeneratorConfig``; every problem is reported by field name.

    ``citation_base`` may be a single number (same mean for every active
    discipline) or a mapping from discipline id to mean.
    """
    if not isinstance(data, Mapping):
        raise InvalidConfigError([("<root>", "config must be a mapping")])
    problems: list[tuple[str, str]] = []
    for key in sorted(set(data) - _CONFIG_KEYS):
        problems.append((key, "unknown field"))
    for key in ("seed", "years", "disciplines_active", "citation_base", "profiles"):
        if key not in data:
            problems.append((key, "required field missing"))
    if problems:
        raise InvalidConfigError(problems)

    profiles = []
    raw_profiles = data["profiles"]
    if not isinstance(raw_profiles, list):
        raise InvalidConfigError([("profiles", "must be a list")])
    for i, raw in enumerate(raw_profiles):
        if not isinstance(raw, Mapping):
            problems.append((f"profiles[{i}]", "must be a mapping"))
            continue
        for key in sorted(set(raw) - _PROFILE_KEYS):
            problems.append((f"profiles[{i}].{key}", "unknown field"))
        missing = [k for k in ("country", "papers_per_year", "ic_propensity", "nc_propensity", "ca_share_ic") if k not in raw]
        for key in missing:
            problems.append((f"profiles[{i}].{key}", "required field missing"))
        if missing:
            continue
        kwargs = {k: raw[k] for k in _PROFILE_KEYS if k in raw}
        if kwargs.get("phase_label") is not None:
            try:
                kwargs["phase_label"] = Phase(kwargs["phase_label"])
            except ValueError:
                problems.append((f"profiles[{i}].phase_label", f"unknown phase {kwargs['phase_label']!r}"))
                kwargs["phase_label"] = None
        profiles.append(CountryProfile(**kwargs))

    disciplines = data["disciplines_active"]
    if not isinstance(disciplines, list):
        problems.append(("disciplines_active", "must be a list"))
        disciplines = []
    base = data["citation_base"]
    if isinstance(base, (int, float)) and not isinstance(base, bool):
        base = {d: float(base) for d in disciplines if isinstance(d, int)}
    elif isinstance(base, Mapping):
        try:
            base = {int(k): v for k, v in base.items()}
        except (TypeError, ValueError):
            problems.append(("citation_base", "keys must be discipline ids"))
            base = {}
    else:
        problems.append(("citation_base", "must be a number or a mapping"))
        base = {}

    doc_types: dict[DocType, float] = {}
    for name, weight in (data.get("doc_type_weights") or {"Article": 1.0}).items():
        try:
            doc_types[DocType(name)] = weight
        except ValueError:
            problems.append((f"doc_type_weights.{name}", "unknown document type"))
    if problems:
        raise InvalidConfigError(problems)

    optional = {
        k: data[k]
        for k in ("ic_boost", "ca_discount", "institutions_per_country", "ca_unknown_share", "census_note")
        if k in data
    }
    if "partner_count_weights" in data:
        optional["partner_count_weights"] = tuple(data["partner_count_weights"])
    return GeneratorConfig(
        profiles=tuple(profiles),
        years=tuple(data["years"]) if isinstance(data["years"], list) else (),
        disciplines_active=tuple(disciplines),
        citation_base=base,
        seed=data["seed"],
        doc_type_weights=doc_types,
        **optional,
    )


def load_config(path: str | Path) -> GeneratorConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise InvalidConfigError([("<file>", f"not valid YAML: {exc}")]) from None
    return config_from_dict(data)


def dump_config(config: GeneratorConfig, path: str | Path, header: str = "") -> None:
    text = yaml.safe_dump(config_to_dict(config), sort_keys=False, default_flow_style=None, width=100)
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write("".join(f"# {line}\n" if line else "#\n" for line in header.splitlines()))
        fh.write(text)
