"""Deterministic synthetic corpora shaped by a development-phase model.

Countries are described by a :class:`CountryProfile`: how much they publish,
how often they co-author internationally or nationally, how often they hold
the corresponding authorship of their international papers and how strong
their international partner pool is.

Reproducibility contract
------------------------
Records are generated in blocks, one block per (profile, year), in config
order and ascending year.  Each block owns an independent Philox4x64 stream
(numpy's ``Philox``) keyed on ``(seed mod 2**64, block_key)`` where
``block_key`` is the little-endian integer of the 8-byte BLAKE2b digest of
``"<country>|<year>"``.  A block draws ``papers_per_year * DRAWS_PER_RECORD``
doubles with ``Generator.random``; record ``i`` of the block consumes row
``i``, one column per slot of ``SLOTS``, whether or not the slot is used.
Blocks are therefore independent of each other and of generation order.
"""

from __future__ import annotations

import bisect
import enum
import hashlib
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from countryimpact.corpus import Affiliation, Corpus, DocType, PublicationRecord, is_country_code

SLOTS = (
    "discipline",
    "doc_type",
    "international",
    "national",
    "partner_count",
    "partner_1", "partner_2", "partner_3", "partner_4",
    "corresponding",
    "home_institution",
    "second_institution",
    "partner_institution_1", "partner_institution_2",
    "partner_institution_3", "partner_institution_4",
    "corresponding_unknown",
    "citations",
    "reserved_1", "reserved_2",
)
DRAWS_PER_RECORD = len(SLOTS)
_S = {name: i for i, name in enumerate(SLOTS)}
MAX_PARTNERS = 4


class Phase(str, enum.Enum):
    PRE_DEVELOPMENT = "PreDevelopment"
    BUILDING_UP = "BuildingUp"
    CONSOLIDATION_EXPANSION = "ConsolidationExpansion"
    INTERNATIONALIZATION = "Internationalization"


class InvalidConfigError(ValueError):
    """Configuration rejected; ``problems`` lists ``(field, message)`` pairs."""

    def __init__(self, problems: Sequence[tuple[str, str]]):
        self.problems = list(problems)
        super().__init__("; ".join(f"{f}: {m}" for f, m in self.problems))

    @property
    def fields(self) -> list[str]:
        return [f for f, _ in self.problems]


def _prob_ok(p: object) -> bool:
    return isinstance(p, (int, float)) and not isinstance(p, bool) and 0.0 <= p <= 1.0


@dataclass(frozen=True)
class CountryProfile:
    country: str
    papers_per_year: int
    ic_propensity: float
    nc_propensity: float
    ca_share_ic: float
    partner_pool_quality: float = 1.0
    phase_label: Phase | None = None

    def problems(self, where: str = "profile") -> list[tuple[str, str]]:
        out = []
        if not is_country_code(self.country):
            out.append((f"{where}.country", f"not a 3-letter upper-case code: {self.country!r}"))
        if not isinstance(self.papers_per_year, int) or isinstance(self.papers_per_year, bool) or self.papers_per_year < 1:
            out.append((f"{where}.papers_per_year", f"must be an integer >= 1, got {self.papers_per_year!r}"))
        for name in ("ic_propensity", "nc_propensity", "ca_share_ic"):
            value = getattr(self, name)
            if not _prob_ok(value):
                out.append((f"{where}.{name}", f"must be a probability in [0, 1], got {value!r}"))
        q = self.partner_pool_quality
        if not isinstance(q, (int, float)) or isinstance(q, bool) or not q >= 0 or not math.isfinite(q):
            out.append((f"{where}.partner_pool_quality", f"must be a finite number >= 0, got {q!r}"))
        if self.phase_label is not None and not isinstance(self.phase_label, Phase):
            out.append((f"{where}.phase_label", f"unknown phase {self.phase_label!r}"))
        return out


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of the synthetic corpus.

    ``partner_count_weights[j]`` is the relative frequency of IC papers with
    ``j + 1`` foreign partner countries; the default ``(1.0,)`` gives
    two-country IC papers only.  IC papers with ``m`` partners get their
    expected citations multiplied by ``ic_boost ** m``.
    """

    profiles: tuple[CountryProfile, ...]
    years: tuple[int, int]
    disciplines_active: tuple[int, ...]
    citation_base: Mapping[int, float]
    seed: int
    ic_boost: float = 1.5
    ca_discount: float = 1.0
    institutions_per_country: int = 10
    partner_count_weights: tuple[float, ...] = (1.0,)
    ca_unknown_share: float = 0.0
    doc_type_weights: Mapping[DocType, float] = field(default_factory=lambda: {DocType.ARTICLE: 1.0})
    census_note: str = "synthetic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "profiles", tuple(self.profiles))
        object.__setattr__(self, "years", tuple(self.years))
        object.__setattr__(self, "disciplines_active", tuple(self.disciplines_active))
        object.__setattr__(self, "partner_count_weights", tuple(self.partner_count_weights))
        problems = self.problems()
        if problems:
            raise InvalidConfigError(problems)

    def problems(self) -> list[tuple[str, str]]:
        out: list[tuple[str, str]] = []
        if not self.profiles:
            out.append(("profiles", "at least one country profile is required"))
        seen = set()
        for i, prof in enumerate(self.profiles):
            out.extend(prof.problems(f"profiles[{i}]"))
            if prof.country in seen:
                out.append((f"profiles[{i}].country", f"duplicate country {prof.country}"))
            seen.add(prof.country)
        if len(self.years) != 2 or not all(isinstance(y, int) for y in self.years) or self.years[0] > self.years[1]:
            out.append(("years", f"must be an inclusive [first, last] range, got {list(self.years)!r}"))
        if not self.disciplines_active:
            out.append(("disciplines_active", "at least one discipline is required"))
        elif any(not isinstance(d, int) or not 1 <= d <= 27 for d in self.disciplines_active) or len(
            set(self.disciplines_active)
        ) != len(self.disciplines_active):
            out.append(("disciplines_active", "must be distinct integers in 1..27"))
        for d in self.disciplines_active:
            base = self.citation_base.get(d) if isinstance(self.citation_base, Mapping) else None
            if not isinstance(base, (int, float)) or not base >= 0 or not math.isfinite(base):
                out.append((f"citation_base[{d}]", f"must be a finite number >= 0, got {base!r}"))
        if not isinstance(self.ic_boost, (int, float)) or not self.ic_boost >= 0:
            out.append(("ic_boost", f"must be >= 0, got {self.ic_boost!r}"))
        if not isinstance(self.ca_discount, (int, float)) or not 0 < self.ca_discount <= 1:
            out.append(("ca_discount", f"must be in (0, 1], got {self.ca_discount!r}"))
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            out.append(("seed", f"must be an integer, got {self.seed!r}"))
        if not isinstance(self.institutions_per_country, int) or self.institutions_per_country < 1:
            out.append(("institutions_per_country", f"must be an integer >= 1, got {self.institutions_per_country!r}"))
        w = self.partner_count_weights
        if not 1 <= len(w) <= MAX_PARTNERS or any(not isinstance(x, (int, float)) or x < 0 for x in w) or sum(w) <= 0:
            out.append(("partner_count_weights", f"need 1..{MAX_PARTNERS} non-negative weights with positive sum"))
        elif (
            any(_prob_ok(p.ic_propensity) and p.ic_propensity > 0 for p in self.profiles)
            and any(x > 0 for x in w[len(self.profiles) - 1 :])
        ):
            # IC papers are requested but cannot find enough partner countries
            out.append(("partner_count_weights", "more partners requested than other countries available"))
        if not _prob_ok(self.ca_unknown_share):
            out.append(("ca_unknown_share", f"must be a probability in [0, 1], got {self.ca_unknown_share!r}"))
        dw = self.doc_type_weights
        if not dw or any(not isinstance(k, DocType) for k in dw) or any(v < 0 for v in dw.values()) or sum(dw.values()) <= 0:
            out.append(("doc_type_weights", "need non-negative weights keyed by document type, positive sum"))
        return out

    @property
    def n_records(self) -> int:
        n_years = self.years[1] - self.years[0] + 1
        return n_years * sum(p.papers_per_year for p in self.profiles)

    def with_seed(self, seed: int) -> GeneratorConfig:
        return replace(self, seed=seed)


def _cumulative(weights: Sequence[float]) -> list[float]:
    total = math.fsum(weights)
    acc = 0.0
    out = []
    for w in weights:
        acc += w
        out.append(acc / total)
    out[-1] = 1.0
    return out


def _pick(cum: Sequence[float], u: float) -> int:
    return min(bisect.bisect_right(cum, u), len(cum) - 1)


def _index(u: float, n: int) -> int:
    return min(int(u * n), n - 1)


def block_key(country: str, year: int) -> int:
    digest = hashlib.blake2b(f"{country}|{year}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def block_draws(seed: int, country: str, year: int, n: int) -> np.ndarray:
    bitgen = np.random.Philox(key=[seed % 2**64, block_key(country, year)])
    return np.random.Generator(bitgen).random((n, DRAWS_PER_RECORD))


def geometric_draw(mean: float, u: float) -> int:
    """Negative-binomial draw with dispersion 1 (a geometric law) by inversion."""
    if mean <= 0:
        return 0
    return int(math.floor(math.log1p(-u) / -math.log1p(1.0 / mean)))


class _Generator:
    def __init__(self, config: GeneratorConfig):
        self.config = config
        self.disciplines = sorted(config.disciplines_active)
        self.doc_types = sorted(config.doc_type_weights, key=lambda d: list(DocType).index(d))
        self.doc_type_cum = _cumulative([config.doc_type_weights[d] for d in self.doc_types])
        self.partner_count_cum = _cumulative(config.partner_count_weights)
        self.quality = {p.country: p.partner_pool_quality for p in config.profiles}
        self.sizes = [(p.country, p.papers_per_year) for p in config.profiles]
        self.inst_ids = {
            p.country: [f"{p.country}-I{j:03d}" for j in range(config.institutions_per_country)]
            for p in config.profiles
        }
        self._first_partner: dict[str, tuple[list[tuple[str, int]], list[float]]] = {}

    def _partners(self, home: str, m: int, row) -> list[str]:
        # size-weighted, without replacement, one slot per partner
        if home not in self._first_partner:
            pool = [(c, w) for c, w in self.sizes if c != home]
            self._first_partner[home] = (pool, _cumulative([w for _, w in pool]))
        pool, cum = self._first_partner[home]
        k = _pick(cum, row[_S["partner_1"]])
        chosen = [pool[k][0]]
        if m > 1:
            pool = pool[:k] + pool[k + 1 :]
            for j in range(1, m):
                k = _pick(_cumulative([w for _, w in pool]), row[_S["partner_1"] + j])
                chosen.append(pool.pop(k)[0])
        return chosen

    def block(self, prof: CountryProfile, year: int) -> Iterator[PublicationRecord]:
        cfg = self.config
        draws = block_draws(cfg.seed, prof.country, year, prof.papers_per_year)
        n_inst = cfg.institutions_per_country
        home_insts = self.inst_ids[prof.country]
        for i, row in enumerate(draws.tolist()):
            discipline = self.disciplines[_index(row[_S["discipline"]], len(self.disciplines))]
            doc_type = self.doc_types[_pick(self.doc_type_cum, row[_S["doc_type"]])]
            home_inst = home_insts[_index(row[_S["home_institution"]], n_inst)]
            mean = cfg.citation_base[discipline]
            if len(self.sizes) > 1 and row[_S["international"]] < prof.ic_propensity:
                m = _pick(self.partner_count_cum, row[_S["partner_count"]]) + 1
                partners = self._partners(prof.country, m, row)
                affs = [Affiliation(home_inst, prof.country)]
                for j, c in enumerate(partners):
                    inst = self.inst_ids[c][_index(row[_S["partner_institution_1"] + j], n_inst)]
                    affs.append(Affiliation(inst, c))
                u = row[_S["corresponding"]]
                if u < prof.ca_share_ic:
                    corresponding = 0
                else:
                    span = 1.0 - prof.ca_share_ic
                    corresponding = 1 + _index((u - prof.ca_share_ic) / span if span else 0.0, m)
                mean *= cfg.ic_boost ** m
                for c in [prof.country, *partners]:
                    mean *= self.quality[c]
                if corresponding == 0:
                    mean *= cfg.ca_discount
            elif n_inst >= 2 and row[_S["national"]] < prof.nc_propensity:
                first = _index(row[_S["home_institution"]], n_inst)
                second = (first + 1 + _index(row[_S["second_institution"]], n_inst - 1)) % n_inst
                affs = [Affiliation(home_insts[first], prof.country), Affiliation(home_insts[second], prof.country)]
                corresponding = _index(row[_S["corresponding"]], 2)
            else:
                affs = [Affiliation(home_inst, prof.country)]
                corresponding = 0
            if row[_S["corresponding_unknown"]] < cfg.ca_unknown_share:
                corresponding = None
            yield PublicationRecord(
                doc_id=f"{prof.country}-{year}-{i:06d}",
                year=year,
                doc_type=doc_type,
                disciplines=(discipline,),
                affiliations=tuple(affs),
                corresponding_index=corresponding,
                citations=geometric_draw(mean, row[_S["citations"]]),
            )


def iter_records(config: GeneratorConfig) -> Iterator[PublicationRecord]:
    gen = _Generator(config)
    for prof in config.profiles:
        for year in range(config.years[0], config.years[1] + 1):
            yield from gen.block(prof, year)


def generate(config: GeneratorConfig) -> Corpus:
    return Corpus(tuple(iter_records(config)), census_note=config.census_note)


_PRESETS = (
    CountryProfile("PRE", 12, 0.80, 0.20, 0.20, 1.00, Phase.PRE_DEVELOPMENT),
    CountryProfile("BLD", 60, 0.70, 0.30, 0.30, 1.00, Phase.BUILDING_UP),
    CountryProfile("CON", 200, 0.25, 0.45, 0.65, 1.00, Phase.CONSOLIDATION_EXPANSION),
    CountryProfile("INT", 150, 0.55, 0.50, 0.50, 1.30, Phase.INTERNATIONALIZATION),
)


def phase_presets() -> list[CountryProfile]:
    """Template profiles, one per development phase (placeholder country codes)."""
    return list(_PRESETS)


def preset(phase: Phase | str) -> CountryProfile:
    phase = Phase(phase)
    return next(p for p in _PRESETS if p.phase_label is phase)


def country_codes(n: int, prefix: str = "X") -> list[str]:
    """``n`` codes from the user-assigned alpha-3 block (``XAA``, ``XAB`` ...)."""
    if n > 26 * 26:
        raise ValueError("at most 676 codes per prefix")
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    return [prefix + letters[i // 26] + letters[i % 26] for i in range(n)]


def phase_population(
    n: int,
    seed: int,
    phase_weights: Mapping[Phase, float] | None = None,
    jitter: float = 0.08,
    quality_spread: float = 0.3,
    size_sigma: float = 0.5,
) -> list[CountryProfile]:
    """Draw ``n`` country profiles from the phase presets.

    Each country gets a preset chosen by ``phase_weights``, a log-normal
    multiplier (``size_sigma``) on its output, a uniform ``+-jitter`` on each
    probability and a uniform relative ``+-quality_spread`` on its partner
    pool quality.  Deterministic in ``seed``.
    """
    weights = phase_weights or {
        Phase.PRE_DEVELOPMENT: 0.10,
        Phase.BUILDING_UP: 0.35,
        Phase.CONSOLIDATION_EXPANSION: 0.30,
        Phase.INTERNATIONALIZATION: 0.25,
    }
    phases = list(weights)
    cum = _cumulative([weights[p] for p in phases])
    rng = np.random.Generator(np.random.Philox(key=[seed % 2**64, block_key("POPULATION", n)]))
    out = []
    for code in country_codes(n):
        u = rng.random(5).tolist()
        base = preset(phases[_pick(cum, u[0])])
        size = max(1, int(round(base.papers_per_year * math.exp(size_sigma * float(rng.standard_normal())))))

        def jit(p: float, v: float) -> float:
            return round(min(1.0, max(0.0, p + jitter * (2 * v - 1))), 4)

        out.append(
            replace(
                base,
                country=code,
                papers_per_year=size,
                ic_propensity=jit(base.ic_propensity, u[1]),
                nc_propensity=jit(base.nc_propensity, u[2]),
                ca_share_ic=jit(base.ca_share_ic, u[3]),
                partner_pool_quality=round(base.partner_pool_quality * (1 + quality_spread * (2 * u[4] - 1)), 4),
            )
        )
    return out


S0 = 2015


def phase_config(n_countries: int = 120, seed: int = S0) -> GeneratorConfig:
    """The reference phase-model configuration (``phase120`` at the defaults).

    Thirteen publication years, all 27 disciplines, a mixed document-type
    profile, multi-country IC papers with a per-partner citation boost, and a
    corresponding-author discount on home-led IC papers.
    """
    return GeneratorConfig(
        profiles=tuple(phase_population(n_countries, seed)),
        years=(2003, 2015),
        disciplines_active=tuple(range(1, 28)),
        citation_base={d: float(4 + d % 7) for d in range(1, 28)},
        seed=seed,
        ic_boost=1.5,
        ca_discount=0.8,
        institutions_per_country=10,
        partner_count_weights=(0.5, 0.3, 0.15, 0.05)[: max(1, n_countries - 1)],
        ca_unknown_share=0.02,
        doc_type_weights={
            DocType.ARTICLE: 0.80,
            DocType.REVIEW: 0.10,
            DocType.NOTE: 0.05,
            DocType.SHORT_SURVEY: 0.05,
        },
        census_note=f"synthetic phase-model corpus, {n_countries} countries, seed {seed}",
    )
