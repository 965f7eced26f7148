"""Shared builders for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from countryimpact.corpus import Affiliation, DocType, PublicationRecord
from countryimpact.synthgen import CountryProfile, GeneratorConfig, country_codes


def rec(doc_id, affs, citations=0, ca=0, year=2010, disciplines=(1,), doc_type=DocType.ARTICLE):
    """Record from ``[(institution, country), ...]``."""
    return PublicationRecord(
        doc_id=doc_id,
        year=year,
        doc_type=doc_type,
        disciplines=tuple(disciplines),
        affiliations=tuple(Affiliation(i, c) for i, c in affs),
        corresponding_index=ca,
        citations=citations,
    )


def m3():
    """Three papers in one stratum: A alone, B alone, A+B led by A."""
    return [
        rec("p1", [("a1", "AAA")], citations=1, ca=0),
        rec("p2", [("b1", "BBB")], citations=1, ca=0),
        rec("p3", [("a1", "AAA"), ("b1", "BBB")], citations=4, ca=0),
    ]


COUNTRIES = ("AAA", "BBB", "CCC", "DDD")
INSTITUTIONS = ("i1", "i2", "i3")


@st.composite
def records(draw, doc_id="r", multi_discipline=True, max_affiliations=4):
    n_aff = draw(st.integers(1, max_affiliations))
    affs = [(draw(st.sampled_from(INSTITUTIONS)), draw(st.sampled_from(COUNTRIES))) for _ in range(n_aff)]
    if multi_discipline:
        disciplines = draw(st.lists(st.integers(1, 4), min_size=1, max_size=3, unique=True))
    else:
        disciplines = [draw(st.integers(1, 3))]
    ca = draw(st.one_of(st.none(), st.integers(0, n_aff - 1)))
    return rec(
        doc_id,
        affs,
        citations=draw(st.integers(0, 30)),
        ca=ca,
        year=draw(st.integers(2010, 2011)),
        disciplines=disciplines,
        doc_type=draw(st.sampled_from([DocType.ARTICLE, DocType.REVIEW])),
    )


@st.composite
def corpora(draw, min_size=1, max_size=25, multi_discipline=True):
    n = draw(st.integers(min_size, max_size))
    return [draw(records(doc_id=f"r{i}", multi_discipline=multi_discipline)) for i in range(n)]


def random_config(rng: random.Random, max_records: int = 500, **overrides) -> GeneratorConfig:
    """A small random generator config with at most ``max_records`` records.

    Strata are kept few and citation rates high enough that every stratum
    collects some citations.
    """
    n_years = rng.randint(1, 2)
    n_countries = rng.randint(2, 8)
    budget = rng.randint(100, max_records) // n_years
    sizes = [max(1, budget // n_countries) for _ in range(n_countries)]
    profiles = tuple(
        CountryProfile(
            code,
            size,
            round(rng.random(), 3),
            round(rng.random(), 3),
            round(rng.random(), 3),
            round(rng.uniform(0.7, 1.3), 3),
        )
        for code, size in zip(country_codes(n_countries), sizes)
    )
    disciplines = tuple(rng.sample(range(1, 28), rng.randint(1, 2)))
    kwargs = dict(
        profiles=profiles,
        years=(2005, 2005 + n_years - 1),
        disciplines_active=disciplines,
        citation_base={d: float(rng.randint(5, 20)) for d in disciplines},
        seed=rng.randrange(2**32),
        ic_boost=rng.choice([1.0, 1.5, 2.0]),
        ca_discount=rng.choice([0.7, 1.0]),
        institutions_per_country=rng.randint(1, 5),
        ca_unknown_share=rng.choice([0.0, 0.1]),
    )
    kwargs.update(overrides)
    return GeneratorConfig(**kwargs)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def exact_mean(values) -> Fraction:
    values = [Fraction(v) for v in values]
    return sum(values, Fraction(0)) / len(values)
