"""Country-level collaboration, corresponding-authorship and normalized-impact indicators."""

from countryimpact.classification import (
    CollabFlags,
    classify,
    corresponding_country,
    has_corresponding_authorship,
)
from countryimpact.corpus import (
    Affiliation,
    Corpus,
    DocType,
    PublicationRecord,
    RecordValidationError,
    distinct_countries,
    validate_record,
)
from countryimpact.counting import (
    CountingScheme,
    country_output,
    full_counting_bonus,
    ni_by_scheme,
    scheme_weights,
)
from countryimpact.indicators import CountryIndicators, indicator_row, indicator_table
from countryimpact.normalization import (
    Baselines,
    build_baselines,
    expected_citations,
    ni,
    normalized_score,
)

__version__ = "0.1.0"

__all__ = [
    "Affiliation",
    "Baselines",
    "CollabFlags",
    "Corpus",
    "CountingScheme",
    "CountryIndicators",
    "DocType",
    "PublicationRecord",
    "RecordValidationError",
    "build_baselines",
    "classify",
    "corresponding_country",
    "country_output",
    "distinct_countries",
    "expected_citations",
    "full_counting_bonus",
    "has_corresponding_authorship",
    "indicator_row",
    "indicator_table",
    "ni",
    "ni_by_scheme",
    "normalized_score",
    "scheme_weights",
    "validate_record",
]
