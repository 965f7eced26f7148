import pytest
from hypothesis import given
from hypothesis import strategies as st

from countryimpact.classification import classify
from countryimpact.corpus import (
    Corpus,
    DocType,
    DuplicateDocIdError,
    PublicationRecord,
    RecordValidationError,
    distinct_countries,
    validate_record,
)
from helpers import rec, records


def raw(**changes):
    base = {
        "doc_id": "d1",
        "year": 2010,
        "doc_type": "Article",
        "disciplines": [3],
        "affiliations": [{"institution": "u1", "country": "ESP"}, {"institution": "u2", "country": "FRA"}],
        "corresponding": 1,
        "citations": 7,
    }
    base.update(changes)
    return base


def codes(**changes):
    with pytest.raises(RecordValidationError) as info:
        validate_record(raw(**changes))
    return info.value.codes


def test_valid_record_round_trips_fields():
    r = validate_record(raw())
    assert r.doc_id == "d1"
    assert r.doc_type is DocType.ARTICLE
    assert r.disciplines == (3,)
    assert r.corresponding_index == 1
    assert r.countries == ("ESP", "FRA")


def test_corresponding_is_optional():
    data = raw()
    del data["corresponding"]
    assert validate_record(data).corresponding_index is None


@pytest.mark.parametrize(
    "changes, code",
    [
        ({"doc_id": ""}, "BadDocId"),
        ({"year": "2010"}, "BadYear"),
        ({"year": 2010.0}, "BadYear"),
        ({"doc_type": "Letter"}, "BadDocType"),
        ({"disciplines": []}, "EmptyDisciplines"),
        ({"disciplines": [0]}, "BadDiscipline"),
        ({"disciplines": [28]}, "BadDiscipline"),
        ({"disciplines": [True]}, "BadDiscipline"),
        ({"disciplines": [2, 2]}, "DuplicateDiscipline"),
        ({"affiliations": []}, "EmptyAffiliations"),
        ({"affiliations": [{"institution": "", "country": "ESP"}]}, "EmptyInstitution"),
        ({"affiliations": [{"institution": "u1", "country": "es"}]}, "BadCountryCode"),
        ({"affiliations": [{"institution": "u1", "country": "ESPA"}]}, "BadCountryCode"),
        ({"affiliations": [{"institution": "u1"}]}, "BadAffiliation"),
        ({"corresponding": 2}, "BadCorrespondingIndex"),
        ({"corresponding": -1}, "BadCorrespondingIndex"),
        ({"citations": -1}, "NegativeCitations"),
        ({"citations": 1.5}, "BadCitations"),
    ],
)
def test_invalid_fields_are_reported(changes, code):
    assert code in codes(**changes)


def test_all_issues_collected_at_once():
    found = codes(year="x", citations=-3, disciplines=[99])
    assert {"BadYear", "NegativeCitations", "BadDiscipline"} <= set(found)


def test_missing_fields():
    data = raw()
    del data["citations"]
    del data["year"]
    with pytest.raises(RecordValidationError) as info:
        validate_record(data)
    assert info.value.codes == ["MissingField", "MissingField"]


def test_non_object_rejected():
    with pytest.raises(RecordValidationError) as info:
        validate_record([1, 2])
    assert info.value.codes == ["NotAnObject"]


def test_direct_construction_is_validated():
    with pytest.raises(RecordValidationError):
        rec("x", [("i", "ESP")], citations=-1)


def test_records_are_immutable():
    r = rec("x", [("i", "ESP")])
    with pytest.raises(AttributeError):
        r.citations = 3


def test_distinct_countries_sorted_unique():
    r = rec("x", [("i1", "FRA"), ("i2", "ESP"), ("i3", "FRA")])
    assert distinct_countries(r) == ("ESP", "FRA")


def test_corpus_rejects_duplicate_ids():
    with pytest.raises(DuplicateDocIdError):
        Corpus.from_records([rec("x", [("i", "ESP")]), rec("x", [("j", "FRA")])])


def test_corpus_countries():
    c = Corpus.from_records([rec("x", [("i", "FRA")]), rec("y", [("j", "ESP"), ("k", "DEU")])], "note")
    assert len(c) == 2
    assert c.countries() == ["DEU", "ESP", "FRA"]
    assert c.census_note == "note"


@given(records())
def test_countries_cover_affiliations(r: PublicationRecord):
    assert set(distinct_countries(r)) == {a.country for a in r.affiliations}
    assert list(distinct_countries(r)) == sorted(distinct_countries(r))


# candidate replacement values per field, valid and invalid mixed
POOL = {
    "doc_id": ["d2", "", 5, None],
    "year": [1999, 2030, "2010", 2010.5, True],
    "doc_type": ["Article", "Review", "Note", "ShortSurvey", "article", "Letter", 3],
    "disciplines": [[1], [27], [1, 2, 3], [], [0], [28], [2, 2], ["3"], "3"],
    "affiliations": [
        [{"institution": "u", "country": "DEU"}],
        [{"institution": "u", "country": "DEU"}, {"institution": "u", "country": "DEU"}],
        [],
        [{"institution": "", "country": "DEU"}],
        [{"institution": "u", "country": "De"}],
        [{"institution": "u", "country": "DEUX"}],
        [{"country": "DEU"}],
        "DEU",
    ],
    "corresponding": [None, 0, 1, 2, -1, "0", 0.0],
    "citations": [0, 12, -1, 1.0, "4", None],
}


def independently_valid(data) -> bool:
    """The record invariants restated from scratch."""

    def is_int(v):
        return type(v) is int

    affs = data["affiliations"]
    if not isinstance(affs, list) or not affs:
        return False
    for a in affs:
        if not isinstance(a, dict) or set(a) != {"institution", "country"}:
            return False
        if not isinstance(a["institution"], str) or not a["institution"]:
            return False
        c = a["country"]
        if not (isinstance(c, str) and len(c) == 3 and c.isascii() and c.isalpha() and c.isupper()):
            return False
    ds = data["disciplines"]
    ca = data.get("corresponding")
    return (
        isinstance(data["doc_id"], str) and data["doc_id"] != ""
        and is_int(data["year"])
        and data["doc_type"] in ("Article", "Review", "Note", "ShortSurvey")
        and isinstance(ds, list) and len(ds) > 0 and all(is_int(d) and 1 <= d <= 27 for d in ds) and len(set(ds)) == len(ds)
        and (ca is None or (is_int(ca) and 0 <= ca < len(affs)))
        and is_int(data["citations"]) and data["citations"] >= 0
    )


@given(st.dictionaries(st.sampled_from(sorted(POOL)), st.integers(0, 100), max_size=3))
def test_mutation_flips_acceptance_iff_invariant_broken(choices):
    data = raw()
    for name, k in choices.items():
        data[name] = POOL[name][k % len(POOL[name])]
    try:
        validate_record(data)
        accepted = True
    except RecordValidationError:
        accepted = False
    assert accepted == independently_valid(data)


@given(records(), st.randoms(use_true_random=False))
def test_permuting_affiliations_changes_nothing(r, rnd):
    affs = list(r.affiliations)
    rnd.shuffle(affs)
    ca = None
    if r.corresponding_index is not None:
        # keep the same corresponding affiliation
        ca = affs.index(r.affiliations[r.corresponding_index])
    p = PublicationRecord(r.doc_id, r.year, r.doc_type, r.disciplines, tuple(affs), ca, r.citations)
    assert distinct_countries(p) == distinct_countries(r)
    assert classify(p) == classify(r)
