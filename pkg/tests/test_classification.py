from hypothesis import given

from countryimpact.classification import classify, corresponding_country, has_corresponding_authorship
from helpers import rec, records


def flags(*affs):
    f = classify(rec("x", list(affs)))
    return f.international, f.national, f.single_institution


def test_single_institution():
    assert flags(("i1", "ESP")) == (False, False, True)


def test_same_institution_listed_twice_is_single():
    assert flags(("i1", "ESP"), ("i1", "ESP")) == (False, False, True)


def test_national_collaboration():
    assert flags(("i1", "ESP"), ("i2", "ESP")) == (False, True, False)


def test_international_two_countries():
    assert flags(("i1", "ESP"), ("i2", "FRA")) == (True, False, False)


def test_international_and_national_overlap():
    f = classify(rec("x", [("i1", "ESP"), ("i2", "ESP"), ("i3", "FRA")]))
    assert (f.international, f.national, f.single_institution) == (True, True, False)
    assert f.exclusive == "ic"


def test_exclusive_labels():
    assert classify(rec("x", [("i1", "ESP"), ("i2", "ESP")])).exclusive == "nc"
    assert classify(rec("x", [("i1", "ESP")])).exclusive == "wc"


def test_corresponding_country():
    r = rec("x", [("i1", "ESP"), ("i2", "FRA")], ca=1)
    assert corresponding_country(r) == "FRA"
    assert has_corresponding_authorship(r, "FRA")
    assert not has_corresponding_authorship(r, "ESP")


def test_unknown_corresponding():
    r = rec("x", [("i1", "ESP")], ca=None)
    assert corresponding_country(r) is None
    assert not has_corresponding_authorship(r, "ESP")


@given(records())
def test_flag_rules(r):
    f = classify(r)
    n_countries = len(r.countries)
    assert f.international == (n_countries >= 2)
    # single-institution excludes any collaboration
    assert not (f.single_institution and (f.international or f.national))
    # every record is at least one of the three
    assert f.international or f.national or f.single_institution
    if n_countries == 1 and not f.single_institution:
        assert f.national
    ca = corresponding_country(r)
    if ca is not None:
        assert ca in r.countries
