import json
import random

import pytest
import yaml

from countryimpact.corpus import DocType
from countryimpact.indicators import compute_indicators
from countryimpact.io import (
    RecordFileError,
    config_from_dict,
    config_hash,
    config_to_dict,
    dump_config,
    dumps_record,
    fmt,
    load_config,
    parse_line,
    read_baselines,
    read_indicator_table,
    read_records,
    write_baselines,
    write_indicator_table,
    write_records,
)
from countryimpact.normalization import build_baselines
from countryimpact.synthgen import InvalidConfigError, iter_records, phase_config
from helpers import m3, random_config


def test_record_line_round_trip():
    for r in m3():
        assert parse_line(dumps_record(r), 1) == r
        assert parse_line(dumps_record(r).encode(), 1) == r


def test_dumped_key_order():
    assert list(json.loads(dumps_record(m3()[2]))) == [
        "doc_id", "year", "doc_type", "disciplines", "affiliations", "corresponding", "citations",
    ]


def test_unknown_ca_round_trips():
    cfg = random_config(random.Random(2), ca_unknown_share=0.5)
    for r in list(iter_records(cfg))[:50]:
        assert parse_line(dumps_record(r), 1) == r


def test_parse_error_carries_line():
    with pytest.raises(RecordFileError) as info:
        parse_line("{not json", 17)
    (diag,) = info.value.diagnostics
    assert diag.line == 17
    assert diag.issues[0].code == "ParseError"


def test_read_records_lists_every_bad_line(tmp_path):
    lines = [dumps_record(r) for r in m3()]
    lines[1] = lines[1].replace("BBB", "bb")
    lines.append("[]")
    path = tmp_path / "c.jsonl"
    path.write_text("\n".join(lines) + "\n\n")
    with pytest.raises(RecordFileError) as info:
        read_records(path)
    assert [d.line for d in info.value.diagnostics] == [2, 4]
    assert "line 2 (p2): BadCountryCode" in str(info.value.diagnostics[0])


def test_fmt():
    assert fmt(None) == "NA"
    assert fmt(0.1) == "0.1"
    assert fmt(1 / 3) == repr(1 / 3)
    assert fmt(3) == "3"


def test_corpus_and_table_round_trip_bit_for_bit(tmp_path):
    cfg = random_config(random.Random(5), ca_unknown_share=0.1)
    records = list(iter_records(cfg))
    write_records(records, tmp_path / "c.jsonl")
    again = read_records(tmp_path / "c.jsonl")
    assert again == records
    rows = list(compute_indicators(again, build_baselines(again)).rows().values())
    write_indicator_table(tmp_path / "t.tsv", rows)
    assert read_indicator_table(tmp_path / "t.tsv") == rows


def test_baselines_round_trip(tmp_path):
    rs = m3() + list(iter_records(random_config(random.Random(8))))
    b = build_baselines(rs)
    write_baselines(tmp_path / "b.tsv", b)
    assert read_baselines(tmp_path / "b.tsv") == b


def test_bad_baselines_file(tmp_path):
    (tmp_path / "b.tsv").write_text("a\tb\n1\t2\n")
    with pytest.raises(ValueError):
        read_baselines(tmp_path / "b.tsv")


def test_config_round_trip(tmp_path):
    cfg = phase_config(n_countries=12, seed=3)
    dump_config(cfg, tmp_path / "c.yaml", header="test config")
    assert (tmp_path / "c.yaml").read_text().startswith("# test config\n")
    loaded = load_config(tmp_path / "c.yaml")
    assert loaded == cfg
    assert config_hash(loaded) == config_hash(cfg)
    assert config_hash(cfg.with_seed(4)) != config_hash(cfg)


def test_config_from_dict_names_fields():
    data = config_to_dict(phase_config(n_countries=5))
    data["profiles"][2]["ic_propensity"] = 1.3
    with pytest.raises(InvalidConfigError) as info:
        config_from_dict(data)
    assert "profiles[2].ic_propensity" in info.value.fields


def test_config_rejects_unknown_keys():
    data = config_to_dict(phase_config(n_countries=5))
    data["bogus"] = 1
    with pytest.raises(InvalidConfigError) as info:
        config_from_dict(data)
    assert "bogus" in info.value.fields


def test_scalar_citation_base():
    data = config_to_dict(phase_config(n_countries=5))
    data["citation_base"] = 6
    cfg = config_from_dict(data)
    assert set(cfg.citation_base.values()) == {6}


def test_doc_type_weights_keys():
    cfg = config_from_dict(config_to_dict(phase_config(n_countries=5)))
    assert set(cfg.doc_type_weights) == set(DocType)


def test_invalid_yaml(tmp_path):
    (tmp_path / "c.yaml").write_text("seed: [1,\n")
    with pytest.raises(InvalidConfigError):
        load_config(tmp_path / "c.yaml")


def test_shipped_config_matches_reference():
    from importlib import resources

    text = (resources.files("countryimpact") / "data" / "phase120.yaml").read_text()
    assert "214929" in text
    assert config_from_dict(yaml.safe_load(text)) == phase_config()
