import random

import pytest

from countryimpact.io import RecordFileError, dumps_record, read_baselines, write_baselines, write_records
from countryimpact.normalization import MissingStratumError, build_baselines
from countryimpact.pipeline import analyze_file, analyze_records, split_file, validate_file
from countryimpact.synthgen import iter_records
from helpers import m3, random_config, rec


@pytest.fixture
def corpus_file(tmp_path):
    records = list(iter_records(random_config(random.Random(21), max_records=400, ca_unknown_share=0.1)))
    path = tmp_path / "c.jsonl"
    write_records(records, path)
    return path, records


def test_split_file_covers_every_line(tmp_path):
    path = tmp_path / "x.txt"
    path.write_bytes(b"".join(b"line %d\n" % i for i in range(1, 101)))
    for parts in (1, 2, 3, 7, 150):
        ranges = split_file(path, parts)
        assert ranges[0][0] == 0 and ranges[-1][1] == path.stat().st_size
        data = path.read_bytes()
        for start, end, first_line in ranges:
            assert start == 0 or data[start - 1:start] == b"\n"
            if start < end:
                assert data[start:end].split(b"\n")[0] == b"line %d" % first_line


def test_file_matches_in_memory(corpus_file):
    path, records = corpus_file
    assert analyze_file(path).rows == analyze_records(records).rows


@pytest.mark.parametrize("workers", [2, 3])
def test_worker_count_does_not_change_results(corpus_file, workers):
    path, _ = corpus_file
    assert analyze_file(path, workers=workers).rows == analyze_file(path).rows


def test_line_permutation_does_not_change_results(corpus_file, tmp_path):
    path, records = corpus_file
    shuffled = list(records)
    random.Random(4).shuffle(shuffled)
    other = tmp_path / "shuffled.jsonl"
    write_records(shuffled, other)
    assert analyze_file(other).rows == analyze_file(path).rows


def test_supplied_baselines_give_same_rows(corpus_file, tmp_path):
    path, records = corpus_file
    write_baselines(tmp_path / "b.tsv", build_baselines(records))
    supplied = analyze_file(path, baselines=read_baselines(tmp_path / "b.tsv"), workers=2)
    assert supplied.rows == analyze_file(path).rows


def test_totals(corpus_file):
    path, records = corpus_file
    a = analyze_file(path)
    assert a.n_records == len(records)
    assert a.ca_unknown == sum(r.corresponding_index is None for r in records)
    assert a.years == sorted({r.year for r in records})


def test_missing_stratum(tmp_path):
    path = tmp_path / "m3.jsonl"
    write_records(m3(), path)
    baselines = build_baselines([rec("z", [("i", "AAA")], citations=1, disciplines=(9,))])
    with pytest.raises(MissingStratumError):
        analyze_file(path, baselines=baselines)


def test_bad_and_duplicate_lines_reported_in_order(tmp_path):
    lines = [dumps_record(r) for r in m3()]
    lines = lines + [lines[0], "{oops"] + lines[1:]
    path = tmp_path / "bad.jsonl"
    path.write_text("\n".join(lines) + "\n")
    for workers in (1, 3):
        with pytest.raises(RecordFileError) as info:
            analyze_file(path, workers=workers)
        assert [(d.line, d.issues[0].code) for d in info.value.diagnostics] == [
            (4, "DuplicateDocId"), (5, "ParseError"), (6, "DuplicateDocId"), (7, "DuplicateDocId"),
        ]


def test_validate_file(tmp_path):
    lines = [dumps_record(r) for r in m3()]
    path = tmp_path / "v.jsonl"
    path.write_text("\n".join(lines) + "\n")
    assert validate_file(path) == (3, [])
    path.write_text("\n".join([lines[0], lines[1].replace("BBB", "B1B"), lines[2], lines[2]]))
    valid, problems = validate_file(path)
    assert valid == 2
    assert [d.line for d in problems] == [2, 4]
