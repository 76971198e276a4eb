import gzip
import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collabnet.corpus import (
    ChunkStream,
    CorpusParseError,
    generate_fixture,
    generate_fixture_chunks,
    parse_corpus,
)
from collabnet.records import ALL_CLASSES, CorpusFilter, PubClass, classify_publication

THREE_RECORDS = b"""<?xml version="1.0" encoding="UTF-8"?>
<dblp>
<inproceedings key="conf/x/1"><author>Alice</author><author>Bob</author><year>2001</year></inproceedings>
<inproceedings key="conf/x/2"><author>Bob</author><year>2003</year></inproceedings>
<article key="journals/y/3"><author>Carol</author><author>Alice</author><year>2005</year></article>
</dblp>
"""


def test_classify_defaults():
    assert classify_publication("inproceedings") is PubClass.CONFERENCE
    assert classify_publication("article") is PubClass.JOURNAL
    assert classify_publication("phdthesis") is PubClass.OTHER
    assert classify_publication("proceedings") is PubClass.OTHER


def test_classify_override_and_empty():
    assert classify_publication("book", {"book": PubClass.JOURNAL}) is PubClass.JOURNAL
    with pytest.raises(ValueError):
        classify_publication("")


def test_parse_three_record_fixture_keep_all():
    records = list(parse_corpus(THREE_RECORDS))
    assert len(records) == 3
    assert records[0].key == "conf/x/1"
    assert records[0].authors == ("Alice", "Bob")
    assert records[2].pub_class is PubClass.JOURNAL


def test_year_filter_drops_2009():
    xml = b'<dblp><article key="a" ><author>X</author><year>2009</year></article></dblp>'
    stream = parse_corpus(xml, CorpusFilter(year_min=1936, year_max=2008))
    assert list(stream) == []
    assert stream.summary.skipped_year == 1
    assert stream.summary.kept == 0


def test_class_filter_counts():
    stream = parse_corpus(THREE_RECORDS, CorpusFilter(classes=frozenset({PubClass.JOURNAL})))
    records = list(stream)
    assert len(records) == 1
    assert stream.summary.skipped_class == 2


def test_empty_corpus():
    stream = parse_corpus(b"<dblp></dblp>")
    assert list(stream) == []
    assert stream.summary.as_dict() == {
        "seen": 0,
        "kept": 0,
        "skipped_year": 0,
        "skipped_class": 0,
        "malformed": 0,
    }
    assert stream.summary.complete


def test_missing_year_is_malformed_not_fatal():
    xml = b'<dblp><article key="a"><author>X</author></article><article key="b"><author>Y</author><year>2000</year></article></dblp>'
    stream = parse_corpus(xml)
    assert [r.key for r in stream] == ["b"]
    assert stream.summary.malformed == 1


def test_year_out_of_range_is_malformed():
    xml = b'<dblp><article key="a"><year>1850</year></article></dblp>'
    stream = parse_corpus(xml)
    assert list(stream) == []
    assert stream.summary.malformed == 1


def test_missing_key_is_malformed():
    xml = b"<dblp><article><author>X</author><year>2000</year></article></dblp>"
    stream = parse_corpus(xml)
    assert list(stream) == []
    assert stream.summary.malformed == 1


def test_malformed_xml_fatal_with_offset():
    xml = b'<dblp><article key="a"><year>2000</year>'
    with pytest.raises(CorpusParseError) as exc:
        list(parse_corpus(xml))
    assert exc.value.byte_offset > 0


def test_duplicate_author_names_collapse():
    xml = b'<dblp><article key="a"><author>X</author><author>X</author><author>Y</author><year>2000</year></article></dblp>'
    (record,) = parse_corpus(xml)
    assert record.authors == ("X", "Y")


def test_zero_author_record_kept():
    xml = b'<dblp><proceedings key="p"><year>2000</year></proceedings></dblp>'
    (record,) = parse_corpus(xml)
    assert record.authors == ()
    assert record.pub_class is PubClass.OTHER


def test_entity_resolution():
    xml = (
        b'<?xml version="1.0" encoding="UTF-8"?>\n<!DOCTYPE dblp SYSTEM "dblp.dtd">\n'
        b'<dblp><article key="a"><author>J&uuml;rgen M&uuml;ller</author>'
        b"<year>2000</year></article></dblp>"
    )
    (record,) = parse_corpus(xml)
    assert record.authors == ("Jürgen Müller",)


def test_gzip_detection(tmp_path):
    path = tmp_path / "corpus.xml.gz"
    path.write_bytes(gzip.compress(THREE_RECORDS))
    assert len(list(parse_corpus(str(path)))) == 3


def test_filter_validation():
    with pytest.raises(ValueError):
        CorpusFilter(year_min=2010, year_max=2000)
    with pytest.raises(ValueError):
        CorpusFilter(classes=frozenset())


# ---------------------------------------------------------------------------
# Fixture generation


def test_fixture_empty():
    xml = generate_fixture(seed=1, n_authors=10, n_papers=0)
    assert list(parse_corpus(xml)) == []


def test_fixture_round_trip_count():
    xml = generate_fixture(seed=1, n_authors=10, n_papers=5)
    assert len(list(parse_corpus(xml))) == 5


def test_fixture_deterministic():
    assert generate_fixture(3, 20, 30) == generate_fixture(3, 20, 30)
    assert generate_fixture(3, 20, 30) != generate_fixture(4, 20, 30)


def test_fixture_argument_errors():
    with pytest.raises(ValueError):
        generate_fixture(1, 10, 5, mean_authors_per_paper=0.5)
    with pytest.raises(ValueError):
        generate_fixture(1, 0, 5)


def test_fixture_author_count_mean_tracks_request():
    xml = generate_fixture(seed=2, n_authors=500, n_papers=2000, mean_authors_per_paper=3.0)
    records = list(parse_corpus(xml))
    mean = sum(len(r.authors) for r in records) / len(records)
    assert 2.5 < mean < 3.5


@settings(max_examples=25, deadline=None)
@given(
    lo=st.integers(min_value=1990, max_value=2000),
    hi=st.integers(min_value=2000, max_value=2008),
)
def test_filter_monotonicity(lo, hi):
    """Narrowing the year range never increases the kept count."""
    xml = generate_fixture(seed=5, n_authors=30, n_papers=60)
    wide = parse_corpus(xml, CorpusFilter(1990, 2008))
    narrow = parse_corpus(xml, CorpusFilter(lo, hi))
    n_wide = sum(1 for _ in wide)
    n_narrow = sum(1 for _ in narrow)
    assert n_narrow <= n_wide


def test_streaming_memory_bounded():
    """Parse a million-record corpus without materializing it; peak heap stays
    far below corpus size."""
    import tracemalloc

    n_papers = 1_000_000
    stream = ChunkStream(generate_fixture_chunks(9, n_authors=5000, n_papers=n_papers))
    tracemalloc.start()
    count = sum(1 for _ in parse_corpus(stream, CorpusFilter(year_min=1900, year_max=2100)))
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    assert count == n_papers
    assert peak < 50 * 1024 * 1024  # corpus is ~150 MB of XML
