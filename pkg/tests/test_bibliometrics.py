import io

import pytest

from collabnet.bibliometrics import (
    collaboration_level_distribution,
    productivity_distribution,
    write_distribution_csv,
)
from collabnet.corpus import generate_fixture, parse_corpus
from collabnet.networks import build_affiliation
from collabnet.records import PubClass, PublicationRecord


def rec(key, cls, authors, year=2000):
    return PublicationRecord(key=key, pub_class=cls, year=year, authors=tuple(authors))


def test_productivity_point_mass():
    # Every author wrote exactly one paper.
    aff = build_affiliation(
        [rec("p1", PubClass.OTHER, ["a"]), rec("p2", PubClass.OTHER, ["b", "c"])]
    )
    dist = productivity_distribution(aff)
    assert dist.counts == {1: 3}
    assert dist.mean == 1.0
    assert dist.relative_frequencies() == {1: 1.0}


def test_collaboration_level_point_mass():
    aff = build_affiliation([rec("p", PubClass.JOURNAL, ["a", "b", "c", "d"])])
    dist = collaboration_level_distribution(aff)
    assert dist.counts == {4: 1}
    assert dist.mean == 4.0


def test_distributions_match_record_oracle():
    xml = generate_fixture(seed=7, n_authors=40, n_papers=100)
    records = list(parse_corpus(xml))
    aff = build_affiliation(records)

    papers_per_author: dict[str, int] = {}
    for r in records:
        for a in r.authors:
            papers_per_author[a] = papers_per_author.get(a, 0) + 1
    expected_prod: dict[int, int] = {}
    for c in papers_per_author.values():
        expected_prod[c] = expected_prod.get(c, 0) + 1
    assert productivity_distribution(aff).counts == expected_prod

    conf_sizes: dict[int, int] = {}
    for r in records:
        if r.pub_class is PubClass.CONFERENCE and r.authors:
            conf_sizes[len(r.authors)] = conf_sizes.get(len(r.authors), 0) + 1
    dist = collaboration_level_distribution(aff, {PubClass.CONFERENCE})
    assert dist.counts == conf_sizes


def test_edge_count_identity():
    """Total mass of both distributions equals the affiliation edge count."""
    xml = generate_fixture(seed=9, n_authors=30, n_papers=70)
    aff = build_affiliation(parse_corpus(xml))
    prod = productivity_distribution(aff)
    level = collaboration_level_distribution(aff)
    assert prod.total_mass == aff.n_edges
    assert level.total_mass == aff.n_edges


def test_zero_author_papers_reported_not_counted():
    aff = build_affiliation(
        [
            rec("p1", PubClass.OTHER, []),
            rec("p2", PubClass.OTHER, ["a", "b"]),
            rec("p3", PubClass.OTHER, []),
        ]
    )
    dist = collaboration_level_distribution(aff)
    assert dist.excluded_zeros == 2
    assert dist.counts == {2: 1}
    assert dist.mean == 2.0  # zero-author records do not drag the mean


def test_relative_frequencies_sum_to_one(fixture_network):
    xml = generate_fixture(seed=4, n_authors=25, n_papers=60)
    aff = build_affiliation(parse_corpus(xml))
    for dist in (productivity_distribution(aff), collaboration_level_distribution(aff)):
        assert sum(dist.relative_frequencies().values()) == pytest.approx(1.0, abs=1e-12)


def test_class_argument_validation():
    aff = build_affiliation([rec("p", PubClass.OTHER, ["a", "b"])])
    with pytest.raises(ValueError):
        collaboration_level_distribution(aff, set())


def test_csv_output_format():
    aff = build_affiliation(
        [rec("p1", PubClass.OTHER, ["a", "b"]), rec("p2", PubClass.OTHER, ["a"])]
    )
    buf = io.StringIO()
    write_distribution_csv(productivity_distribution(aff), buf)
    assert buf.getvalue() == "value,count,relative_frequency\n1,1,0.5\n2,1,0.5\n"


def test_table_rows_rounding():
    aff = build_affiliation(
        [rec(f"p{i}", PubClass.OTHER, ["a"] if i else ["a", "b"]) for i in range(3)]
    )
    prod = productivity_distribution(aff)
    rows = prod.table_rows(10)
    assert rows[0] == (1, 0.5)
    assert sum(share for _, share in rows) == pytest.approx(1.0, abs=0.002)
