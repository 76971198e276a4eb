import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collabnet.corpus import generate_fixture, parse_corpus
from collabnet.networks import (
    DuplicateKeyError,
    GraphSummary,
    build_affiliation,
    network_from_edges,
    project_collaboration,
)
from collabnet.records import ALL_CLASSES, PubClass, PublicationRecord

R = PublicationRecord


def rec(key, cls, authors, year=2000):
    return R(key=key, pub_class=cls, year=year, authors=tuple(authors))


# Toy corpus mirroring the bipartite-example layout: four papers, five
# authors, one paper per pair-or-triple.
FIG1_RECORDS = [
    rec("p1", PubClass.CONFERENCE, ["a1", "a2"]),
    rec("p2", PubClass.CONFERENCE, ["a2", "a3", "a4"]),
    rec("p3", PubClass.JOURNAL, ["a4"]),
    rec("p4", PubClass.JOURNAL, ["a4", "a5"]),
]


def test_build_affiliation_toy():
    aff = build_affiliation(FIG1_RECORDS)
    assert aff.n_authors == 5
    assert aff.n_papers == 4
    assert aff.n_edges == 8
    assert aff.paper_degrees().tolist() == [2, 3, 1, 2]
    assert aff.author_degrees().tolist() == [1, 2, 1, 3, 1]


def test_build_affiliation_empty():
    aff = build_affiliation([])
    assert aff.n_authors == 0 and aff.n_papers == 0 and aff.n_edges == 0


def test_build_affiliation_duplicate_key():
    with pytest.raises(DuplicateKeyError, match="p1"):
        build_affiliation([rec("p1", PubClass.OTHER, ["x"]), rec("p1", PubClass.OTHER, ["y"])])


def test_build_affiliation_zero_author_paper():
    aff = build_affiliation([rec("p", PubClass.OTHER, [])])
    assert aff.n_papers == 1
    assert aff.n_edges == 0


def test_affiliation_counts_match_fixture_oracle():
    xml = generate_fixture(seed=7, n_authors=10, n_papers=10)
    records = list(parse_corpus(xml))
    aff = build_affiliation(records)
    distinct = {a for r in records for a in r.authors}
    incidences = sum(len(r.authors) for r in records)
    assert aff.n_authors == len(distinct)
    assert aff.n_edges == incidences


def test_projection_triangle():
    aff = build_affiliation([rec("p", PubClass.CONFERENCE, ["A", "B", "C"])])
    g = project_collaboration(aff)
    g.validate()
    assert g.n_nodes == 3
    assert g.n_edges == 3
    assert g.multiplicity.tolist() == [1, 1, 1]


def test_projection_repeat_pair():
    aff = build_affiliation(
        [rec("p1", PubClass.CONFERENCE, ["A", "B"]), rec("p2", PubClass.JOURNAL, ["A", "B"])]
    )
    g = project_collaboration(aff)
    assert g.n_edges == 1
    assert g.multiplicity.tolist() == [2]
    assert g.weights().tolist() == [0.5]


def test_projection_toy_shape():
    g = project_collaboration(build_affiliation(FIG1_RECORDS))
    # a1-a2, a2-a3, a2-a4, a3-a4, a4-a5; author a4's solo paper adds nothing.
    assert g.n_nodes == 5
    assert g.n_edges == 5
    by_name = {n: i for i, n in enumerate(g.names)}
    edges = {
        (g.names[u], g.names[v]) for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist())
    }
    assert {tuple(sorted(e)) for e in edges} == {
        ("a1", "a2"),
        ("a2", "a3"),
        ("a2", "a4"),
        ("a3", "a4"),
        ("a4", "a5"),
    }


def test_projection_drops_isolated_authors():
    aff = build_affiliation(
        [rec("p1", PubClass.CONFERENCE, ["A", "B"]), rec("p2", PubClass.JOURNAL, ["Solo"])]
    )
    g = project_collaboration(aff)
    assert g.names == ["A", "B"]


def test_projection_class_restriction():
    aff = build_affiliation(FIG1_RECORDS)
    conf = project_collaboration(aff, {PubClass.CONFERENCE})
    jour = project_collaboration(aff, {PubClass.JOURNAL})
    assert conf.n_edges == 4
    assert jour.n_edges == 1
    with pytest.raises(ValueError):
        project_collaboration(aff, set())


def test_projection_empty_stream():
    g = project_collaboration(build_affiliation([]))
    assert g.n_nodes == 0 and g.n_edges == 0


def test_multiplicities_partition_by_class():
    """Per-class multiplicities sum to whole-network multiplicities."""
    xml = generate_fixture(seed=13, n_authors=40, n_papers=120)
    aff = build_affiliation(parse_corpus(xml))
    whole = project_collaboration(aff, ALL_CLASSES)

    def edge_map(g):
        return {
            (g.names[u], g.names[v]) if g.names[u] < g.names[v] else (g.names[v], g.names[u]): m
            for u, v, m in zip(g.edge_u.tolist(), g.edge_v.tolist(), g.multiplicity.tolist())
        }

    total = {}
    for cls in (PubClass.CONFERENCE, PubClass.JOURNAL, PubClass.OTHER):
        sub = project_collaboration(aff, {cls})
        if sub.n_nodes == 0:
            continue
        for pair, m in edge_map(sub).items():
            total[pair] = total.get(pair, 0) + m
    assert total == edge_map(whole)


def test_multiplicity_sum_matches_pair_count():
    """Sum of multiplicities equals sum over papers of C(authors, 2)."""
    xml = generate_fixture(seed=21, n_authors=30, n_papers=80)
    records = list(parse_corpus(xml))
    aff = build_affiliation(records)
    g = project_collaboration(aff)
    expected = sum(len(r.authors) * (len(r.authors) - 1) // 2 for r in records)
    assert int(g.multiplicity.sum()) == expected


def test_projection_degree_bound():
    xml = generate_fixture(seed=3, n_authors=25, n_papers=60)
    records = list(parse_corpus(xml))
    g = project_collaboration(build_affiliation(records))
    deg = {name: d for name, d in zip(g.names, g.degrees().tolist())}
    bound: dict[str, int] = {}
    for r in records:
        for a in r.authors:
            bound[a] = bound.get(a, 0) + len(r.authors) - 1
    for name, d in deg.items():
        assert d <= bound[name]


def test_graph_summary_invariants(fixture_network):
    s = GraphSummary.of(fixture_network)
    assert s.mean_degree == pytest.approx(2 * s.n_edges / s.n_nodes)
    assert int(s.degree_sequence.sum()) == 2 * s.n_edges


def test_network_from_edges_validation():
    with pytest.raises(ValueError, match="self-loop"):
        network_from_edges(["a", "b"], [(0, 0)])
    with pytest.raises(ValueError, match="no edges"):
        network_from_edges(["a", "b", "c"], [(0, 1)])
    g = network_from_edges(["a", "b", "c"], [(0, 2)], drop_isolated=True)
    assert g.names == ["a", "c"]


def test_first_appearance_ids_are_deterministic():
    xml = generate_fixture(seed=2, n_authors=20, n_papers=40)
    g1 = project_collaboration(build_affiliation(parse_corpus(xml)))
    g2 = project_collaboration(build_affiliation(parse_corpus(xml)))
    assert g1.names == g2.names
    assert np.array_equal(g1.edge_u, g2.edge_u)
    assert np.array_equal(g1.multiplicity, g2.multiplicity)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.lists(st.integers(0, 12), min_size=2, max_size=5), min_size=1, max_size=15))
def test_projection_symmetric_and_loop_free(author_lists):
    records = [
        rec(f"p{i}", PubClass.OTHER, [f"a{j}" for j in dict.fromkeys(authors)])
        for i, authors in enumerate(author_lists)
    ]
    g = project_collaboration(build_affiliation(records))
    g.validate()
