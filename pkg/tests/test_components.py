import numpy as np
import pytest

from collabnet.components import (
    biconnected_components,
    components_under_mask,
    connected_components,
)
from collabnet.networks import network_from_edges
from collabnet.synthetic import gnm_random_network

from oracles import (
    complete_graph,
    components_oracle,
    disjoint_cliques,
    path_graph,
    star_graph,
    verify_biconnected_decomposition,
)


def test_k5_single_component():
    comp = connected_components(complete_graph(5))
    assert comp.count == 1
    assert comp.sizes == [5]
    assert comp.giant_share == 1.0


def test_components_match_oracle_on_fixtures():
    for seed in range(6):
        g = gnm_random_network(60, 55, seed=seed)
        comp = connected_components(g)
        expected = components_oracle(g)
        assert comp.sizes == [len(c) for c in expected]
        # Membership is an actual partition matching the oracle's sets.
        for cid, nodes in enumerate(expected):
            ids = {int(comp.membership[v]) for v in nodes}
            assert ids == {cid}


def test_component_numbering_is_by_size():
    g = disjoint_cliques([4, 2, 3])
    comp = connected_components(g)
    assert comp.sizes == [4, 3, 2]
    assert comp.size_distribution() == {2: 1, 3: 1, 4: 1}
    assert sorted(comp.nodes_of(0).tolist()) == [0, 1, 2, 3]


def test_empty_network_components():
    comp = connected_components(network_from_edges([], []))
    assert comp.count == 0 and comp.sizes == []


def test_triangle_biconnected():
    bc = biconnected_components(complete_graph(3))
    assert len(bc.components) == 1
    assert bc.components[0].tolist() == [0, 1, 2]
    assert bc.articulation_points.tolist() == []


def test_path_biconnected_components_are_bridges():
    bc = biconnected_components(path_graph(4))
    assert [len(c) for c in bc.components] == [2, 2, 2]
    assert bc.articulation_points.tolist() == [1, 2]


def test_star_center_is_articulation():
    bc = biconnected_components(star_graph(4))
    assert bc.articulation_points.tolist() == [0]
    assert all(len(c) == 2 for c in bc.components)


def test_barbell_decomposition():
    # Two triangles joined by a bridge: 3 bicomponents, 2 articulation points.
    g = network_from_edges(
        list("abcdef"), [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
    )
    bc = biconnected_components(g)
    assert sorted(len(c) for c in bc.components) == [2, 3, 3]
    assert bc.articulation_points.tolist() == [2, 3]
    verify_biconnected_decomposition(g, bc.components, bc.articulation_points)


def test_biconnected_matches_node_deletion_oracle():
    for seed in (1, 2, 3, 4):
        g = gnm_random_network(50, 60, seed=seed)
        bc = biconnected_components(g)
        verify_biconnected_decomposition(g, bc.components, bc.articulation_points)


def test_largest_bicomponent_inside_giant_component():
    for seed in (5, 6):
        g = gnm_random_network(120, 150, seed=seed)
        comp = connected_components(g)
        bc = biconnected_components(g)
        giant_nodes = set(comp.nodes_of(0).tolist())
        assert set(bc.components[0].tolist()) <= giant_nodes


def test_components_under_mask():
    g = disjoint_cliques([4, 3])
    alive = np.ones(7, dtype=bool)
    assert components_under_mask(g, alive) == (4, 3)
    alive[0] = alive[1] = False
    assert components_under_mask(g, alive) == (3, 2)
    assert components_under_mask(g, np.zeros(7, dtype=bool)) == (0, 0)
