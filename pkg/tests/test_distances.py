import math

import numpy as np
import pytest

from collabnet.components import connected_components
from collabnet.distances import (
    LexGeodesicEngine,
    PairDistanceEngine,
    distance_histogram,
    sampled_mean_distance,
    small_world_index,
    weighted_comparison,
)
from collabnet.networks import network_from_edges
from collabnet.synthetic import (
    gnm_random_network,
    preferential_attachment_network,
    random_multiplicity_network,
    ring_lattice,
)

from oracles import (
    adjacency_sets,
    bfs_oracle,
    complete_graph,
    disjoint_cliques,
    distance_histogram_oracle,
    lex_shortest_oracle,
    path_graph,
)


def test_path_graph_histogram():
    hist = distance_histogram(path_graph(3))
    assert hist.counts == {1: 2, 2: 1}
    assert hist.mean == pytest.approx(4 / 3)
    assert hist.diameter == 2
    assert hist.diameter_geodesic_count == 1
    assert hist.diameter_pair_count == 1
    assert hist.connected_pair_share == 1.0


def test_histogram_matches_bfs_oracle():
    for seed in (0, 1, 2):
        g = gnm_random_network(120, 150, seed=seed)
        hist = distance_histogram(g)
        expected = distance_histogram_oracle(g)
        assert hist.counts == expected["counts"]
        assert hist.mean == pytest.approx(expected["mean"])
        assert hist.diameter == expected["diameter"]
        assert hist.diameter_geodesic_count == expected["geodesics"]


def test_histogram_500_node_fixture():
    g = gnm_random_network(500, 700, seed=7)
    hist = distance_histogram(g)
    expected = distance_histogram_oracle(g)
    assert hist.counts == expected["counts"]
    assert hist.diameter_geodesic_count == expected["geodesics"]


def test_connected_pair_share_identity():
    """Share equals sum over components of C(size, 2) / C(n, 2), exactly."""
    g = disjoint_cliques([5, 3, 2])
    hist = distance_histogram(g)
    comp = connected_components(g)
    n = g.n_nodes
    expected_pairs = sum(s * (s - 1) // 2 for s in comp.sizes)
    assert hist.connected_pairs == expected_pairs
    assert hist.connected_pair_share == expected_pairs / (n * (n - 1) // 2)


def test_mean_consistency_with_per_source_bfs(sparse_network):
    hist = distance_histogram(sparse_network)
    adj = adjacency_sets(sparse_network)
    total = 0
    pairs = 0
    for s in range(sparse_network.n_nodes):
        for t, d in bfs_oracle(adj, s).items():
            if t != s:
                total += d
                pairs += 1
    assert hist.mean == pytest.approx(total / pairs)


def test_pair_engine_matches_oracle(sparse_network):
    engine = PairDistanceEngine(sparse_network)
    adj = adjacency_sets(sparse_network)
    rng = np.random.default_rng(0)
    for _ in range(200):
        s, t = rng.integers(0, sparse_network.n_nodes, 2).tolist()
        expected = bfs_oracle(adj, s).get(t, -1) if s != t else 0
        assert engine.distance(s, t) == expected


def test_sampled_exhaustive_matches_exact():
    g = gnm_random_network(40, 50, seed=3)
    comp = connected_components(g)
    giant = set(comp.nodes_of(0).tolist())
    hist_counts = {}
    adj = adjacency_sets(g)
    total = pairs = 0
    for s in sorted(giant):
        for t, d in bfs_oracle(adj, s).items():
            if t > s and t in giant:
                total += d
                pairs += 1
    est = sampled_mean_distance(g, sample_pairs=None)
    assert est.mean == pytest.approx(total / pairs)
    assert est.ci95 == (est.mean, est.mean)  # degenerate by construction
    assert est.sample_size == pairs


def test_sampled_mean_deterministic(fixture_network):
    a = sampled_mean_distance(fixture_network, 300, seed=42)
    b = sampled_mean_distance(fixture_network, 300, seed=42)
    assert a == b
    c = sampled_mean_distance(fixture_network, 300, seed=43)
    assert c.mean != a.mean or c.ci95 != a.ci95


def test_sampled_ci_brackets_mean(fixture_network):
    est = sampled_mean_distance(fixture_network, 500, seed=1)
    assert est.ci95[0] <= est.mean <= est.ci95[1]


def test_sampled_requires_giant():
    g = network_from_edges(["a", "b"], [(0, 1)])
    est = sampled_mean_distance(g, 10, seed=0)
    assert est.mean == 1.0


def test_small_world_reference_values():
    result = small_world_index(688_642, 2_283_764, observed_mean=6.41)
    assert result.k == pytest.approx(6.63, abs=0.005)
    assert result.expected_d == pytest.approx(7.10, abs=0.005)
    assert result.is_small_world is True


def test_small_world_ring_lattice_false():
    n = 1000
    g = ring_lattice(n)
    # Exact ring mean distance: for even n it is n^2/4 / (n-1).
    exact_mean = (n * n / 4) / (n - 1)
    result = small_world_index(g.n_nodes, g.n_edges, exact_mean)
    assert result.expected_d == pytest.approx(math.log(n) / math.log(2.0))
    assert result.is_small_world is False
    hist = distance_histogram(g)
    assert hist.mean == pytest.approx(exact_mean)


def test_small_world_boundary_inclusive():
    result = small_world_index(1000, 2000, observed_mean=math.log(1000) / math.log(4.0))
    assert result.is_small_world is True


def test_small_world_undefined_for_k_le_1():
    result = small_world_index(10, 5, observed_mean=2.0)
    assert result.k == 1.0
    assert result.expected_d is None
    assert result.is_small_world is None


def test_single_edge_weighted_comparison():
    g = network_from_edges(["a", "b"], [(0, 1, 4)])
    wc = weighted_comparison(g, sample_pairs=8, seed=0)
    assert wc.mean_weighted_distance == pytest.approx(0.25)
    assert wc.mean_hops_of_weighted_geodesic == 1.0
    assert wc.mean_unweighted_distance == 1.0
    assert wc.mean_weight_of_unweighted_geodesic == pytest.approx(0.25)


def test_lexicographic_objectives_match_enumeration_oracle():
    g = random_multiplicity_network(60, 75, max_multiplicity=5, seed=4)
    engine = LexGeodesicEngine(g)
    comp = connected_components(g)
    giant = comp.nodes_of(0).tolist()
    rng = np.random.default_rng(1)
    checked = 0
    adj = adjacency_sets(g)
    while checked < 40:
        s, t = rng.choice(giant, 2, replace=False).tolist()
        hops = bfs_oracle(adj, s).get(t)
        if hops is None or hops > 12:
            continue
        w_engine = engine.weighted_geodesic(s, t)
        w_oracle = lex_shortest_oracle(g, s, t, primary="weight")
        assert w_engine[0] == w_oracle[0]
        assert w_engine[1] == int(w_oracle[1])
        u_engine = engine.unweighted_geodesic(s, t)
        u_oracle = lex_shortest_oracle(g, s, t, primary="hops")
        assert u_engine[0] == int(u_oracle[0])
        assert u_engine[1] == u_oracle[1]
        checked += 1


def test_weighted_never_exceeds_hops(fixture_network):
    """Every edge weight is <= 1, so weighted distance <= hop distance per pair."""
    g = fixture_network
    engine = LexGeodesicEngine(g)
    comp = connected_components(g)
    giant = comp.nodes_of(0).tolist()
    rng = np.random.default_rng(9)
    for _ in range(60):
        s, t = rng.choice(giant, 2, replace=False).tolist()
        w, _ = engine.weighted_geodesic(s, t)
        hops, _ = engine.unweighted_geodesic(s, t)
        assert w <= hops + 1e-12


def test_paired_comparison_invariants(fixture_network):
    wc = weighted_comparison(fixture_network, sample_pairs=150, seed=5, paired=True)
    assert wc.mean_weighted_distance <= wc.mean_weight_of_unweighted_geodesic + 1e-12
    assert wc.mean_unweighted_distance <= wc.mean_hops_of_weighted_geodesic + 1e-12


def test_weighted_comparison_deterministic(fixture_network):
    a = weighted_comparison(fixture_network, 100, seed=11)
    b = weighted_comparison(fixture_network, 100, seed=11)
    assert a == b


def test_sampling_calibration_small():
    """CIs from independent seeds should cover the exact mean almost always."""
    g = preferential_attachment_network(400, 2, seed=0)
    exact = distance_histogram(g).mean
    covered = 0
    for seed in range(10):
        est = sampled_mean_distance(g, 400, seed=seed)
        if est.ci95[0] <= exact <= est.ci95[1]:
            covered += 1
    assert covered >= 9
