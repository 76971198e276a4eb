"""Synthetic collaboration-network generators for fixtures and calibration runs."""
from __future__ import annotations

import numpy as np

from .networks import CollaborationNetwork, network_from_edges


def _names(n: int) -> list[str]:
    return [f"v{i}" for i in range(n)]


def preferential_attachment_network(
    n: int, edges_per_node: int = 2, seed: int = 0
) -> CollaborationNetwork:
    """Barabási–Albert-style growth: new nodes attach to ``edges_per_node``
    distinct existing nodes with degree-proportional probability.

    Connected by construction, right-skewed degree distribution; all
    multiplicities 1.
    """
    m = edges_per_node
    if n < m + 1:
        raise ValueError("need n >= edges_per_node + 1")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    # Degree-weighted endpoint pool seeded with a small clique.
    pool: list[int] = []
    for u in range(m + 1):
        for v in range(u + 1, m + 1):
            edges.append((u, v))
            pool.append(u)
            pool.append(v)
    for new in range(m + 1, n):
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(pool[int(rng.integers(0, len(pool)))])
        for target in sorted(chosen):
            edges.append((target, new))
            pool.append(target)
            pool.append(new)
    return network_from_edges(_names(n), edges)


def gnm_random_network(
    n: int, m: int, seed: int = 0, drop_isolated: bool = True
) -> CollaborationNetwork:
    """Uniform G(n, m): m distinct unordered pairs.

    Nodes that end up without any edge are dropped (collaboration networks
    carry no isolated nodes), so the result may have fewer than n nodes.
    """
    max_edges = n * (n - 1) // 2
    if m > max_edges:
        raise ValueError(f"m={m} exceeds the {max_edges} possible edges")
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < m:
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u == v:
            continue
        chosen.add((u, v) if u < v else (v, u))
    return network_from_edges(_names(n), sorted(chosen), drop_isolated=drop_isolated)


def ring_lattice(n: int) -> CollaborationNetwork:
    """Cycle graph; exact mean distance is known in closed form, which makes
    it the stock counterexample for the small-world test."""
    if n < 3:
        raise ValueError("ring needs at least 3 nodes")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return network_from_edges(_names(n), [(min(u, v), max(u, v)) for u, v in edges])


def random_multiplicity_network(
    n: int, m: int, max_multiplicity: int = 5, seed: int = 0
) -> CollaborationNetwork:
    """G(n, m) with uniform random edge multiplicities, for weighted-path tests."""
    base = gnm_random_network(n, m, seed=seed)
    rng = np.random.default_rng([seed, 1])
    mult = rng.integers(1, max_multiplicity + 1, size=base.n_edges).astype(np.int64)
    return CollaborationNetwork(
        names=base.names, edge_u=base.edge_u, edge_v=base.edge_v, multiplicity=mult
    )
