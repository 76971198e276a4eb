"""Connected and biconnected component decomposition."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .networks import CollaborationNetwork


@dataclass
class ComponentDecomposition:
    """Partition of the node set into connected components.

    Component ids are assigned by descending size (ties by smallest member
    id), so id 0 is always the giant component.
    """

    membership: np.ndarray  # node_id -> component_id
    sizes: list[int]  # descending
    count: int

    @property
    def giant_share(self) -> float:
        n = len(self.membership)
        return self.sizes[0] / n if n else 0.0

    def size_distribution(self) -> dict[int, int]:
        """size -> number of components of that size."""
        values, counts = np.unique(np.array(self.sizes), return_counts=True)
        return {int(s): int(c) for s, c in zip(values, counts)}

    def nodes_of(self, component_id: int) -> np.ndarray:
        return np.flatnonzero(self.membership == component_id)


def _union_find_labels(n: int, edge_u: np.ndarray, edge_v: np.ndarray) -> np.ndarray:
    parent = np.arange(n, dtype=np.int64)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]  # path halving
            x = parent[x]
        return x

    for u, v in zip(edge_u.tolist(), edge_v.tolist()):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    for x in range(n):
        parent[x] = find(x)
    return parent


def connected_components(g: CollaborationNetwork) -> ComponentDecomposition:
    """Union-find decomposition with deterministic component numbering."""
    n = g.n_nodes
    if n == 0:
        return ComponentDecomposition(membership=np.zeros(0, dtype=np.int64), sizes=[], count=0)
    roots = _union_find_labels(n, g.edge_u, g.edge_v)
    uniq_roots, inverse, counts = np.unique(roots, return_inverse=True, return_counts=True)
    # Renumber: descending size, ties by smallest root id (= smallest member).
    order = np.lexsort((uniq_roots, -counts))
    rank = np.empty(len(uniq_roots), dtype=np.int64)
    rank[order] = np.arange(len(uniq_roots))
    membership = rank[inverse]
    sizes = counts[order].tolist()
    return ComponentDecomposition(membership=membership, sizes=sizes, count=len(sizes))


def components_under_mask(g: CollaborationNetwork, alive: np.ndarray) -> tuple[int, int]:
    """(giant size, second size) among nodes where ``alive`` is True.

    From-scratch recomputation used to cross-check incremental percolation
    bookkeeping.
    """
    n = g.n_nodes
    parent = np.arange(n, dtype=np.int64)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist()):
        if alive[u] and alive[v]:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru
    sizes: dict[int, int] = {}
    for x in np.flatnonzero(alive).tolist():
        r = find(x)
        sizes[r] = sizes.get(r, 0) + 1
    ordered = sorted(sizes.values(), reverse=True)
    giant = ordered[0] if ordered else 0
    second = ordered[1] if len(ordered) > 1 else 0
    return giant, second


@dataclass
class BiconnectedDecomposition:
    """Maximal 2-connected node sets plus articulation points.

    ``components`` is ordered by descending size (ties by smallest member);
    a node may appear in several sets.  Bridge edges form size-2 sets.
    """

    components: list[np.ndarray]
    articulation_points: np.ndarray

    def largest_share(self, n_nodes: int) -> float:
        return len(self.components[0]) / n_nodes if self.components and n_nodes else 0.0


def biconnected_components(g: CollaborationNetwork) -> BiconnectedDecomposition:
    """Iterative Hopcroft-Tarjan biconnected decomposition."""
    n = g.n_nodes
    indptr, adj, _ = g.adjacency()
    disc = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    articulation = np.zeros(n, dtype=bool)
    edge_stack: list[tuple[int, int]] = []
    comp_sets: list[np.ndarray] = []
    timer = 0

    for start in range(n):
        if disc[start] != -1:
            continue
        # Stack frames: [node, parent, next-neighbor cursor, child count at root]
        stack = [[start, -1, indptr[start]]]
        disc[start] = low[start] = timer
        timer += 1
        root_children = 0
        while stack:
            frame = stack[-1]
            node, parent, cursor = frame
            if cursor < indptr[node + 1]:
                frame[2] += 1
                nxt = int(adj[cursor])
                if nxt == parent:
                    # Parallel edges cannot occur (multiplicities fold them),
                    # so the parent edge is skipped exactly once.
                    continue
                if disc[nxt] == -1:
                    edge_stack.append((node, nxt))
                    disc[nxt] = low[nxt] = timer
                    timer += 1
                    stack.append([nxt, node, indptr[nxt]])
                elif disc[nxt] < disc[node]:
                    edge_stack.append((node, nxt))
                    if disc[nxt] < low[node]:
                        low[node] = disc[nxt]
            else:
                stack.pop()
                if not stack:
                    break
                parent_node = stack[-1][0]
                if node != start and low[node] < low[parent_node]:
                    low[parent_node] = low[node]
                if parent_node == start:
                    root_children += 1
                if low[node] >= disc[parent_node]:
                    # parent_node separates: everything stacked above the tree
                    # edge (parent_node, node) is one biconnected component.
                    members: set[int] = set()
                    while edge_stack:
                        a, b = edge_stack.pop()
                        members.add(a)
                        members.add(b)
                        if (a, b) == (parent_node, node):
                            break
                    if members:
                        comp_sets.append(np.array(sorted(members), dtype=np.int64))
                    if parent_node != start:
                        articulation[parent_node] = True
        if root_children >= 2:
            articulation[start] = True

    comp_sets.sort(key=lambda c: (-len(c), int(c[0])))
    return BiconnectedDecomposition(
        components=comp_sets, articulation_points=np.flatnonzero(articulation)
    )
