"""Degree statistics, concentration, clustering, baselines, and assortative mixing."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from .networks import CollaborationNetwork


@dataclass(frozen=True)
class DegreeStats:
    mean: float
    median: int
    q3: int
    max: int
    skewness: float | None


def _nearest_rank(sorted_values: np.ndarray, q: float) -> float:
    rank = max(1, math.ceil(q * len(sorted_values)))
    return sorted_values[rank - 1]


def degree_stats(g: CollaborationNetwork) -> DegreeStats:
    """Five-number-ish summary; skewness is the population third standardized
    central moment, None for constant degree sequences."""
    if g.n_nodes < 1:
        raise ValueError("degree_stats requires at least one node")
    deg = np.sort(g.degrees())
    mean = float(deg.mean())
    centered = deg - mean
    m2 = float(np.mean(centered**2))
    skew = float(np.mean(centered**3) / m2**1.5) if m2 > 0 else None
    return DegreeStats(
        mean=mean,
        median=int(_nearest_rank(deg, 0.5)),
        q3=int(_nearest_rank(deg, 0.75)),
        max=int(deg[-1]),
        skewness=skew,
    )


@dataclass
class ConcentrationResult:
    """Lorenz curve (most-collaborative-first) and Gini coefficient."""

    lorenz_points: list[tuple[float, float]]  # (top_share, collaboration_share)
    gini: float


def concentration(degree_sequence: np.ndarray) -> ConcentrationResult:
    """Concentration of a positive sequence.

    Lorenz points are sampled at every 1% of units (nearest rank, exact
    cumulative sums, no interpolation); for small sequences every unit
    boundary is included as well.  Gini is the uncorrected population
    mean-absolute-difference coefficient, computed via the sorted identity
    which equals the O(n^2) double sum exactly.
    """
    x = np.asarray(degree_sequence, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty degree sequence")
    if np.any(x < 1):
        raise ValueError("degrees must be >= 1")
    n = x.size
    desc = np.sort(x)[::-1]
    cum = np.cumsum(desc)
    total = cum[-1]

    ranks = {max(1, math.ceil(p / 100.0 * n)) for p in range(1, 101)}
    if n <= 1000:
        ranks.update(range(1, n + 1))
    points = [(0.0, 0.0)]
    points += [(k / n, cum[k - 1] / total) for k in sorted(ranks)]

    asc = desc[::-1]
    i = np.arange(1, n + 1, dtype=np.float64)
    gini = float(np.sum((2 * i - n - 1) * asc) / (n * n * asc.mean()))
    return ConcentrationResult(lorenz_points=points, gini=gini)


@dataclass(frozen=True)
class TriadCensus:
    n_triangles: int
    n_connected_triples: int


@dataclass(frozen=True)
class TransitivityResult:
    value: float | None  # None when the graph has no connected triples
    census: TriadCensus


def _edge_common_neighbor_counts(g: CollaborationNetwork) -> np.ndarray:
    """Number of common neighbors per canonical edge (sorted adjacency merge)."""
    indptr, adj, _ = g.adjacency()
    neigh = [adj[indptr[i] : indptr[i + 1]] for i in range(g.n_nodes)]
    counts = np.zeros(g.n_edges, dtype=np.int64)
    for e, (u, v) in enumerate(zip(g.edge_u.tolist(), g.edge_v.tolist())):
        a, b = neigh[u], neigh[v]
        if len(a) > len(b):
            a, b = b, a
        pos = np.searchsorted(b, a)
        pos[pos == len(b)] = 0
        counts[e] = int(np.count_nonzero(b[pos] == a))
    return counts


def triangle_counts(g: CollaborationNetwork) -> tuple[int, np.ndarray]:
    """(total triangles, per-node triangle counts)."""
    c = _edge_common_neighbor_counts(g)
    per_node_double = np.zeros(g.n_nodes, dtype=np.int64)
    np.add.at(per_node_double, g.edge_u, c)
    np.add.at(per_node_double, g.edge_v, c)
    # Each triangle at node i is seen via two of i's edges.
    per_node = per_node_double // 2
    total = int(c.sum()) // 3
    return total, per_node


def transitivity(g: CollaborationNetwork) -> TransitivityResult:
    """Global transitivity T = 3 * triangles / connected triples."""
    n_tri, _ = triangle_counts(g)
    deg = g.degrees().astype(np.int64)
    n_triples = int(np.sum(deg * (deg - 1) // 2))
    value = 3.0 * n_tri / n_triples if n_triples > 0 else None
    return TransitivityResult(value=value, census=TriadCensus(n_tri, n_triples))


@dataclass
class ClusteringResult:
    average: float
    per_node: np.ndarray  # C_i, with degree<2 nodes fixed at 0 and counted
    share_at_one: float


def avg_clustering(g: CollaborationNetwork) -> ClusteringResult:
    """Mean local clustering; C_i := 0 for degree < 2 (configurable upstream)."""
    if g.n_nodes == 0:
        raise ValueError("avg_clustering requires a nonempty network")
    _, tri = triangle_counts(g)
    deg = g.degrees().astype(np.int64)
    pairs = deg * (deg - 1) // 2
    ci = np.zeros(g.n_nodes, dtype=np.float64)
    mask = pairs > 0
    ci[mask] = tri[mask] / pairs[mask]
    at_one = int(np.count_nonzero(tri[mask] == pairs[mask]))
    return ClusteringResult(
        average=float(ci.mean()), per_node=ci, share_at_one=at_one / g.n_nodes
    )


def clique_neighborhood_census(g: CollaborationNetwork) -> dict[int, int]:
    """Histogram of |{i} ∪ N(i)| over nodes whose neighborhood is a clique.

    Requires degree >= 2 (the minimal pattern is a triangle); integer
    triangle-vs-pair comparison avoids any float equality test.
    """
    _, tri = triangle_counts(g)
    deg = g.degrees().astype(np.int64)
    pairs = deg * (deg - 1) // 2
    members = np.flatnonzero((deg >= 2) & (tri == pairs))
    census: dict[int, int] = {}
    for d in (deg[members] + 1).tolist():
        census[d] = census.get(d, 0) + 1
    return dict(sorted(census.items()))


@dataclass(frozen=True)
class TransitivityBaselines:
    random: float | None
    configuration: float | None


def baseline_transitivity(n: int, m: int, degree_sequence: np.ndarray) -> TransitivityBaselines:
    """Null-model transitivity: G(n, m) random graph and configuration model."""
    if n < 2:
        raise ValueError("need at least two nodes")
    deg = np.asarray(degree_sequence, dtype=np.float64)
    k1 = float(deg.mean())
    if k1 == 0:
        return TransitivityBaselines(random=m / (n * (n - 1) / 2), configuration=None)
    k2 = float(np.mean(deg**2))
    return TransitivityBaselines(
        random=m / (n * (n - 1) / 2),
        configuration=(k2 - k1) ** 2 / (n * k1**3),
    )


@dataclass(frozen=True)
class AssortativityResult:
    pearson: float | None
    log_pearson: float | None
    spearman: float | None


def _pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(np.dot(xc, xc)) * float(np.dot(yc, yc)))
    if denom == 0:
        return None
    return float(np.dot(xc, yc) / denom)


def assortativity(g: CollaborationNetwork) -> AssortativityResult:
    """Degree correlation over the 2m ordered endpoint pairs.

    The log variant applies natural log to degrees before Pearson; Spearman
    uses average ranks for ties.  Regular graphs yield None (zero variance).
    """
    if g.n_edges < 2:
        raise ValueError("assortativity needs at least two edges")
    deg = g.degrees().astype(np.float64)
    x = np.concatenate([deg[g.edge_u], deg[g.edge_v]])
    y = np.concatenate([deg[g.edge_v], deg[g.edge_u]])
    pearson = _pearson(x, y)
    if pearson is None:
        return AssortativityResult(None, None, None)
    log_pearson = _pearson(np.log(x), np.log(y))
    rx = scipy.stats.rankdata(x)
    ry = scipy.stats.rankdata(y)
    return AssortativityResult(pearson, log_pearson, _pearson(rx, ry))
