"""Node-removal percolation: strategies, traces, tipping points, hub analysis."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .components import components_under_mask, connected_components
from .networks import CollaborationNetwork


class Strategy(enum.Enum):
    RANDOM = "random"
    DEGREE_DRIVEN = "degree"
    EIGENVECTOR_DRIVEN = "eigenvector"


class PowerIterationError(Exception):
    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


def eigenvector_centrality(
    g: CollaborationNetwork, tol: float = 1e-8, max_iter: int = 10000
) -> np.ndarray:
    """Dominant adjacency eigenvector, normalized to unit maximum.

    Iterates (A + I) v, which has the same eigenvectors as A but converges on
    bipartite structures where plain power iteration oscillates.
    """
    matrix = g.to_scipy()
    v = np.ones(g.n_nodes, dtype=np.float64)
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        w = matrix @ v + v
        w /= w.max()
        residual = float(np.abs(w - v).max())
        v = w
        if residual < tol:
            return v
    raise PowerIterationError(max_iter, residual)


def removal_order(g: CollaborationNetwork, strategy: Strategy, seed: int = 0) -> np.ndarray:
    """Static removal ordering computed once on the original graph.

    Degree and eigenvector orders sort descending with ties broken by
    ascending node id; the random order is a seeded uniform shuffle.
    """
    n = g.n_nodes
    ids = np.arange(n)
    if strategy is Strategy.RANDOM:
        return np.random.default_rng(seed).permutation(n).astype(np.int64)
    if strategy is Strategy.DEGREE_DRIVEN:
        return np.lexsort((ids, -g.degrees())).astype(np.int64)
    scores = eigenvector_centrality(g)
    return np.lexsort((ids, -scores)).astype(np.int64)


@dataclass(frozen=True)
class PercolationPlan:
    strategy: Strategy
    steps: int = 20
    step_size: float | int = 0.0075  # fraction of nodes per step; int means node count
    repetitions: int = 10  # random strategy only
    seed: int = 0

    def checkpoints(self, n_nodes: int) -> list[int]:
        """Removal counts per step (0 included), strictly increasing."""
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if isinstance(self.step_size, int) and not isinstance(self.step_size, bool):
            counts = [self.step_size * i for i in range(self.steps + 1)]
        else:
            counts = [int(round(self.step_size * i * n_nodes)) for i in range(self.steps + 1)]
        if counts[-1] > n_nodes:
            raise ValueError(
                f"plan removes {counts[-1]} nodes but the network only has {n_nodes}"
            )
        return sorted(set(counts))


@dataclass
class PercolationTrace:
    """Giant/second component shares on the removal grid.

    ``points`` holds (removed_fraction, giant_share, second_share); for the
    random strategy it is the across-repetition average and ``envelope``
    carries (fraction, min_giant, max_giant).  Shares are relative to the
    original node count.
    """

    strategy: Strategy
    points: list[tuple[float, float, float]]
    repetition_points: list[list[tuple[float, float, float]]]
    envelope: list[tuple[float, float, float]] | None = None


def _shares_on_grid(
    g: CollaborationNetwork, order: np.ndarray, checkpoints: list[int]
) -> list[tuple[float, float, float]]:
    """Union-find in reverse removal order; evaluates each checkpoint once."""
    n = g.n_nodes
    indptr, adj, _ = g.adjacency()
    adj_list = adj.tolist()
    indptr_list = indptr.tolist()
    parent = list(range(n))
    size = [1] * n
    alive = [False] * n
    size_counts: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def top_two() -> tuple[int, int]:
        if not size_counts:
            return 0, 0
        ordered = sorted(size_counts)
        giant = ordered[-1]
        if size_counts[giant] >= 2:
            return giant, giant
        return giant, (ordered[-2] if len(ordered) > 1 else 0)

    results: dict[int, tuple[float, float, float]] = {}
    order_list = order.tolist()
    idx = n - 1
    for cp in sorted(checkpoints, reverse=True):
        while idx >= cp:
            v = order_list[idx]
            idx -= 1
            alive[v] = True
            size_counts[1] = size_counts.get(1, 0) + 1
            for k in range(indptr_list[v], indptr_list[v + 1]):
                w = adj_list[k]
                if not alive[w]:
                    continue
                rv, rw = find(v), find(w)
                if rv == rw:
                    continue
                if size[rv] < size[rw]:
                    rv, rw = rw, rv
                for s in (size[rv], size[rw]):
                    size_counts[s] -= 1
                    if not size_counts[s]:
                        del size_counts[s]
                parent[rw] = rv
                size[rv] += size[rw]
                size_counts[size[rv]] = size_counts.get(size[rv], 0) + 1
        giant, second = top_two()
        results[cp] = (cp / n, giant / n, second / n)
    return [results[cp] for cp in checkpoints]


def percolate(g: CollaborationNetwork, plan: PercolationPlan) -> PercolationTrace:
    """Run one percolation experiment on a fresh view of the graph.

    The random strategy runs ``plan.repetitions`` independent shuffles and
    averages the shares pointwise, retaining per-repetition traces and
    min/max giant envelopes.
    """
    checkpoints = plan.checkpoints(g.n_nodes)
    if plan.strategy is not Strategy.RANDOM:
        order = removal_order(g, plan.strategy, plan.seed)
        pts = _shares_on_grid(g, order, checkpoints)
        return PercolationTrace(strategy=plan.strategy, points=pts, repetition_points=[pts])

    reps = []
    for rep in range(plan.repetitions):
        rng_seed = np.random.default_rng([plan.seed, rep])
        order = rng_seed.permutation(g.n_nodes).astype(np.int64)
        reps.append(_shares_on_grid(g, order, checkpoints))
    avg = []
    envelope = []
    for i, cp in enumerate(checkpoints):
        fraction = reps[0][i][0]
        giants = [r[i][1] for r in reps]
        seconds = [r[i][2] for r in reps]
        avg.append((fraction, sum(giants) / len(giants), sum(seconds) / len(seconds)))
        envelope.append((fraction, min(giants), max(giants)))
    return PercolationTrace(
        strategy=plan.strategy, points=avg, repetition_points=reps, envelope=envelope
    )


def tipping_point(trace: PercolationTrace, epsilon: float = 0.01) -> float | None:
    """Smallest removed fraction with giant share below epsilon.

    Linearly interpolated between the bracketing grid points; None when the
    trace never drops below epsilon.
    """
    if not trace.points:
        raise ValueError("empty percolation trace")
    for i, (fraction, giant, _) in enumerate(trace.points):
        if giant < epsilon:
            if i == 0:
                return fraction
            f_prev, g_prev, _ = trace.points[i - 1]
            return f_prev + (g_prev - epsilon) / (g_prev - giant) * (fraction - f_prev)
    return None


@dataclass(frozen=True)
class HubAnalysis:
    percentile: float
    threshold_degree: int
    hub_count: int
    giant_share_before: float
    giant_share_after: float


def hub_analysis(g: CollaborationNetwork, percentile: float = 99.0) -> HubAnalysis:
    """Remove every node at or above the nearest-rank degree percentile."""
    deg = g.degrees()
    n = g.n_nodes
    rank = max(1, math.ceil(percentile / 100.0 * n))
    threshold = int(np.sort(deg)[rank - 1])
    hubs = deg >= threshold
    before = connected_components(g).giant_share

    alive = ~hubs
    giant_after = 0
    if alive.any():
        giant_after, _ = components_under_mask(g, alive)
    return HubAnalysis(
        percentile=percentile,
        threshold_degree=threshold,
        hub_count=int(hubs.sum()),
        giant_share_before=before,
        giant_share_after=giant_after / n,
    )
