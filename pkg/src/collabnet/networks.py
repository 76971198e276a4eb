"""Affiliation network construction and its projection onto the author set."""
from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .records import ALL_CLASSES, PubClass, PublicationRecord

_CLASS_CODES = {PubClass.CONFERENCE: 0, PubClass.JOURNAL: 1, PubClass.OTHER: 2}
_CODE_CLASSES = {v: k for k, v in _CLASS_CODES.items()}


class DuplicateKeyError(Exception):
    pass


@dataclass
class AffiliationNetwork:
    """Bipartite author/paper graph.

    Authors and papers carry dense integer ids in first-appearance order.
    Edges connect author ids to paper ids only; a paper node exists for every
    record, including zero-author records (which have no incident edges).
    """

    author_names: list[str]
    paper_keys: list[str]
    paper_class: np.ndarray  # int8 codes per paper id
    edge_author: np.ndarray  # int64, aligned with edge_paper
    edge_paper: np.ndarray

    _paper_indptr: np.ndarray | None = field(default=None, repr=False, compare=False)
    _paper_authors: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def n_authors(self) -> int:
        return len(self.author_names)

    @property
    def n_papers(self) -> int:
        return len(self.paper_keys)

    @property
    def n_edges(self) -> int:
        return len(self.edge_author)

    def class_of(self, paper_id: int) -> PubClass:
        return _CODE_CLASSES[int(self.paper_class[paper_id])]

    def author_degrees(self) -> np.ndarray:
        """Papers per author (every author has >= 1 by construction)."""
        return np.bincount(self.edge_author, minlength=self.n_authors)

    def paper_degrees(self) -> np.ndarray:
        """Authors per paper; zero for editor-less records."""
        return np.bincount(self.edge_paper, minlength=self.n_papers)

    def paper_author_lists(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR view paper -> author ids, preserving per-record author order."""
        if self._paper_indptr is None:
            order = np.argsort(self.edge_paper, kind="stable")
            authors = self.edge_author[order]
            counts = self.paper_degrees()
            indptr = np.zeros(self.n_papers + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._paper_indptr, self._paper_authors = indptr, authors
        return self._paper_indptr, self._paper_authors

    def class_codes(self, classes: Iterable[PubClass]) -> np.ndarray:
        return np.array(sorted(_CLASS_CODES[c] for c in classes), dtype=np.int8)


def build_affiliation(records: Iterable[PublicationRecord]) -> AffiliationNetwork:
    """Consume a record stream into the bipartite affiliation network.

    Raises :class:`DuplicateKeyError` if two records share a key.
    """
    author_ids: dict[str, int] = {}
    author_names: list[str] = []
    paper_keys: list[str] = []
    seen_keys: set[str] = set()
    paper_class = array("b")
    edge_author = array("q")
    edge_paper = array("q")

    for record in records:
        if record.key in seen_keys:
            raise DuplicateKeyError(f"duplicate publication key: {record.key!r}")
        seen_keys.add(record.key)
        paper_id = len(paper_keys)
        paper_keys.append(record.key)
        paper_class.append(_CLASS_CODES[record.pub_class])
        for name in record.authors:
            aid = author_ids.get(name)
            if aid is None:
                aid = len(author_names)
                author_ids[name] = aid
                author_names.append(name)
            edge_author.append(aid)
            edge_paper.append(paper_id)

    return AffiliationNetwork(
        author_names=author_names,
        paper_keys=paper_keys,
        paper_class=np.frombuffer(paper_class, dtype=np.int8).copy()
        if len(paper_class)
        else np.zeros(0, dtype=np.int8),
        edge_author=np.frombuffer(edge_author, dtype=np.int64).copy()
        if len(edge_author)
        else np.zeros(0, dtype=np.int64),
        edge_paper=np.frombuffer(edge_paper, dtype=np.int64).copy()
        if len(edge_paper)
        else np.zeros(0, dtype=np.int64),
    )


@dataclass
class CollaborationNetwork:
    """Undirected weighted author graph.

    Edges are canonical (u < v), sorted lexicographically, with multiplicity
    m >= 1 (co-authored papers) and derived weight 1/m.  There are no
    self-loops and no isolated nodes: every author present has degree >= 1.
    """

    names: list[str]
    edge_u: np.ndarray  # int64
    edge_v: np.ndarray
    multiplicity: np.ndarray  # int64 >= 1

    _indptr: np.ndarray | None = field(default=None, repr=False, compare=False)
    _adj: np.ndarray | None = field(default=None, repr=False, compare=False)
    _adj_mult: np.ndarray | None = field(default=None, repr=False, compare=False)
    _degrees: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def n_nodes(self) -> int:
        return len(self.names)

    @property
    def n_edges(self) -> int:
        return len(self.edge_u)

    @property
    def mean_degree(self) -> float:
        return 2.0 * self.n_edges / self.n_nodes if self.n_nodes else 0.0

    def weights(self) -> np.ndarray:
        return 1.0 / self.multiplicity

    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            both = np.concatenate([self.edge_u, self.edge_v])
            self._degrees = np.bincount(both, minlength=self.n_nodes)
        return self._degrees

    def adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR adjacency: (indptr, neighbors, multiplicities), neighbors sorted."""
        if self._indptr is None:
            src = np.concatenate([self.edge_u, self.edge_v])
            dst = np.concatenate([self.edge_v, self.edge_u])
            mult = np.concatenate([self.multiplicity, self.multiplicity])
            order = np.lexsort((dst, src))
            src, dst, mult = src[order], dst[order], mult[order]
            indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
            np.cumsum(np.bincount(src, minlength=self.n_nodes), out=indptr[1:])
            self._indptr, self._adj, self._adj_mult = indptr, dst, mult
        return self._indptr, self._adj, self._adj_mult

    def neighbors(self, node: int) -> np.ndarray:
        indptr, adj, _ = self.adjacency()
        return adj[indptr[node] : indptr[node + 1]]

    def to_scipy(self, weighted: bool = False) -> sp.csr_matrix:
        indptr, adj, mult = self.adjacency()
        data = (1.0 / mult) if weighted else np.ones(len(adj), dtype=np.float64)
        return sp.csr_matrix((data, adj, indptr), shape=(self.n_nodes, self.n_nodes))

    def validate(self) -> None:
        """Assert the structural invariants; cheap enough for fixtures."""
        if np.any(self.edge_u >= self.edge_v):
            raise ValueError("edges must be canonical u < v (no self-loops)")
        if np.any(self.multiplicity < 1):
            raise ValueError("multiplicities must be >= 1")
        if self.n_nodes and np.any(self.degrees() == 0):
            raise ValueError("collaboration networks must not contain isolated nodes")
        if len(self.edge_u) != len(set(zip(self.edge_u.tolist(), self.edge_v.tolist()))):
            raise ValueError("duplicate edges")


@dataclass(frozen=True)
class GraphSummary:
    n_nodes: int
    n_edges: int
    mean_degree: float
    degree_sequence: np.ndarray

    @classmethod
    def of(cls, g: CollaborationNetwork) -> "GraphSummary":
        return cls(g.n_nodes, g.n_edges, g.mean_degree, g.degrees())


def project_collaboration(
    affiliation: AffiliationNetwork, classes: Iterable[PubClass] = ALL_CLASSES
) -> CollaborationNetwork:
    """Project the affiliation network onto authors co-authoring papers of ``classes``.

    Every unordered author pair of a qualifying paper increments the pair's
    multiplicity by one.  Authors left without any edge are dropped; node ids
    are assigned in first-appearance order for determinism.
    """
    classes = frozenset(classes)
    if not classes:
        raise ValueError("classes must be non-empty")
    keep_codes = {int(c) for c in affiliation.class_codes(classes)}
    indptr, authors = affiliation.paper_author_lists()

    node_ids: dict[int, int] = {}
    names: list[str] = []
    pair_mult: dict[tuple[int, int], int] = {}
    paper_codes = affiliation.paper_class

    for paper_id in range(affiliation.n_papers):
        if int(paper_codes[paper_id]) not in keep_codes:
            continue
        members = authors[indptr[paper_id] : indptr[paper_id + 1]]
        if len(members) < 2:
            continue
        local: list[int] = []
        for a in members.tolist():
            nid = node_ids.get(a)
            if nid is None:
                nid = len(names)
                node_ids[a] = nid
                names.append(affiliation.author_names[a])
            local.append(nid)
        for i in range(len(local)):
            u = local[i]
            for j in range(i + 1, len(local)):
                v = local[j]
                key = (u, v) if u < v else (v, u)
                pair_mult[key] = pair_mult.get(key, 0) + 1

    if pair_mult:
        eu = np.fromiter((k[0] for k in pair_mult), dtype=np.int64, count=len(pair_mult))
        ev = np.fromiter((k[1] for k in pair_mult), dtype=np.int64, count=len(pair_mult))
        mult = np.fromiter(pair_mult.values(), dtype=np.int64, count=len(pair_mult))
        order = np.lexsort((ev, eu))
        eu, ev, mult = eu[order], ev[order], mult[order]
    else:
        eu = ev = mult = np.zeros(0, dtype=np.int64)
    return CollaborationNetwork(names=names, edge_u=eu, edge_v=ev, multiplicity=mult)


def network_from_edges(
    names: list[str],
    edges: Iterable[tuple[int, int] | tuple[int, int, int]],
    drop_isolated: bool = False,
) -> CollaborationNetwork:
    """Build a collaboration network from explicit (u, v[, multiplicity]) edges.

    Self-loops are rejected; parallel mentions of a pair sum their
    multiplicities.  Without ``drop_isolated``, every named node must appear
    in at least one edge.
    """
    pair_mult: dict[tuple[int, int], int] = {}
    for e in edges:
        u, v = int(e[0]), int(e[1])
        m = int(e[2]) if len(e) > 2 else 1
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        if m < 1:
            raise ValueError("multiplicity must be >= 1")
        key = (u, v) if u < v else (v, u)
        pair_mult[key] = pair_mult.get(key, 0) + m

    touched = np.zeros(len(names), dtype=bool)
    for u, v in pair_mult:
        touched[u] = touched[v] = True
    if not drop_isolated and not touched.all():
        missing = int(np.flatnonzero(~touched)[0])
        raise ValueError(f"node {missing} ({names[missing]!r}) has no edges")

    remap = np.cumsum(touched) - 1
    kept_names = [names[i] for i in np.flatnonzero(touched)]
    if pair_mult:
        eu = np.array([remap[k[0]] for k in pair_mult], dtype=np.int64)
        ev = np.array([remap[k[1]] for k in pair_mult], dtype=np.int64)
        mult = np.fromiter(pair_mult.values(), dtype=np.int64, count=len(pair_mult))
        order = np.lexsort((ev, eu))
        eu, ev, mult = eu[order], ev[order], mult[order]
    else:
        eu = ev = mult = np.zeros(0, dtype=np.int64)
    return CollaborationNetwork(names=kept_names, edge_u=eu, edge_v=ev, multiplicity=mult)
