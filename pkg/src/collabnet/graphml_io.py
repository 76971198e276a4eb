"""GraphML and edge-list serialization for collaboration networks."""
from __future__ import annotations

import io
import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .networks import CollaborationNetwork, network_from_edges

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


class GraphMLError(Exception):
    pass


def export_graphml(g: CollaborationNetwork, sink) -> None:
    """Write deterministic GraphML with node "name" and edge "multiplicity"/"weight".

    Node elements appear in id order and edges in canonical sorted order, so
    output bytes are a pure function of the network.
    """
    own = isinstance(sink, (str, bytes))
    out = open(sink, "wb") if own else sink
    try:
        w = out.write
        w(b'<?xml version="1.0" encoding="UTF-8"?>\n')
        w(f'<graphml xmlns="{GRAPHML_NS}">\n'.encode())
        w(b'  <key id="d0" for="node" attr.name="name" attr.type="string"/>\n')
        w(b'  <key id="d1" for="edge" attr.name="multiplicity" attr.type="int"/>\n')
        w(b'  <key id="d2" for="edge" attr.name="weight" attr.type="double"/>\n')
        w(b'  <graph id="G" edgedefault="undirected">\n')
        for i, name in enumerate(g.names):
            w(f'    <node id="n{i}"><data key="d0">{escape(name)}</data></node>\n'.encode())
        for u, v, m in zip(g.edge_u.tolist(), g.edge_v.tolist(), g.multiplicity.tolist()):
            w(
                f'    <edge source="n{u}" target="n{v}">'
                f'<data key="d1">{m}</data><data key="d2">{1.0 / m!r}</data></edge>\n'.encode()
            )
        w(b"  </graph>\n</graphml>\n")
    finally:
        if own:
            out.close()


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def import_graphml(source, strict: bool = False) -> CollaborationNetwork:
    """Parse GraphML into a collaboration network.

    Missing multiplicity defaults to 1; the weight attribute is recomputed as
    1/multiplicity.  Self-loops and isolated nodes raise in strict mode and
    are dropped otherwise.
    """
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    try:
        tree = ET.parse(source)
    except ET.ParseError as exc:
        raise GraphMLError(f"malformed GraphML: {exc}") from exc
    root = tree.getroot()
    if _local(root.tag) != "graphml":
        raise GraphMLError(f"not a GraphML document (root <{_local(root.tag)}>)")

    name_key = mult_key = None
    for key in root:
        if _local(key.tag) != "key":
            continue
        attr = key.get("attr.name")
        if key.get("for") == "node" and attr == "name":
            name_key = key.get("id")
        elif key.get("for") == "edge" and attr == "multiplicity":
            mult_key = key.get("id")

    graph = next((c for c in root if _local(c.tag) == "graph"), None)
    if graph is None:
        raise GraphMLError("GraphML document has no <graph> element")
    if graph.get("edgedefault") == "directed":
        raise GraphMLError("collaboration networks are undirected")

    ids: dict[str, int] = {}
    names: list[str] = []
    edges: list[tuple[int, int, int]] = []
    for elem in graph:
        tag = _local(elem.tag)
        if tag == "node":
            node_id = elem.get("id")
            if node_id is None or node_id in ids:
                raise GraphMLError(f"missing or duplicate node id {node_id!r}")
            name = node_id
            for data in elem:
                if _local(data.tag) == "data" and data.get("key") == name_key:
                    name = data.text or ""
            ids[node_id] = len(names)
            names.append(name)
        elif tag == "edge":
            src, dst = elem.get("source"), elem.get("target")
            if src not in ids or dst not in ids:
                raise GraphMLError(f"edge references unknown node: {src!r} -> {dst!r}")
            if src == dst:
                if strict:
                    raise GraphMLError(f"self-loop on node {src!r}")
                continue
            mult = 1
            for data in elem:
                if _local(data.tag) == "data" and data.get("key") == mult_key:
                    try:
                        mult = int(data.text)
                    except (TypeError, ValueError) as exc:
                        raise GraphMLError(f"bad multiplicity on edge {src!r}-{dst!r}") from exc
            edges.append((ids[src], ids[dst], mult))

    if strict:
        touched = np.zeros(len(names), dtype=bool)
        for u, v, _ in edges:
            touched[u] = touched[v] = True
        if len(names) and not touched.all():
            bad = names[int(np.flatnonzero(~touched)[0])]
            raise GraphMLError(f"isolated node {bad!r}")
    return network_from_edges(names, edges, drop_isolated=True)


def write_edgelist_csv(g: CollaborationNetwork, sink) -> None:
    """Sorted (src_id, dst_id, multiplicity) CSV, the oracle-script interchange format."""
    own = isinstance(sink, (str, bytes))
    out = open(sink, "w", encoding="utf-8", newline="") if own else sink
    try:
        out.write("src_id,dst_id,multiplicity\n")
        for u, v, m in zip(g.edge_u.tolist(), g.edge_v.tolist(), g.multiplicity.tolist()):
            out.write(f"{u},{v},{m}\n")
    finally:
        if own:
            out.close()
