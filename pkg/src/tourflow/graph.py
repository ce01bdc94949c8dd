"""Weighted directed country-to-country graphs and Top-k subgraph extraction.

The central type is :class:`MobilityGraph`: nodes are ISO-3166-like
two-letter country codes, an edge ``(origin, destination)`` carries a
positive integer weight (number of travellers observed on that flow).
Self-loops are excluded by construction.

Top-k filtering keeps, for every node, only its k strongest incoming
(:func:`topk_in`) or outgoing (:func:`topk_out`) edges.  Ties on weight
are broken toward the lexicographically smaller partner code so the
result is a pure function of the input graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

_CODE_RE = re.compile(r"^[A-Z]{2}$")

EXPORT_FORMATS = ("csv", "dot", "graphml")


def _check_edges(nodes: tuple[str, ...], edges: dict[tuple[str, str], int]) -> None:
    known = set(nodes)
    for (origin, dest), weight in edges.items():
        if origin == dest:
            raise ValueError(f"self-loop on {origin!r}")
        if origin not in known or dest not in known:
            raise ValueError(f"edge ({origin!r}, {dest!r}) references unknown node")
        if not isinstance(weight, int) or isinstance(weight, bool) or weight < 1:
            raise ValueError(f"edge ({origin!r}, {dest!r}) has non-positive weight {weight!r}")


@dataclass(frozen=True)
class MobilityGraph:
    """A weighted directed graph over country codes.

    ``nodes`` is sorted lexicographically and may include isolated
    countries.  ``edges`` maps ``(origin, destination)`` to a weight
    >= 1; both endpoints must appear in ``nodes``.
    """

    nodes: tuple[str, ...]
    edges: dict[tuple[str, str], int]
    label: str = ""

    def __post_init__(self) -> None:
        if list(self.nodes) != sorted(set(self.nodes)):
            raise ValueError("nodes must be sorted and free of duplicates")
        _check_edges(self.nodes, self.edges)

    @classmethod
    def build(
        cls,
        edges: dict[tuple[str, str], int],
        nodes: tuple[str, ...] | list[str] | None = None,
        label: str = "",
    ) -> "MobilityGraph":
        """Construct a graph, deriving the node set from edges if omitted."""
        names: set[str] = set(nodes or ())
        for origin, dest in edges:
            names.add(origin)
            names.add(dest)
        return cls(tuple(sorted(names)), dict(edges), label)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())


@dataclass(frozen=True)
class TopKSubgraph:
    """The result of Top-k edge filtering of a :class:`MobilityGraph`.

    ``direction`` records which endpoint was constrained: ``"in"`` means
    every node kept at most k incoming edges, ``"out"`` at most k
    outgoing ones.  The node set of the parent graph is preserved, so a
    node whose every edge was pruned simply becomes isolated.
    """

    nodes: tuple[str, ...]
    edges: dict[tuple[str, str], int]
    direction: str
    k: int
    label: str = ""

    def __post_init__(self) -> None:
        if self.direction not in ("in", "out"):
            raise ValueError(f"direction must be 'in' or 'out', got {self.direction!r}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if list(self.nodes) != sorted(set(self.nodes)):
            raise ValueError("nodes must be sorted and free of duplicates")
        _check_edges(self.nodes, self.edges)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())


GraphLike = MobilityGraph | TopKSubgraph


def is_country_code(code: str) -> bool:
    """True for a two-letter uppercase code (user-assigned codes allowed)."""
    return bool(_CODE_RE.match(code))


def topk_out(graph: MobilityGraph, k: int) -> TopKSubgraph:
    """Keep each node's k highest-weight outgoing edges.

    Ties on weight are resolved toward the lexicographically smaller
    destination code.  Nodes with fewer than k outgoing edges keep them
    all.

    Args:
        graph: the full mobility graph.
        k: number of edges retained per origin, >= 1.

    Returns:
        A :class:`TopKSubgraph` with ``direction="out"`` over the same
        node set.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    outgoing: dict[str, list[tuple[int, str]]] = {}
    for (origin, dest), weight in graph.edges.items():
        outgoing.setdefault(origin, []).append((weight, dest))
    kept: dict[tuple[str, str], int] = {}
    for origin, cands in outgoing.items():
        cands.sort(key=lambda wc: (-wc[0], wc[1]))
        for weight, dest in cands[:k]:
            kept[(origin, dest)] = weight
    return TopKSubgraph(graph.nodes, kept, "out", k, graph.label)


def topk_in(graph: MobilityGraph, k: int) -> TopKSubgraph:
    """Keep each node's k highest-weight incoming edges.

    Ties on weight are resolved toward the lexicographically smaller
    origin code.  Nodes with fewer than k incoming edges keep them all.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    incoming: dict[str, list[tuple[int, str]]] = {}
    for (origin, dest), weight in graph.edges.items():
        incoming.setdefault(dest, []).append((weight, origin))
    kept: dict[tuple[str, str], int] = {}
    for dest, cands in incoming.items():
        cands.sort(key=lambda wc: (-wc[0], wc[1]))
        for weight, origin in cands[:k]:
            kept[(origin, dest)] = weight
    return TopKSubgraph(graph.nodes, kept, "in", k, graph.label)


def node_index(graph: GraphLike) -> dict[str, int]:
    """Country code -> position in the sorted node tuple."""
    return {code: i for i, code in enumerate(graph.nodes)}


def adjacency(graph: GraphLike) -> tuple[list[list[int]], list[list[int]]]:
    """Index-based adjacency lists ``(successors, predecessors)``.

    Neighbour lists are sorted ascending, so every traversal built on
    them is deterministic.
    """
    index = node_index(graph)
    succ: list[list[int]] = [[] for _ in graph.nodes]
    pred: list[list[int]] = [[] for _ in graph.nodes]
    for origin, dest in graph.edges:
        succ[index[origin]].append(index[dest])
        pred[index[dest]].append(index[origin])
    for lst in succ:
        lst.sort()
    for lst in pred:
        lst.sort()
    return succ, pred


def weight_matrix(graph: GraphLike):
    """Dense float weight matrix in node order (zeros for absent edges)."""
    import numpy as np

    n = len(graph.nodes)
    index = node_index(graph)
    mat = np.zeros((n, n), dtype=np.float64)
    for (origin, dest), weight in graph.edges.items():
        mat[index[origin], index[dest]] = float(weight)
    return mat


def sorted_edges(graph: GraphLike) -> list[tuple[str, str, int]]:
    """Edges as (origin, destination, weight), sorted by endpoint pair."""
    return sorted((o, d, w) for (o, d), w in graph.edges.items())


def _to_csv(graph: GraphLike) -> str:
    lines = [("# nodes: " + " ".join(graph.nodes)).rstrip(), "origin,destination,count"]
    for origin, dest, weight in sorted_edges(graph):
        lines.append(f"{origin},{dest},{weight}")
    return "\n".join(lines) + "\n"


def _to_dot(graph: GraphLike) -> str:
    name = graph.label if graph.label else "mobility"
    lines = ["digraph " + quoteattr(name) + " {"]
    for code in graph.nodes:
        lines.append(f'  "{code}";')
    for origin, dest, weight in sorted_edges(graph):
        lines.append(f'  "{origin}" -> "{dest}" [weight={weight}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_graphml(graph: GraphLike) -> str:
    lines = [
        "<?xml version='1.0' encoding='utf-8'?>",
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns"'
        ' xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"'
        ' xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns'
        ' http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
        '  <key id="d0" for="edge" attr.name="weight" attr.type="long"/>',
        '  <graph edgedefault="directed">',
    ]
    for code in graph.nodes:
        lines.append(f'    <node id="{escape(code)}"/>')
    for origin, dest, weight in sorted_edges(graph):
        lines.append(
            f'    <edge source="{escape(origin)}" target="{escape(dest)}">'
            f'<data key="d0">{weight}</data></edge>'
        )
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def export_graph(graph: GraphLike, fmt: str) -> bytes:
    """Serialize a graph to one of ``csv``, ``dot`` or ``graphml``.

    All three formats list nodes and edges in sorted order, so equal
    graphs always produce byte-identical output.  The CSV flavour
    carries the node set in a leading ``# nodes:`` comment line, which
    lets a round-trip through :func:`tourflow.ingest.parse_flow_matrix`
    preserve isolated nodes.
    """
    if fmt == "csv":
        return _to_csv(graph).encode("utf-8")
    if fmt == "dot":
        return _to_dot(graph).encode("utf-8")
    if fmt == "graphml":
        return _to_graphml(graph).encode("utf-8")
    raise ValueError(f"unknown export format {fmt!r}; expected one of {EXPORT_FORMATS}")
