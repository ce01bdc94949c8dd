"""Structural metrics, centralities and strongly connected components.

Everything here treats the graph as directed and unweighted unless a
measure is explicitly strength- or PageRank-based.  Geodesic statistics
average over reachable ordered pairs only; the number of unreachable
pairs is reported alongside instead of being folded into the mean.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, fields

import numpy as np

from .errors import ConvergenceError
from .graph import GraphLike, adjacency, node_index, weight_matrix

MEASURES = ("in_degree", "out_degree", "in_strength", "out_strength", "pagerank", "betweenness")


def sig6(value: float) -> str:
    """Render a number with 6 significant digits (CSV report precision)."""
    return f"{value:.6g}"


@dataclass(frozen=True)
class DyadCensus:
    """Counts of mutual, asymmetric and null dyads; sums to C(n, 2)."""

    mutual: int
    asymmetric: int
    null: int

    @property
    def total(self) -> int:
        return self.mutual + self.asymmetric + self.null


@dataclass(frozen=True)
class StructuralReport:
    """Whole-graph summary statistics for one Top-k subgraph."""

    node_count: int
    edge_count: int
    density: float
    avg_geodesic: float
    diameter: int
    unreachable_pairs: int
    avg_degree: float
    avg_strength: float
    degree_centralization: float
    centralization_direction: str
    dyads: DyadCensus
    reciprocity: float
    transitivity: float

    def to_dict(self) -> dict:
        out: dict = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = (
                {"mutual": value.mutual, "asymmetric": value.asymmetric, "null": value.null}
                if isinstance(value, DyadCensus)
                else value
            )
        return out

    def to_json(self, meta: dict | None = None) -> str:
        payload = {"meta": meta, **self.to_dict()} if meta is not None else self.to_dict()
        return json.dumps(payload, indent=2) + "\n"

    def to_csv(self) -> str:
        lines = ["metric,value"]
        for key, value in self.to_dict().items():
            if isinstance(value, dict):
                for sub, count in value.items():
                    lines.append(f"dyads_{sub},{count}")
            elif isinstance(value, float):
                lines.append(f"{key},{sig6(value)}")
            else:
                lines.append(f"{key},{value}")
        return "\n".join(lines) + "\n"


def dyad_census(graph: GraphLike) -> DyadCensus:
    """Classify every unordered node pair as mutual, asymmetric or null."""
    edges = graph.edges
    reciprocated = sum(1 for (o, d) in edges if (d, o) in edges)
    mutual = reciprocated // 2
    asymmetric = len(edges) - reciprocated
    n = len(graph.nodes)
    null = n * (n - 1) // 2 - mutual - asymmetric
    return DyadCensus(mutual, asymmetric, null)


def reciprocity(graph: GraphLike) -> float:
    """Share of adjacent dyads that are mutual: 2M / (2M + A)."""
    census = dyad_census(graph)
    adjacent = 2 * census.mutual + census.asymmetric
    return 2 * census.mutual / adjacent if adjacent else 0.0


def transitivity(graph: GraphLike) -> float:
    """Global clustering coefficient of the undirected projection.

    Defined as 3 * triangles / connected triples, where triples are
    counted as sum over nodes of C(degree, 2) in the projection.
    """
    n = len(graph.nodes)
    index = node_index(graph)
    neigh: list[set[int]] = [set() for _ in range(n)]
    for origin, dest in graph.edges:
        u, v = index[origin], index[dest]
        neigh[u].add(v)
        neigh[v].add(u)
    triples = sum(len(s) * (len(s) - 1) // 2 for s in neigh)
    if triples == 0:
        return 0.0
    # Each triangle contributes one common neighbour to each of its
    # three edges, so summing |N(u) & N(v)| over undirected edges u < v
    # yields exactly 3 * triangles.
    closed = sum(len(neigh[u] & neigh[v]) for u in range(n) for v in neigh[u] if u < v)
    return closed / triples


def geodesic_stats(graph: GraphLike) -> tuple[float, int, int]:
    """(average geodesic, diameter, unreachable ordered pairs) via BFS.

    The average and diameter consider reachable ordered pairs s != t
    only; with no such pair both are reported as 0.
    """
    succ, _ = adjacency(graph)
    n = len(succ)
    total = 0
    reachable = 0
    diameter = 0
    for source in range(n):
        dist = [-1] * n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in succ[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        for target in range(n):
            if target != source and dist[target] > 0:
                total += dist[target]
                reachable += 1
                if dist[target] > diameter:
                    diameter = dist[target]
    unreachable = n * (n - 1) - reachable
    avg = total / reachable if reachable else 0.0
    return avg, diameter, unreachable


def degree_centralization(graph: GraphLike, direction: str) -> float:
    """Freeman degree centralization over in- or out-degrees.

    Computes sum(d_max - d_v) / (n - 1)^2, the star-normalised spread of
    the chosen degree sequence.  Requires at least 3 nodes.
    """
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    n = len(graph.nodes)
    if n < 3:
        raise ValueError(f"degree centralization needs >= 3 nodes, got {n}")
    degrees = dict.fromkeys(graph.nodes, 0)
    position = 0 if direction == "out" else 1
    for pair in graph.edges:
        degrees[pair[position]] += 1
    top = max(degrees.values())
    return sum(top - d for d in degrees.values()) / (n - 1) ** 2


def structural_report(subgraph, centralization_direction: str | None = None) -> StructuralReport:
    """Compute the full structural summary of a Top-k subgraph.

    The degree centralization is taken over the direction that Top-k
    filtering did *not* constrain (for an Out subgraph the out-degrees
    are capped at k, so the in-degree distribution is the informative
    one, and vice versa).  Pass ``centralization_direction`` explicitly
    when the input is a plain graph with no ``direction`` attribute.
    """
    n = len(subgraph.nodes)
    if n < 2:
        raise ValueError(f"structural report needs >= 2 nodes, got {n}")
    if centralization_direction is None:
        constrained = getattr(subgraph, "direction", None)
        if constrained not in ("in", "out"):
            raise ValueError("centralization_direction is required for plain graphs")
        centralization_direction = "in" if constrained == "out" else "out"
    edge_count = len(subgraph.edges)
    avg_geo, diameter, unreachable = geodesic_stats(subgraph)
    census = dyad_census(subgraph)
    return StructuralReport(
        node_count=n,
        edge_count=edge_count,
        density=edge_count / (n * (n - 1)),
        avg_geodesic=avg_geo,
        diameter=diameter,
        unreachable_pairs=unreachable,
        avg_degree=edge_count / n,
        avg_strength=sum(subgraph.edges.values()) / n,
        degree_centralization=degree_centralization(subgraph, centralization_direction),
        centralization_direction=centralization_direction,
        dyads=census,
        reciprocity=reciprocity(subgraph),
        transitivity=transitivity(subgraph),
    )


def pagerank(
    graph: GraphLike,
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iter: int = 1_000_000,
) -> dict[str, float]:
    """Weighted PageRank by power iteration.

    Transition probabilities are edge weights normalised per origin row;
    dangling nodes redistribute their mass uniformly.  Iteration stops
    when the L1 change drops below ``tol`` and raises
    :class:`ConvergenceError` (reporting the residual) if the budget is
    exhausted first.
    """
    if not 0 < damping < 1:
        raise ValueError(f"damping must lie in (0, 1), got {damping}")
    n = len(graph.nodes)
    if n == 0:
        raise ValueError("pagerank needs a non-empty graph")
    weights = weight_matrix(graph)
    out_strength = weights.sum(axis=1)
    dangling = out_strength == 0.0
    transition = np.zeros_like(weights)
    active = ~dangling
    transition[active] = weights[active] / out_strength[active, None]
    rank = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    for _ in range(max_iter):
        spread = transition.T @ rank + rank[dangling].sum() / n
        updated = base + damping * spread
        residual = float(np.abs(updated - rank).sum())
        rank = updated
        if residual < tol:
            return {code: float(rank[i]) for i, code in enumerate(graph.nodes)}
    raise ConvergenceError(
        f"pagerank did not converge in {max_iter} iterations (residual {residual:.3e})"
    )


def betweenness(graph: GraphLike) -> dict[str, float]:
    """Unnormalised betweenness on directed unweighted geodesics.

    Brandes' accumulation: one BFS per source, dependencies pushed back
    through the shortest-path DAG.  Endpoints are excluded.
    """
    succ, _ = adjacency(graph)
    n = len(succ)
    score = [0.0] * n
    for source in range(n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0.0] * n
        sigma[source] = 1.0
        dist = [-1] * n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            stack.append(u)
            for v in succ[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for u in preds[w]:
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w])
            if w != source:
                score[w] += delta[w]
    return {code: score[i] for i, code in enumerate(graph.nodes)}


def _tarjan_components(succ: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, iteratively, in Tarjan's order.

    Uses Nuutila's variant: only potential roots sit on the component
    stack, and assigned nodes are never revisited.
    """
    n = len(succ)
    preorder = [-1] * n
    lowlink = [0] * n
    assigned = [False] * n
    root_stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for start in range(n):
        if preorder[start] >= 0:
            continue
        walk = [start]
        while walk:
            v = walk[-1]
            if preorder[v] < 0:
                preorder[v] = counter
                counter += 1
            descend = False
            for w in succ[v]:
                if preorder[w] < 0:
                    walk.append(w)
                    descend = True
                    break
            if descend:
                continue
            low = preorder[v]
            for w in succ[v]:
                if not assigned[w]:
                    low = min(low, lowlink[w] if preorder[w] > preorder[v] else preorder[w])
            lowlink[v] = low
            walk.pop()
            if low == preorder[v]:
                members = [v]
                while root_stack and preorder[root_stack[-1]] > preorder[v]:
                    members.append(root_stack.pop())
                for node in members:
                    assigned[node] = True
                components.append(members)
            else:
                root_stack.append(v)
    return components


@dataclass(frozen=True)
class ComponentAssignment:
    """Strongly connected component membership.

    Component ids run 0, 1, ... ordered by decreasing size, ties broken
    by the smallest member country code, so ids are reproducible.
    """

    countries: tuple[str, ...]
    component: dict[str, int]
    sizes: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.sizes)

    def to_csv(self) -> str:
        lines = ["country,component_id,component_size"]
        for code in self.countries:
            cid = self.component[code]
            lines.append(f"{code},{cid},{self.sizes[cid]}")
        return "\n".join(lines) + "\n"


def scc(graph: GraphLike) -> ComponentAssignment:
    """Strongly connected components with deterministic component ids."""
    succ, _ = adjacency(graph)
    raw = _tarjan_components(succ)
    named = [sorted(graph.nodes[i] for i in members) for members in raw]
    named.sort(key=lambda ms: (-len(ms), ms[0]))
    assignment: dict[str, int] = {}
    for cid, members in enumerate(named):
        for code in members:
            assignment[code] = cid
    return ComponentAssignment(graph.nodes, assignment, tuple(len(ms) for ms in named))


def competition_ranks(values: dict[str, float]) -> dict[str, int]:
    """Rank descending by value; ties share the smaller rank.

    After a tie of size t at rank r the next distinct value gets rank
    r + t (standard competition ranking).
    """
    order = sorted(values, key=lambda code: (-values[code], code))
    ranks: dict[str, int] = {}
    current_rank = 0
    previous: float | None = None
    for position, code in enumerate(order, start=1):
        value = values[code]
        if previous is None or value != previous:
            current_rank = position
            previous = value
        ranks[code] = current_rank
    return ranks


@dataclass(frozen=True)
class CentralityTable:
    """Six per-country measures plus competition ranks for each."""

    countries: tuple[str, ...]
    values: dict[str, dict[str, float]]
    ranks: dict[str, dict[str, int]]

    def to_csv(self, measure: str) -> str:
        if measure not in self.values:
            raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")
        vals = self.values[measure]
        ranks = self.ranks[measure]
        lines = ["rank,country,value"]
        for code in sorted(self.countries, key=lambda c: (ranks[c], c)):
            lines.append(f"{ranks[code]},{code},{sig6(vals[code])}")
        return "\n".join(lines) + "\n"


def centrality_table(
    graph: GraphLike,
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iter: int = 1_000_000,
) -> CentralityTable:
    """Compute degree, strength, PageRank and betweenness per country."""
    in_degree = dict.fromkeys(graph.nodes, 0.0)
    out_degree = dict.fromkeys(graph.nodes, 0.0)
    in_strength = dict.fromkeys(graph.nodes, 0.0)
    out_strength = dict.fromkeys(graph.nodes, 0.0)
    for (origin, dest), weight in graph.edges.items():
        out_degree[origin] += 1.0
        in_degree[dest] += 1.0
        out_strength[origin] += float(weight)
        in_strength[dest] += float(weight)
    values = {
        "in_degree": in_degree,
        "out_degree": out_degree,
        "in_strength": in_strength,
        "out_strength": out_strength,
        "pagerank": pagerank(graph, damping=damping, tol=tol, max_iter=max_iter),
        "betweenness": betweenness(graph),
    }
    ranks = {measure: competition_ranks(vals) for measure, vals in values.items()}
    return CentralityTable(graph.nodes, values, ranks)
