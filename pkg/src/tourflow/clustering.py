"""Affinity distances and average-linkage hierarchical clustering.

Distances come from normalising the weight matrix of a Top-k subgraph:
rows for an Out subgraph (where does a country's outflow go), columns
for an In subgraph (where does its inflow come from).  The distance is
one minus the normalised affinity, so absent flows sit at the maximum
distance of 1.  Average linkage operates on the symmetrised matrix
(d + d^T) / 2 via the Lance-Williams update.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .graph import TopKSubgraph, weight_matrix


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Pairwise affinity distances in [0, 1] over the node order."""

    countries: tuple[str, ...]
    values: np.ndarray
    normalization: str

    def to_csv(self) -> str:
        lines = ["country," + ",".join(self.countries)]
        for i, code in enumerate(self.countries):
            row = ",".join(f"{v:.12g}" for v in self.values[i])
            lines.append(f"{code},{row}")
        return "\n".join(lines) + "\n"


def distance_matrix(subgraph: TopKSubgraph, normalization: str | None = None) -> DistanceMatrix:
    """Distance d = 1 - n(w) from the normalised weight matrix.

    ``normalization`` defaults to ``"row"`` for an Out subgraph and
    ``"column"`` for an In subgraph.  Rows (or columns) summing to zero
    normalise to zero, which places the country at distance 1 from
    everyone; the diagonal is 1 as well since self-loops do not exist.
    """
    if normalization is None:
        direction = getattr(subgraph, "direction", None)
        if direction is None:
            raise ValueError("normalization is required for plain graphs")
        normalization = "row" if direction == "out" else "column"
    if normalization not in ("row", "column"):
        raise ValueError(f"normalization must be 'row' or 'column', got {normalization!r}")
    weights = weight_matrix(subgraph)
    axis = 1 if normalization == "row" else 0
    sums = weights.sum(axis=axis)
    affinity = np.zeros_like(weights)
    active = sums > 0.0
    if normalization == "row":
        affinity[active] = weights[active] / sums[active, None]
    else:
        affinity[:, active] = weights[:, active] / sums[None, active]
    return DistanceMatrix(subgraph.nodes, 1.0 - affinity, normalization)


@dataclass(frozen=True)
class Merge:
    """One agglomeration step: clusters ``left`` and ``right`` join.

    Singletons carry ids 0..n-1 (node order); each merge creates the
    next id n, n+1, ...  ``height`` is the average-linkage distance at
    which the pair merged.
    """

    left: int
    right: int
    height: float
    new_id: int
    size: int


def average_linkage_merges(dm: DistanceMatrix) -> tuple[Merge, ...]:
    """Full agglomeration sequence under average linkage.

    At every step the active pair with minimal distance merges; exact
    ties resolve toward the smallest (left id, right id) pair.  The
    Lance-Williams update keeps each cluster-to-cluster distance equal
    to the mean of the underlying symmetrised entries.
    """
    n = len(dm.countries)
    if n < 2:
        raise ValueError(f"average linkage needs >= 2 items, got {n}")
    sym = (dm.values + dm.values.T) / 2.0
    size = {i: 1 for i in range(n)}
    dist = {(i, j): float(sym[i, j]) for i in range(n) for j in range(i + 1, n)}
    merges: list[Merge] = []
    next_id = n
    while len(size) > 1:
        left, right = min(dist, key=lambda pair: (dist[pair], pair))
        height = dist.pop((left, right))
        left_size = size.pop(left)
        right_size = size.pop(right)
        for other in size:
            to_left = dist.pop((min(left, other), max(left, other)))
            to_right = dist.pop((min(right, other), max(right, other)))
            dist[(other, next_id)] = (
                left_size * to_left + right_size * to_right
            ) / (left_size + right_size)
        size[next_id] = left_size + right_size
        merges.append(Merge(left, right, height, next_id, left_size + right_size))
        next_id += 1
    return tuple(merges)


@dataclass(frozen=True)
class ClusterAssignment:
    """Flat clustering over countries.

    Cluster ids run 0, 1, ... ordered by decreasing size with ties
    broken by the smallest member code.  ``ignored`` lists cluster ids
    excluded from downstream use (see :func:`filter_singletons`); their
    members stay in the map so exports can show them as unassigned.
    """

    countries: tuple[str, ...]
    cluster: dict[str, int]
    sizes: tuple[int, ...]
    ignored: frozenset[int] = frozenset()

    @property
    def count(self) -> int:
        return len(self.sizes)

    def is_singleton(self, cluster_id: int) -> bool:
        return self.sizes[cluster_id] == 1

    def to_csv(self) -> str:
        lines = ["country,cluster_id,ignored"]
        for code in self.countries:
            cid = self.cluster[code]
            flag = "true" if cid in self.ignored else "false"
            lines.append(f"{code},{cid},{flag}")
        return "\n".join(lines) + "\n"


def average_linkage(dm: DistanceMatrix, n_clusters: int) -> ClusterAssignment:
    """Cut the average-linkage dendrogram into ``n_clusters`` clusters."""
    n = len(dm.countries)
    if not 1 <= n_clusters <= n:
        raise ValueError(f"n_clusters must lie in [1, {n}], got {n_clusters}")
    members: dict[int, list[str]] = {i: [code] for i, code in enumerate(dm.countries)}
    for merge in average_linkage_merges(dm)[: n - n_clusters]:
        joined = members.pop(merge.left) + members.pop(merge.right)
        members[merge.new_id] = joined
    groups = sorted((sorted(group) for group in members.values()), key=lambda g: (-len(g), g[0]))
    cluster: dict[str, int] = {}
    for cid, group in enumerate(groups):
        for code in group:
            cluster[code] = cid
    return ClusterAssignment(dm.countries, cluster, tuple(len(g) for g in groups))


def filter_singletons(assignment: ClusterAssignment) -> ClusterAssignment:
    """Mark all single-country clusters as ignored.

    Ids and membership stay untouched, so an assignment without
    singletons comes back identical.
    """
    singles = frozenset(cid for cid, size in enumerate(assignment.sizes) if size == 1)
    if not singles:
        return assignment
    return replace(assignment, ignored=assignment.ignored | singles)
