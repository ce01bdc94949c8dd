"""Triad census, degree-preserving rewiring and motif z-scores.

The 16 directed triad isomorphism classes follow the standard M-A-N
naming (003 ... 300).  Counting uses the Batagelj-Mrvar neighbourhood
method: only triples containing at least one edge are enumerated, the
remaining dyadic and empty triads are obtained arithmetically, so the
census costs roughly O(E * average degree) instead of O(n^3).

Null models are degree-preserving double-edge swaps of the binarised
graph; z-scores compare the real count of each connected class against
the ensemble mean and population standard deviation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import GraphLike, MobilityGraph, node_index
from .metrics import sig6
from .seeds import derive_seed

TRIAD_NAMES = (
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U",
    "030T", "030C", "201", "120D", "120U", "120C", "210", "300",
)

# All classes with at least one edge between every pair of roles, i.e.
# the weakly connected triads (016 minus 003, 012, 102).
CONNECTED_TRIADS = (
    "021D", "021U", "021C", "111D", "111U", "030T", "030C",
    "201", "120D", "120U", "120C", "210", "300",
)

# Maps the 6-bit arc code of an ordered triple (v, u, w) to the
# 1-based index of its isomorphism class in TRIAD_NAMES.
TRICODES = (
    1, 2, 2, 3, 2, 4, 6, 8, 2, 6, 5, 7, 3, 8, 7, 11,
    2, 6, 4, 8, 5, 9, 9, 13, 6, 10, 9, 14, 7, 14, 12, 15,
    2, 5, 6, 7, 6, 9, 10, 14, 4, 9, 9, 12, 8, 13, 14, 15,
    3, 7, 8, 11, 7, 12, 14, 15, 8, 14, 13, 15, 11, 15, 15, 16,
)


@dataclass(frozen=True)
class TriadCensus:
    """Counts of all 16 triad classes; they sum to C(n, 3)."""

    node_count: int
    counts: dict[str, int]

    @property
    def total(self) -> int:
        n = self.node_count
        return n * (n - 1) * (n - 2) // 6

    def to_csv(self) -> str:
        lines = ["class,count"]
        for name in TRIAD_NAMES:
            lines.append(f"{name},{self.counts[name]}")
        return "\n".join(lines) + "\n"


def _tricode(succ: list[set[int]], v: int, u: int, w: int) -> int:
    code = 0
    if u in succ[v]:
        code += 1
    if v in succ[u]:
        code += 2
    if w in succ[v]:
        code += 4
    if v in succ[w]:
        code += 8
    if w in succ[u]:
        code += 16
    if u in succ[w]:
        code += 32
    return code


def triad_census(graph: GraphLike) -> TriadCensus:
    """Count every directed triad class (Batagelj-Mrvar method).

    Requires at least 3 nodes.  Triples around each edge (v, u) with
    v < u are classified via their 6-bit arc code; each such triple is
    visited once thanks to the ordering guard.  Dyadic triads (third
    node isolated from the pair) are added in bulk and the empty class
    003 closes the total to C(n, 3).
    """
    n = len(graph.nodes)
    if n < 3:
        raise ValueError(f"triad census needs >= 3 nodes, got {n}")
    index = node_index(graph)
    succ: list[set[int]] = [set() for _ in range(n)]
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for origin, dest in graph.edges:
        a, b = index[origin], index[dest]
        succ[a].add(b)
        nbrs[a].add(b)
        nbrs[b].add(a)
    counts = dict.fromkeys(TRIAD_NAMES, 0)
    for v in range(n):
        for u in nbrs[v]:
            if u <= v:
                continue
            third = (nbrs[v] | nbrs[u]) - {u, v}
            pair_class = "102" if (u in succ[v] and v in succ[u]) else "012"
            counts[pair_class] += n - len(third) - 2
            for w in third:
                if u < w or (v < w < u and w not in nbrs[v]):
                    counts[TRIAD_NAMES[TRICODES[_tricode(succ, v, u, w)] - 1]] += 1
    counts["003"] = n * (n - 1) * (n - 2) // 6 - sum(counts.values())
    return TriadCensus(n, counts)


def rewire(graph: GraphLike, seed: int, swaps_per_edge: int = 100) -> MobilityGraph:
    """Degree-preserving randomisation by directed double-edge swaps.

    Exactly ``|E| * swaps_per_edge`` swaps are attempted: each picks two
    edges a->b and c->d uniformly (with replacement) and proposes a->d
    plus c->b, rejecting any proposal that would create a self-loop or a
    duplicate edge.  In- and out-degree sequences are invariant under
    every accepted swap.  Weights are discarded; the result is a binary
    graph with unit weights.
    """
    if len(graph.edges) < 2:
        raise ValueError(f"rewiring needs >= 2 edges, got {len(graph.edges)}")
    if swaps_per_edge < 1:
        raise ValueError(f"swaps_per_edge must be >= 1, got {swaps_per_edge}")
    n = len(graph.nodes)
    index = node_index(graph)
    pairs = sorted(graph.edges)
    src = [index[o] for o, _ in pairs]
    dst = [index[d] for _, d in pairs]
    present = {a * n + b for a, b in zip(src, dst)}
    edge_count = len(src)
    rng = np.random.default_rng(seed)
    remaining = edge_count * swaps_per_edge
    chunk = 1 << 14
    while remaining > 0:
        take = min(remaining, chunk)
        remaining -= take
        draws = rng.integers(0, edge_count, size=2 * take).tolist()
        for t in range(take):
            i = draws[2 * t]
            j = draws[2 * t + 1]
            a, b = src[i], dst[i]
            c, d = src[j], dst[j]
            if a == d or c == b:
                continue
            first = a * n + d
            second = c * n + b
            if first in present or second in present:
                continue
            present.discard(a * n + b)
            present.discard(c * n + d)
            present.add(first)
            present.add(second)
            dst[i] = d
            dst[j] = b
    codes = graph.nodes
    edges = {(codes[a], codes[b]): 1 for a, b in zip(src, dst)}
    return MobilityGraph(graph.nodes, edges, graph.label)


@dataclass(frozen=True)
class MotifZScores:
    """Real counts of the 13 connected triad classes against a null.

    ``z`` is None (and the class flagged undefined) when the null
    ensemble has zero spread for that class.
    """

    classes: tuple[str, ...]
    real: dict[str, int]
    null_mean: dict[str, float]
    null_std: dict[str, float]
    z: dict[str, float | None]
    ensemble_size: int
    swaps_per_edge: int
    seed: int

    def relevant(self, z_min: float = 2.0, count_min: int = 4) -> dict[str, bool]:
        """Annotation flags: high z-score backed by enough real triads."""
        return {
            name: (self.z[name] is not None and self.z[name] >= z_min
                   and self.real[name] >= count_min)
            for name in self.classes
        }

    def to_csv(self, z_min: float = 2.0, count_min: int = 4) -> str:
        """One row per class: ``class,real,mean,std,z,flag``.

        The flag column reads ``undefined`` when the null spread is
        zero, ``relevant`` when the annotation rule fires, else empty.
        """
        flags = self.relevant(z_min, count_min)
        lines = ["class,real,mean,std,z,flag"]
        for name in self.classes:
            z = self.z[name]
            z_text = "" if z is None else sig6(z)
            flag = "undefined" if z is None else ("relevant" if flags[name] else "")
            lines.append(
                f"{name},{self.real[name]},{sig6(self.null_mean[name])},"
                f"{sig6(self.null_std[name])},{z_text},{flag}"
            )
        return "\n".join(lines) + "\n"


def motif_zscores(
    graph: GraphLike,
    ensemble_size: int = 1000,
    seed: int = 0,
    swaps_per_edge: int = 100,
) -> MotifZScores:
    """z-scores of connected triad counts against rewired null graphs.

    Sample i is rewired with the seed derived from ``(seed, i)``, so the
    ensemble is reproducible and insensitive to evaluation order.  The
    standard deviation is the population one (ddof 0); classes with zero
    spread get z = None.
    """
    if ensemble_size < 2:
        raise ValueError(f"ensemble_size must be >= 2, got {ensemble_size}")
    real_census = triad_census(graph)
    samples = np.empty((ensemble_size, len(CONNECTED_TRIADS)), dtype=np.float64)
    for i in range(ensemble_size):
        shuffled = rewire(graph, derive_seed(seed, i), swaps_per_edge)
        counts = triad_census(shuffled).counts
        samples[i] = [counts[name] for name in CONNECTED_TRIADS]
    means = samples.mean(axis=0)
    stds = samples.std(axis=0)
    real = {name: real_census.counts[name] for name in CONNECTED_TRIADS}
    z: dict[str, float | None] = {}
    for pos, name in enumerate(CONNECTED_TRIADS):
        if stds[pos] == 0.0:
            z[name] = None
        else:
            z[name] = (real[name] - means[pos]) / float(stds[pos])
    return MotifZScores(
        classes=CONNECTED_TRIADS,
        real=real,
        null_mean={name: float(means[pos]) for pos, name in enumerate(CONNECTED_TRIADS)},
        null_std={name: float(stds[pos]) for pos, name in enumerate(CONNECTED_TRIADS)},
        z=z,
        ensemble_size=ensemble_size,
        swaps_per_edge=swaps_per_edge,
        seed=seed,
    )


def z_percent_diff(a: MotifZScores, b: MotifZScores) -> dict[str, float | None]:
    """Relative z-score change 100 * (z_a - z_b) / |z_b| per class.

    None marks classes where either score is undefined or the reference
    ``z_b`` is exactly zero.
    """
    if a.classes != b.classes:
        raise ValueError("z-score tables cover different motif classes")
    diff: dict[str, float | None] = {}
    for name in a.classes:
        za, zb = a.z[name], b.z[name]
        if za is None or zb is None or zb == 0.0:
            diff[name] = None
        else:
            diff[name] = 100.0 * (za - zb) / abs(zb)
    return diff


def z_percent_diff_csv(diff: dict[str, float | None]) -> str:
    lines = ["class,percent_diff,flag"]
    for name in CONNECTED_TRIADS:
        value = diff[name]
        text = "" if value is None else sig6(value)
        flag = "undefined" if value is None else ""
        lines.append(f"{name},{text},{flag}")
    return "\n".join(lines) + "\n"
