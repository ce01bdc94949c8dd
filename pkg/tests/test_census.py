"""Triad census, rewiring null model and motif z-scores."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tourflow import (
    CONNECTED_TRIADS,
    TRIAD_NAMES,
    MobilityGraph,
    motif_zscores,
    rewire,
    triad_census,
    z_percent_diff,
)
from tourflow.census import z_percent_diff_csv

from oracles import (
    ASYMMETRIC_PER_CLASS,
    MUTUAL_PER_CLASS,
    NULL_PER_CLASS,
    brute_force_triad_census,
    codes_for,
    random_digraph,
)
from tourflow.metrics import dyad_census


class TestTriadCensus:
    def test_empty_graph_is_all_003(self) -> None:
        g = MobilityGraph(codes_for(5), {})
        counts = triad_census(g).counts
        assert counts["003"] == 10
        assert sum(counts.values()) == 10

    def test_complete_mutual_triple_is_300(self) -> None:
        codes = codes_for(3)
        edges = {(a, b): 1 for a in codes for b in codes if a != b}
        counts = triad_census(MobilityGraph(codes, edges)).counts
        assert counts["300"] == 1
        assert sum(counts.values()) == 1

    def test_single_arc_in_triple(self) -> None:
        g = MobilityGraph(codes_for(3), {("AA", "AB"): 1})
        assert triad_census(g).counts["012"] == 1

    def test_two_node_graph_rejected(self) -> None:
        g = MobilityGraph.build({("AA", "BB"): 1})
        with pytest.raises(ValueError, match=">= 3 nodes"):
            triad_census(g)

    def test_transitive_and_cyclic_triples_distinguished(self) -> None:
        codes = codes_for(3)
        cyclic = MobilityGraph(
            codes, {("AA", "AB"): 1, ("AB", "AC"): 1, ("AC", "AA"): 1})
        transitive = MobilityGraph(
            codes, {("AA", "AB"): 1, ("AB", "AC"): 1, ("AA", "AC"): 1})
        assert triad_census(cyclic).counts["030C"] == 1
        assert triad_census(transitive).counts["030T"] == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_brute_force_classification(self, seed: int) -> None:
        rng = np.random.default_rng(600 + seed)
        n = int(rng.integers(5, 16))
        g = random_digraph(rng, n, float(rng.uniform(0.05, 0.6)))
        assert triad_census(g).counts == brute_force_triad_census(g)

    @given(seed=st.integers(0, 100_000), n=st.integers(3, 25))
    @settings(max_examples=60, deadline=None)
    def test_total_is_n_choose_3(self, seed: int, n: int) -> None:
        g = random_digraph(np.random.default_rng(seed), n, 0.25)
        census = triad_census(g)
        assert sum(census.counts.values()) == census.total

    @pytest.mark.parametrize("seed", range(5))
    def test_dyad_counts_recoverable_from_triads(self, seed: int) -> None:
        n = 10
        g = random_digraph(np.random.default_rng(700 + seed), n, 0.3)
        counts = triad_census(g).counts
        dyads = dyad_census(g)
        mutual = sum(counts[c] * k for c, k in MUTUAL_PER_CLASS.items())
        asymmetric = sum(counts[c] * k for c, k in ASYMMETRIC_PER_CLASS.items())
        null = sum(counts[c] * k for c, k in NULL_PER_CLASS.items())
        assert mutual == dyads.mutual * (n - 2)
        assert asymmetric == dyads.asymmetric * (n - 2)
        assert null == dyads.null * (n - 2)

    def test_csv_covers_all_sixteen_classes(self) -> None:
        g = random_digraph(np.random.default_rng(0), 8, 0.3)
        lines = triad_census(g).to_csv().splitlines()
        assert lines[0] == "class,count"
        assert [ln.split(",")[0] for ln in lines[1:]] == list(TRIAD_NAMES)


def degree_sequences(g: MobilityGraph) -> tuple[dict[str, int], dict[str, int]]:
    out_deg = dict.fromkeys(g.nodes, 0)
    in_deg = dict.fromkeys(g.nodes, 0)
    for origin, dest in g.edges:
        out_deg[origin] += 1
        in_deg[dest] += 1
    return out_deg, in_deg


class TestRewire:
    def test_preserves_degree_sequences(self) -> None:
        g = random_digraph(np.random.default_rng(42), 20, 0.2)
        shuffled = rewire(g, seed=1)
        assert degree_sequences(shuffled) == degree_sequences(g)

    def test_no_self_loops_or_duplicates(self) -> None:
        g = random_digraph(np.random.default_rng(43), 15, 0.3)
        shuffled = rewire(g, seed=2)
        assert all(o != d for o, d in shuffled.edges)
        assert len(shuffled.edges) == len(g.edges)

    def test_result_is_binary(self) -> None:
        g = random_digraph(np.random.default_rng(44), 10, 0.4, max_weight=500)
        shuffled = rewire(g, seed=3)
        assert set(shuffled.edges.values()) == {1}

    def test_same_seed_reproduces_exactly(self) -> None:
        g = random_digraph(np.random.default_rng(45), 12, 0.3)
        assert rewire(g, seed=7).edges == rewire(g, seed=7).edges

    def test_different_seeds_usually_differ(self) -> None:
        g = random_digraph(np.random.default_rng(46), 15, 0.3)
        assert rewire(g, seed=1).edges != rewire(g, seed=2).edges

    def test_preserves_node_set_and_label(self) -> None:
        g = random_digraph(np.random.default_rng(47), 8, 0.5)
        labelled = MobilityGraph(g.nodes, g.edges, "sample")
        shuffled = rewire(labelled, seed=4)
        assert shuffled.nodes == g.nodes
        assert shuffled.label == "sample"

    def test_two_disjoint_arcs_toggle_between_matchings(self) -> None:
        # AA->AB, AC->AD has exactly one legal swap, giving AA->AD,
        # AC->AB; repeated swaps toggle between these two matchings.
        g = MobilityGraph(codes_for(4), {("AA", "AB"): 1, ("AC", "AD"): 1})
        shuffled = rewire(g, seed=5, swaps_per_edge=50)
        assert set(shuffled.edges) in (
            {("AA", "AD"), ("AC", "AB")},
            {("AA", "AB"), ("AC", "AD")},
        )

    def test_too_few_edges_rejected(self) -> None:
        g = MobilityGraph.build({("AA", "BB"): 1})
        with pytest.raises(ValueError, match=">= 2 edges"):
            rewire(g, seed=0)

    def test_invalid_swap_count_rejected(self) -> None:
        g = MobilityGraph.build({("AA", "BB"): 1, ("BB", "CC"): 1})
        with pytest.raises(ValueError, match="swaps_per_edge"):
            rewire(g, seed=0, swaps_per_edge=0)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_degree_invariance_property(self, seed: int) -> None:
        g = random_digraph(np.random.default_rng(seed), 10, 0.35)
        if len(g.edges) < 2:
            return
        shuffled = rewire(g, seed=seed, swaps_per_edge=10)
        assert degree_sequences(shuffled) == degree_sequences(g)
        assert all(o != d for o, d in shuffled.edges)


class TestMotifZScores:
    def test_reproducible_bit_identical(self) -> None:
        g = random_digraph(np.random.default_rng(50), 12, 0.3)
        a = motif_zscores(g, ensemble_size=20, seed=9)
        b = motif_zscores(g, ensemble_size=20, seed=9)
        assert a.null_mean == b.null_mean
        assert a.null_std == b.null_std
        assert a.z == b.z

    def test_small_ensemble_rejected(self) -> None:
        g = random_digraph(np.random.default_rng(51), 8, 0.4)
        with pytest.raises(ValueError, match="ensemble_size"):
            motif_zscores(g, ensemble_size=1)

    def test_rigid_graph_flags_everything_undefined(self) -> None:
        # A single 3-cycle admits no accepted swap, so the null ensemble
        # is constant and every spread is zero.
        g = MobilityGraph(
            codes_for(3), {("AA", "AB"): 1, ("AB", "AC"): 1, ("AC", "AA"): 1})
        scores = motif_zscores(g, ensemble_size=5, seed=0)
        assert all(z is None for z in scores.z.values())
        csv_rows = scores.to_csv().splitlines()[1:]
        assert all(row.endswith(",undefined") for row in csv_rows)

    def test_relevance_needs_z_and_count(self) -> None:
        g = random_digraph(np.random.default_rng(52), 14, 0.3)
        scores = motif_zscores(g, ensemble_size=30, seed=3)
        flags = scores.relevant(z_min=2.0, count_min=4)
        for name in scores.classes:
            z = scores.z[name]
            expected = z is not None and z >= 2.0 and scores.real[name] >= 4
            assert flags[name] == expected

    def test_csv_layout(self) -> None:
        g = random_digraph(np.random.default_rng(53), 10, 0.4)
        scores = motif_zscores(g, ensemble_size=10, seed=1)
        lines = scores.to_csv().splitlines()
        assert lines[0] == "class,real,mean,std,z,flag"
        assert [ln.split(",")[0] for ln in lines[1:]] == list(CONNECTED_TRIADS)

    def test_null_means_match_manual_ensemble(self) -> None:
        from tourflow.seeds import derive_seed

        g = random_digraph(np.random.default_rng(54), 10, 0.35)
        scores = motif_zscores(g, ensemble_size=12, seed=5, swaps_per_edge=10)
        samples = {name: [] for name in CONNECTED_TRIADS}
        for i in range(12):
            counts = triad_census(rewire(g, derive_seed(5, i), 10)).counts
            for name in CONNECTED_TRIADS:
                samples[name].append(counts[name])
        for name in CONNECTED_TRIADS:
            column = np.array(samples[name], dtype=np.float64)
            assert scores.null_mean[name] == pytest.approx(column.mean(), abs=1e-12)
            assert scores.null_std[name] == pytest.approx(column.std(), abs=1e-12)


class TestZPercentDiff:
    @staticmethod
    def scores_with(z: dict[str, float | None]) -> "object":
        from tourflow.census import MotifZScores

        filled = {name: z.get(name) for name in CONNECTED_TRIADS}
        zeros = dict.fromkeys(CONNECTED_TRIADS, 0)
        zerosf = dict.fromkeys(CONNECTED_TRIADS, 0.0)
        return MotifZScores(CONNECTED_TRIADS, zeros, zerosf, zerosf, filled, 2, 1, 0)

    def test_identity_is_zero(self) -> None:
        a = self.scores_with({"030T": 4.2})
        assert z_percent_diff(a, a)["030T"] == 0.0

    def test_doubling_is_plus_hundred(self) -> None:
        a = self.scores_with({"030T": 8.4})
        b = self.scores_with({"030T": 4.2})
        assert z_percent_diff(a, b)["030T"] == pytest.approx(100.0)

    def test_negative_reference_uses_absolute_value(self) -> None:
        a = self.scores_with({"030T": -1.0})
        b = self.scores_with({"030T": -2.0})
        assert z_percent_diff(a, b)["030T"] == pytest.approx(50.0)

    def test_zero_or_undefined_reference_is_none(self) -> None:
        a = self.scores_with({"030T": 1.0})
        zero = self.scores_with({"030T": 0.0})
        undefined = self.scores_with({})
        assert z_percent_diff(a, zero)["030T"] is None
        assert z_percent_diff(a, undefined)["030T"] is None
        assert z_percent_diff(undefined, a)["030T"] is None

    def test_known_arithmetic(self) -> None:
        a = self.scores_with({"030T": 7.4})
        b = self.scores_with({"030T": 4.21})
        assert z_percent_diff(a, b)["030T"] == pytest.approx(75.77, abs=0.005)

    def test_csv_marks_undefined(self) -> None:
        a = self.scores_with({"030T": 1.0})
        diff = z_percent_diff(a, self.scores_with({}))
        lines = z_percent_diff_csv(diff).splitlines()
        assert lines[0] == "class,percent_diff,flag"
        row = next(ln for ln in lines if ln.startswith("030T,"))
        assert row == "030T,,undefined"
