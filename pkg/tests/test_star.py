"""Star clustering tests, including hand-traced golden runs on a 6-node graph.

Star fixture (see conftest): edges (1,2)=0.95 (1,3)=0.90 (2,3)=0.80
(3,4)=0.85 (4,6)=0.88 (1,5)=0.92 (3,6)=0.72; node 5 is 44+ years from all
others, every other pair sits on the fully plausible plateau.

Per-node tuples at s_min=0.7: degree/avg-sim
  1: d=3 a=0.92333   2: d=2 a=0.875   3: d=4 a=0.8175
  4: d=2 a=0.865     5: d=1 a=0.92    6: d=2 a=0.80
Orders: avr-sim-first [1,5,2,4,3,6]; degree-first and comb [3,1,2,4,6,5]
(comb scores a*ln(d): 3:1.1333 1:1.0144 2:0.6065 4:0.5996 6:0.5545 5:0).
"""

import math
import random
from datetime import date

import pytest

from birthlink import (
    Clustering,
    NodeTuple,
    SimilarityGraph,
    StarCluster,
    next_best_neighbour,
    plausibility,
    resolve_overlaps,
    sort_unassigned,
    star_cluster,
)
from birthlink.star import grow_stars

IDS = tuple(range(1, 7))

# Hand-traced expected clusterings. Without temporal constraints:
#   avr-sim-first grows {1,2,5,3} (centre 1) then {4,6,3} (centre 4); node 3
#   repeats with scores avr-all 0.5667 vs 0.785, avr-high 0.85 vs 0.785,
#   edge-ratio 2/3 vs 2/2.
#   degree-first/comb grow {3,1,2,4,6} (centre 3) then {5,1} (centre 5);
#   node 1 repeats with avr-all 0.4625 vs 0.92, avr-high 0.925 vs 0.92,
#   edge-ratio 0.5 vs 1.0.
GOLDEN_NO_TEMPORAL = {
    ("avr-sim-first", "avr-all"): [[1, 2, 5], [3, 4, 6]],
    ("avr-sim-first", "avr-high"): [[1, 2, 3, 5], [4, 6]],
    ("avr-sim-first", "edge-ratio"): [[1, 2, 5], [3, 4, 6]],
    ("degree-first", "avr-all"): [[1, 5], [2, 3, 4, 6]],
    ("degree-first", "avr-high"): [[1, 2, 3, 4, 6], [5]],
    ("degree-first", "edge-ratio"): [[1, 5], [2, 3, 4, 6]],
    ("comb", "avr-all"): [[1, 5], [2, 3, 4, 6]],
    ("comb", "avr-high"): [[1, 2, 3, 4, 6], [5]],
    ("comb", "edge-ratio"): [[1, 5], [2, 3, 4, 6]],
}

# With the default model and p_min=0.5, node 5 is rejected everywhere and
# founds its own singleton star. avr-sim-first grows {1,2,3} then {5} then
# {4,6,3}; node 3's scores are avr-all/avr-high 0.85 vs 0.785 and
# edge-ratio ties 1.0=1.0, broken by similar-edge count (2=2) then lower
# centre id (1 < 4). degree-first/comb grow {3,1,2,4,6} then {5}.
GOLDEN_TEMPORAL = {
    ("avr-sim-first", "avr-all"): [[1, 2, 3], [4, 6], [5]],
    ("avr-sim-first", "avr-high"): [[1, 2, 3], [4, 6], [5]],
    ("avr-sim-first", "edge-ratio"): [[1, 2, 3], [4, 6], [5]],
    ("degree-first", "avr-all"): [[1, 2, 3, 4, 6], [5]],
    ("degree-first", "avr-high"): [[1, 2, 3, 4, 6], [5]],
    ("degree-first", "edge-ratio"): [[1, 2, 3, 4, 6], [5]],
    ("comb", "avr-all"): [[1, 2, 3, 4, 6], [5]],
    ("comb", "avr-high"): [[1, 2, 3, 4, 6], [5]],
    ("comb", "edge-ratio"): [[1, 2, 3, 4, 6], [5]],
}


class TestSortUnassigned:
    def test_avr_sim_first(self):
        tuples = [
            NodeTuple(1, 2, frozenset({2, 3}), 0.9),
            NodeTuple(2, 5, frozenset({1, 3, 4, 5, 6}), 0.8),
        ]
        assert [t.node for t in sort_unassigned(tuples, "avr-sim-first")] == [1, 2]

    def test_degree_first(self):
        tuples = [
            NodeTuple(1, 2, frozenset({2, 3}), 0.9),
            NodeTuple(2, 5, frozenset({1, 3, 4, 5, 6}), 0.8),
        ]
        assert [t.node for t in sort_unassigned(tuples, "degree-first")] == [2, 1]

    def test_comb_log_degree_one_sinks(self):
        # scores: 0.9 * ln(1) = 0 versus 0.5 * ln(10) = 1.151
        tuples = [
            NodeTuple(1, 1, frozenset({9}), 0.9),
            NodeTuple(2, 10, frozenset(range(10, 20)), 0.5),
        ]
        assert [t.node for t in sort_unassigned(tuples, "comb")] == [2, 1]
        assert 0.5 * math.log(10) > 0.9 * math.log(1)

    def test_ties_break_by_id(self):
        tuples = [
            NodeTuple(4, 2, frozenset({1, 2}), 0.8),
            NodeTuple(3, 2, frozenset({1, 2}), 0.8),
        ]
        for method in ("avr-sim-first", "degree-first", "comb"):
            assert [t.node for t in sort_unassigned(tuples, method)] == [3, 4]

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            sort_unassigned([], "best-first")


class TestNextBestNeighbour:
    def test_single_candidate(self, star_fixture):
        assert next_best_neighbour({1}, {2}, star_fixture) == 2

    def test_mean_over_existing_edges_only(self):
        # x has one 0.9 edge to the centre; y has 0.8 edges to two members
        g = SimilarityGraph(
            s_build=0.7,
            timestamps={i: date(1880 + i, 1, 1) for i in range(1, 5)},
            edges={(1, 3): 0.9, (1, 4): 0.8, (2, 4): 0.8, (1, 2): 0.85},
        )
        assert next_best_neighbour({1, 2}, {3, 4}, g) == 3

    def test_equal_averages_take_lower_id(self):
        g = SimilarityGraph(
            s_build=0.7,
            timestamps={i: date(1880 + i, 1, 1) for i in range(1, 4)},
            edges={(1, 2): 0.9, (1, 3): 0.9},
        )
        assert next_best_neighbour({1}, {2, 3}, g) == 2

    def test_no_candidates_rejected(self, star_fixture):
        with pytest.raises(ValueError):
            next_best_neighbour({1}, set(), star_fixture)


class TestStarClusterGolden:
    @pytest.mark.parametrize("sort_method,resolve_method", sorted(GOLDEN_NO_TEMPORAL))
    def test_without_temporal(self, star_fixture, sort_method, resolve_method):
        clustering = star_cluster(
            star_fixture,
            IDS,
            temporal=None,
            s_min=0.7,
            sort_method=sort_method,
            resolve_method=resolve_method,
        )
        assert clustering.as_sorted_lists() == GOLDEN_NO_TEMPORAL[(sort_method, resolve_method)]

    @pytest.mark.parametrize("sort_method,resolve_method", sorted(GOLDEN_TEMPORAL))
    def test_with_temporal(self, star_fixture, default_model, sort_method, resolve_method):
        clustering = star_cluster(
            star_fixture,
            IDS,
            temporal=default_model,
            p_min=0.5,
            s_min=0.7,
            sort_method=sort_method,
            resolve_method=resolve_method,
        )
        assert clustering.as_sorted_lists() == GOLDEN_TEMPORAL[(sort_method, resolve_method)]

    def test_rejected_node_founds_its_own_cluster(self, star_fixture, default_model):
        clustering = star_cluster(star_fixture, IDS, temporal=default_model)
        assert frozenset({5}) in clustering.clusters


class TestStarClusterBasics:
    def test_edgeless_graph_all_singletons(self):
        g = SimilarityGraph(
            s_build=0.7,
            timestamps={i: date(1880 + i, 1, 1) for i in range(1, 4)},
            edges={},
        )
        clustering = star_cluster(g, (1, 2, 3))
        assert clustering.as_sorted_lists() == [[1], [2], [3]]

    def test_single_edge_forced_cluster(self):
        g = SimilarityGraph(
            s_build=0.7,
            timestamps={1: date(1880, 1, 1), 2: date(1882, 1, 1)},
            edges={(1, 2): 0.9},
        )
        clustering = star_cluster(g, (1, 2), s_min=0.8)
        assert clustering.as_sorted_lists() == [[1, 2]]

    def test_records_absent_from_graph_become_singletons(self, star_fixture):
        clustering = star_cluster(star_fixture, tuple(range(1, 10)))
        for extra in (7, 8, 9):
            assert frozenset({extra}) in clustering.clusters

    def test_higher_s_min_fragments(self, star_fixture):
        clustering = star_cluster(star_fixture, IDS, s_min=0.93)
        # only (1,2)=0.95 survives the filter
        assert clustering.as_sorted_lists() == [[1, 2], [3], [4], [5], [6]]

    def test_s_min_below_build_rejected(self, star_fixture):
        with pytest.raises(ValueError):
            star_cluster(star_fixture, IDS, s_min=0.5)

    def test_unknown_methods_rejected(self, star_fixture):
        with pytest.raises(ValueError):
            star_cluster(star_fixture, IDS, sort_method="bogus")
        with pytest.raises(ValueError):
            star_cluster(star_fixture, IDS, resolve_method="bogus")


class TestResolveOverlaps:
    def _fixture(self):
        # v=5 sits in A={1,2,5} (edge 0.9 to node 1) and B={3,4,5}
        # (edges 0.8 to both members)
        g = SimilarityGraph(
            s_build=0.7,
            timestamps={i: date(1880 + i, 1, 1) for i in range(1, 6)},
            edges={
                (1, 5): 0.9, (3, 5): 0.8, (4, 5): 0.8,
                (1, 2): 0.85, (3, 4): 0.85,
            },
        )
        stars = [
            StarCluster(centre=1, members=frozenset({1, 2, 5})),
            StarCluster(centre=3, members=frozenset({3, 4, 5})),
        ]
        return g, stars

    def test_node_in_single_cluster_unchanged(self, star_fixture):
        stars = [StarCluster(centre=1, members=frozenset({1, 2}))]
        resolved = resolve_overlaps(stars, star_fixture, "avr-all", 0.7)
        assert resolved.as_sorted_lists() == [[1, 2]]

    def test_avr_all(self):
        g, stars = self._fixture()
        # A: 0.9/2 = 0.45, B: (0.8+0.8)/2 = 0.8 -> B
        resolved = resolve_overlaps(stars, g, "avr-all", 0.7)
        assert resolved.as_sorted_lists() == [[1, 2], [3, 4, 5]]

    def test_avr_high(self):
        g, stars = self._fixture()
        # A: 0.9/1 = 0.9, B: 1.6/2 = 0.8 -> A
        resolved = resolve_overlaps(stars, g, "avr-high", 0.7)
        assert resolved.as_sorted_lists() == [[1, 2, 5], [3, 4]]

    def test_edge_ratio(self):
        g, stars = self._fixture()
        # A: 1/2, B: 2/2 -> B
        resolved = resolve_overlaps(stars, g, "edge-ratio", 0.7)
        assert resolved.as_sorted_lists() == [[1, 2], [3, 4, 5]]

    def test_full_tie_cascade_prefers_lower_centre(self, default_model):
        # Node 2 ends up the centre of {1,2} and a member of {2,3}: the
        # resolution scores tie at 0.96, the similar-edge counts tie at 1,
        # and the lower centre id (2 < 3) keeps it in its own star.
        g = SimilarityGraph(
            s_build=0.7,
            timestamps={
                1: date(1880, 1, 1),
                2: date(1900, 1, 1),
                3: date(1935, 1, 1),
            },
            edges={(1, 2): 0.96, (2, 3): 0.96},
        )
        grown = grow_stars(g, default_model, 0.5, 0.7, "avr-sim-first")
        assert [(s.centre, sorted(s.members)) for s in grown] == [
            (2, [1, 2]),
            (3, [2, 3]),
        ]
        for method in ("avr-all", "avr-high", "edge-ratio"):
            clustering = star_cluster(
                g, (1, 2, 3), temporal=default_model, resolve_method=method
            )
            assert clustering.as_sorted_lists() == [[1, 2], [3]]

    def test_singleton_star_scores_zero(self):
        # Defensive path: a repeated node whose other cluster is a singleton
        # holding only itself cannot retain it against any real cluster.
        g = SimilarityGraph(
            s_build=0.7,
            timestamps={i: date(1880 + i, 1, 1) for i in range(1, 3)},
            edges={(1, 2): 0.9},
        )
        stars = [
            StarCluster(centre=2, members=frozenset({2})),
            StarCluster(centre=1, members=frozenset({1, 2})),
        ]
        resolved = resolve_overlaps(stars, g, "avr-all", 0.7)
        assert resolved.as_sorted_lists() == [[1, 2]]


class TestStarProperties:
    def _random_graph(self, seed):
        rng = random.Random(seed)
        n = rng.randint(4, 14)
        timestamps = {
            i: date(1870 + rng.randint(0, 60), rng.randint(1, 12), rng.randint(1, 28))
            for i in range(n)
        }
        edges = {}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.35:
                    edges[(i, j)] = round(0.7 + 0.3 * rng.random(), 3)
        return SimilarityGraph(s_build=0.7, timestamps=timestamps, edges=edges)

    @pytest.mark.parametrize("seed", range(12))
    def test_disjoint_cover(self, seed, default_model):
        g = self._random_graph(seed)
        ids = tuple(range(len(g.timestamps) + 3))
        clustering = star_cluster(g, ids, temporal=default_model)
        seen = [v for cluster in clustering.clusters for v in cluster]
        assert sorted(seen) == sorted(ids)

    @pytest.mark.parametrize("seed", range(12))
    def test_temporal_invariant(self, seed, default_model):
        g = self._random_graph(seed)
        clustering = star_cluster(g, g.nodes, temporal=default_model, p_min=0.5)
        for cluster in clustering.clusters:
            members = sorted(cluster)
            for i, a in enumerate(members):
                for b in members[i + 1 :]:
                    gap = abs((g.timestamp(a) - g.timestamp(b)).days)
                    assert plausibility(default_model, gap) >= 0.5

    @pytest.mark.parametrize("seed", range(12))
    def test_members_adjacent_to_centre(self, seed, default_model):
        g = self._random_graph(seed)
        for star in grow_stars(g, default_model, 0.5, 0.7, "degree-first"):
            for member in star.members - {star.centre}:
                weight = g.edge_weight(star.centre, member)
                assert weight is not None and weight >= 0.7

    @pytest.mark.parametrize("seed", range(6))
    def test_disabled_model_equals_constant_one(self, seed, constant_model):
        g = self._random_graph(seed)
        off = star_cluster(g, g.nodes, temporal=None)
        constant = star_cluster(g, g.nodes, temporal=constant_model)
        assert off == constant

    def test_determinism(self, star_fixture, default_model):
        runs = [
            star_cluster(star_fixture, IDS, temporal=default_model, sort_method="comb")
            for _ in range(3)
        ]
        assert runs[0] == runs[1] == runs[2]


class TestClusteringType:
    def test_canonical_order(self):
        clustering = Clustering(clusters=(frozenset({9, 4}), frozenset({1, 2})))
        assert clustering.as_sorted_lists() == [[1, 2], [4, 9]]

    def test_empty_clusters_dropped(self):
        clustering = Clustering(clusters=(frozenset(), frozenset({1})))
        assert len(clustering) == 1

    def test_universe(self):
        clustering = Clustering(clusters=(frozenset({1, 2}), frozenset({5})))
        assert clustering.universe() == frozenset({1, 2, 5})
