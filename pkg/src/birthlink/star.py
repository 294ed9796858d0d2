"""Star clustering with temporal admission checks and overlap resolution.

Each unassigned node in turn becomes a star centre and greedily absorbs its
similar neighbours, best-average-similarity first, admitting a node only if
it is temporally plausible with every current member. Admitted nodes can no
longer found stars but may be absorbed into several, so a final resolution
step assigns every repeated node to its single best cluster.
"""

import math
from dataclasses import dataclass
from typing import Iterable

from .graph import SimilarityGraph, avg_neighbour_similarity, sim_neighbours
from .temporal import DEFAULT_P_MIN, TemporalConstraintModel, cluster_plausible

SORT_METHODS = ("avr-sim-first", "degree-first", "comb")
RESOLVE_METHODS = ("avr-all", "avr-high", "edge-ratio")


@dataclass(frozen=True)
class Clustering:
    """Disjoint partition of record ids, canonically ordered by smallest member."""

    clusters: tuple[frozenset[int], ...]

    def __post_init__(self):
        canonical = tuple(
            sorted((frozenset(c) for c in self.clusters if c), key=min)
        )
        object.__setattr__(self, "clusters", canonical)

    def __len__(self) -> int:
        return len(self.clusters)

    def universe(self) -> frozenset[int]:
        return frozenset(v for cluster in self.clusters for v in cluster)

    def as_sorted_lists(self) -> list[list[int]]:
        return [sorted(cluster) for cluster in self.clusters]


@dataclass(frozen=True)
class NodeTuple:
    """A node with its similar-neighbour set, degree, and average similarity."""

    node: int
    degree: int
    neighbours: frozenset[int]
    avg_similarity: float


@dataclass(frozen=True)
class StarCluster:
    """A grown star: its centre and all members including the centre."""

    centre: int
    members: frozenset[int]


def sort_unassigned(tuples: Iterable[NodeTuple], method: str) -> list[NodeTuple]:
    """Order candidate centres, best first, with fully deterministic ties."""
    if method == "avr-sim-first":
        key = lambda t: (-t.avg_similarity, -t.degree, t.node)
    elif method == "degree-first":
        key = lambda t: (-t.degree, -t.avg_similarity, t.node)
    elif method == "comb":
        # avg similarity times log degree; log(1) = 0 sinks degree-1 nodes.
        key = lambda t: (
            -(t.avg_similarity * math.log(t.degree)) if t.degree > 0 else 0.0,
            -t.avg_similarity,
            t.node,
        )
    else:
        raise ValueError(f"unknown sort method {method!r}; expected one of {SORT_METHODS}")
    return sorted(tuples, key=key)


def next_best_neighbour(
    cluster: set[int], candidates: Iterable[int], g: SimilarityGraph
) -> int:
    """The candidate with the highest mean edge weight into the cluster.

    Only existing edges count towards the mean; ties go to the lower id.
    """
    best: int | None = None
    best_score = -1.0
    for candidate in sorted(candidates):
        adjacency = g.neighbours(candidate)
        weights = [adjacency[u] for u in cluster if u in adjacency]
        score = sum(weights) / len(weights) if weights else 0.0
        if score > best_score:
            best = candidate
            best_score = score
    if best is None:
        raise ValueError("no candidates to choose from")
    return best


def grow_stars(
    g: SimilarityGraph,
    temporal: TemporalConstraintModel | None,
    p_min: float,
    s_min: float,
    sort_method: str,
) -> list[StarCluster]:
    """The pre-resolution stage: grow one star per still-unassigned node.

    Expects a graph whose edges are already at or above s_min (see
    `SimilarityGraph.at_threshold`). A temporally rejected neighbour stays
    unassigned and may later found or join another star; because absorbed
    nodes remain in other centres' neighbour sets, stars may overlap.
    """
    tuples = []
    for node in g.nodes:
        neighbours = sim_neighbours(g, node, s_min)
        tuples.append(
            NodeTuple(
                node=node,
                degree=len(neighbours),
                neighbours=frozenset(neighbours),
                avg_similarity=avg_neighbour_similarity(g, node, neighbours),
            )
        )
    assigned: set[int] = set()
    stars: list[StarCluster] = []
    for entry in sort_unassigned(tuples, sort_method):
        if entry.node in assigned:
            continue
        assigned.add(entry.node)
        members = {entry.node}
        pool = set(entry.neighbours)
        while pool:
            candidate = next_best_neighbour(members, pool, g)
            pool.discard(candidate)
            member_dates = (g.timestamp(v) for v in members)
            if cluster_plausible(temporal, g.timestamp(candidate), member_dates, p_min):
                members.add(candidate)
                assigned.add(candidate)
        stars.append(StarCluster(centre=entry.node, members=frozenset(members)))
    return stars


def _resolution_score(
    node: int, star: StarCluster, g: SimilarityGraph, method: str, s_min: float
) -> float:
    adjacency = g.neighbours(node)
    weights = [adjacency[u] for u in star.members if u != node and u in adjacency]
    others = len(star.members) - 1
    if method == "avr-all":
        return sum(weights) / others if others else 0.0
    high = [w for w in weights if w >= s_min]
    if method == "avr-high":
        return sum(high) / len(high) if high else 0.0
    if method == "edge-ratio":
        return len(high) / others if others else 0.0
    raise ValueError(f"unknown resolve method {method!r}; expected one of {RESOLVE_METHODS}")


def resolve_overlaps(
    stars: Iterable[StarCluster], g: SimilarityGraph, method: str, s_min: float
) -> Clustering:
    """Assign every node appearing in several stars to its best one.

    Scores are computed against the clusters as grown. Ties go first to the
    cluster the node has the most edges of weight >= s_min into, then to
    the cluster with the lower centre id.
    """
    stars = list(stars)
    if method not in RESOLVE_METHODS:
        raise ValueError(f"unknown resolve method {method!r}; expected one of {RESOLVE_METHODS}")
    containing: dict[int, list[int]] = {}
    for index, star in enumerate(stars):
        for node in star.members:
            containing.setdefault(node, []).append(index)
    evictions: dict[int, set[int]] = {}
    for node, indices in containing.items():
        if len(indices) < 2:
            continue
        def rank(index: int) -> tuple[float, int, int]:
            star = stars[index]
            score = _resolution_score(node, star, g, method, s_min)
            adjacency = g.neighbours(node)
            similar_edges = sum(
                1
                for u in star.members
                if u != node and adjacency.get(u, 0.0) >= s_min
            )
            return (score, similar_edges, -star.centre)
        winner = max(indices, key=rank)
        for index in indices:
            if index != winner:
                evictions.setdefault(index, set()).add(node)
    resolved = []
    for index, star in enumerate(stars):
        members = star.members - evictions.get(index, set())
        if members:
            resolved.append(members)
    return Clustering(clusters=tuple(resolved))


def star_cluster(
    g: SimilarityGraph,
    record_ids: Iterable[int],
    temporal: TemporalConstraintModel | None = None,
    p_min: float = DEFAULT_P_MIN,
    s_min: float | None = None,
    sort_method: str = "avr-sim-first",
    resolve_method: str = "avr-all",
) -> Clustering:
    """Cluster the graph's nodes into stars; other record ids become singletons."""
    if s_min is None:
        s_min = g.s_build
    if sort_method not in SORT_METHODS:
        raise ValueError(f"unknown sort method {sort_method!r}; expected one of {SORT_METHODS}")
    if resolve_method not in RESOLVE_METHODS:
        raise ValueError(
            f"unknown resolve method {resolve_method!r}; expected one of {RESOLVE_METHODS}"
        )
    view = g.at_threshold(s_min)
    resolved = resolve_overlaps(
        grow_stars(view, temporal, p_min, s_min, sort_method), view, resolve_method, s_min
    )
    covered = resolved.universe()
    singletons = [frozenset((v,)) for v in record_ids if v not in covered]
    return Clustering(clusters=resolved.clusters + tuple(singletons))
