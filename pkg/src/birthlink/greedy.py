"""Greedy time-ordered clustering over a directed view of the graph.

Every non-isolated node starts as a singleton working cluster in a priority
queue keyed by registration date. The earliest cluster repeatedly tries to
absorb one future record reachable through the graph; a temporally
implausible pick finalises the cluster. Each record belongs to exactly one
working cluster at a time, so the output is a disjoint partition.
"""

import heapq
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping

from .graph import SimilarityGraph
from .star import Clustering
from .temporal import DEFAULT_P_MIN, TemporalConstraintModel, cluster_plausible

SELECT_METHODS = ("next", "max-sim", "avr-sim")


@dataclass(frozen=True)
class DirectedTemporalGraph:
    """Edges of the similarity graph directed from earlier to later records."""

    timestamps: Mapping[int, date]
    out_edges: Mapping[int, Mapping[int, float]]
    in_edges: Mapping[int, Mapping[int, float]]

    def weight(self, a: int, b: int) -> float | None:
        """Weight of the edge between two nodes, whatever its direction."""
        forward = self.out_edges.get(a, {}).get(b)
        if forward is not None:
            return forward
        return self.out_edges.get(b, {}).get(a)

    @property
    def edge_count(self) -> int:
        return sum(len(targets) for targets in self.out_edges.values())


def to_directed(g: SimilarityGraph) -> DirectedTemporalGraph:
    """Direct each edge from the earlier record to the later one.

    Equal registration dates are directed from the lower id to the higher,
    so the edge count is always preserved.
    """
    out_edges: dict[int, dict[int, float]] = {v: {} for v in g.timestamps}
    in_edges: dict[int, dict[int, float]] = {v: {} for v in g.timestamps}
    for (a, b), weight in g.edges.items():
        if (g.timestamp(a), a) <= (g.timestamp(b), b):
            src, dst = a, b
        else:
            src, dst = b, a
        out_edges[src][dst] = weight
        in_edges[dst][src] = weight
    return DirectedTemporalGraph(
        timestamps=dict(g.timestamps), out_edges=out_edges, in_edges=in_edges
    )


def select_next(
    cluster: set[int],
    candidates: Iterable[int],
    g_d: DirectedTemporalGraph,
    method: str,
) -> int:
    """Pick the candidate to absorb next; ties always go to the lower id.

    `next` takes the earliest candidate; `max-sim` the one with the
    strongest single edge to any member; `avr-sim` the one with the highest
    mean weight over its existing edges to members.
    """
    ordered = sorted(candidates)
    if not ordered:
        raise ValueError("no candidates to choose from")
    if method == "next":
        return min(ordered, key=lambda v: (g_d.timestamps[v], v))
    if method not in ("max-sim", "avr-sim"):
        raise ValueError(f"unknown select method {method!r}; expected one of {SELECT_METHODS}")
    best = ordered[0]
    best_score = -1.0
    for candidate in ordered:
        weights = []
        for member in cluster:
            weight = g_d.weight(member, candidate)
            if weight is not None:
                weights.append(weight)
        if not weights:
            score = 0.0
        elif method == "max-sim":
            score = max(weights)
        else:
            score = sum(weights) / len(weights)
        if score > best_score:
            best = candidate
            best_score = score
    return best


def greedy_cluster(
    g: SimilarityGraph,
    record_ids: Iterable[int],
    temporal: TemporalConstraintModel | None = None,
    p_min: float = DEFAULT_P_MIN,
    select_method: str = "next",
    retry_on_rejection: bool = False,
) -> Clustering:
    """Grow clusters forward in time; records absent from the graph become singletons.

    A record can only be absorbed while it still sits in its own pending
    singleton, which keeps the working clusters disjoint. By default a
    temporally rejected pick finalises the cluster; with
    `retry_on_rejection` the remaining candidates are tried best-first
    before giving up.
    """
    if select_method not in SELECT_METHODS:
        raise ValueError(
            f"unknown select method {select_method!r}; expected one of {SELECT_METHODS}"
        )
    g_d = to_directed(g)
    final: list[frozenset[int]] = []
    queue: list[tuple[int, int, tuple[int, ...]]] = []
    available: set[int] = set()
    for node in sorted(g_d.timestamps):
        if not g_d.out_edges[node] and not g_d.in_edges[node]:
            final.append(frozenset((node,)))
            continue
        available.add(node)
        heapq.heappush(queue, (g_d.timestamps[node].toordinal(), node, (node,)))

    while queue:
        _, _, members_key = heapq.heappop(queue)
        members = set(members_key)
        if len(members) == 1:
            node = members_key[0]
            if node not in available:
                continue  # absorbed into another cluster after being queued
            available.discard(node)
        candidates = {
            target
            for member in members
            for target in g_d.out_edges[member]
            if target in available
        }
        admitted = False
        while candidates:
            pick = select_next(members, candidates, g_d, select_method)
            member_dates = (g_d.timestamps[v] for v in members)
            if cluster_plausible(temporal, g_d.timestamps[pick], member_dates, p_min):
                available.discard(pick)
                members.add(pick)
                heapq.heappush(
                    queue,
                    (g_d.timestamps[pick].toordinal(), min(members), tuple(sorted(members))),
                )
                admitted = True
                break
            if not retry_on_rejection:
                break
            candidates.discard(pick)
        if not admitted:
            final.append(frozenset(members))

    covered = {v for cluster in final for v in cluster}
    singletons = [frozenset((v,)) for v in record_ids if v not in covered]
    return Clustering(clusters=tuple(final) + tuple(singletons))
