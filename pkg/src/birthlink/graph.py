"""The undirected pairwise similarity graph and its neighbourhood queries.

Nodes are record ids with their registration dates; edges carry the
normalised pair similarity. Only pairs scoring at least the build threshold
enter the graph, so edge-less records never appear in it; the clusterers
re-attach them as singletons.
"""

from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .blocking import build_index, candidate_pairs
from .records import RecordSet
from .similarity import ComparisonProfile
from .temporal import TemporalConstraintModel, plausibility

DEFAULT_BUILD_THRESHOLD = 0.7


@dataclass(frozen=True)
class SimilarityGraph:
    """Immutable undirected graph over record ids with weighted edges."""

    s_build: float
    timestamps: Mapping[int, date]
    edges: Mapping[tuple[int, int], float]

    def __post_init__(self):
        object.__setattr__(self, "timestamps", dict(self.timestamps))
        normalised: dict[tuple[int, int], float] = {}
        adjacency: dict[int, dict[int, float]] = {v: {} for v in self.timestamps}
        for (a, b), weight in dict(self.edges).items():
            if a == b:
                raise ValueError(f"self-loop on record {a}")
            if a > b:
                a, b = b, a
            if a not in adjacency or b not in adjacency:
                raise ValueError(f"edge ({a}, {b}) references a missing node")
            if weight < self.s_build:
                raise ValueError(
                    f"edge ({a}, {b}) weight {weight} below build threshold {self.s_build}"
                )
            normalised[(a, b)] = weight
            adjacency[a][b] = weight
            adjacency[b][a] = weight
        object.__setattr__(self, "edges", normalised)
        object.__setattr__(self, "_adjacency", adjacency)

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.timestamps))

    def __contains__(self, record_id: int) -> bool:
        return record_id in self.timestamps

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def timestamp(self, record_id: int) -> date:
        try:
            return self.timestamps[record_id]
        except KeyError:
            raise ValueError(f"record {record_id} is not in the graph") from None

    def neighbours(self, record_id: int) -> Mapping[int, float]:
        """Adjacent ids with edge weights; treat as read-only."""
        try:
            return self._adjacency[record_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"record {record_id} is not in the graph") from None

    def edge_weight(self, a: int, b: int) -> float | None:
        return self._adjacency.get(a, {}).get(b)  # type: ignore[attr-defined]

    def sorted_edges(self) -> Iterator[tuple[int, int, float]]:
        for a, b in sorted(self.edges):
            yield a, b, self.edges[(a, b)]

    def at_threshold(self, s_min: float) -> "SimilarityGraph":
        """The subgraph with edges >= s_min and their endpoints only.

        This is how the evaluation sweep raises the similarity threshold
        without re-running candidate generation: nodes left without a
        qualifying edge fall out of the graph and become singletons.
        """
        if s_min < self.s_build:
            raise ValueError(
                f"threshold {s_min} below the graph's build threshold {self.s_build}"
            )
        kept = {pair: w for pair, w in self.edges.items() if w >= s_min}
        node_ids = {v for pair in kept for v in pair}
        return SimilarityGraph(
            s_build=s_min,
            timestamps={v: self.timestamps[v] for v in node_ids},
            edges=kept,
        )


def build_graph(
    records: RecordSet,
    profile: ComparisonProfile,
    num_bands: int = 100,
    band_size: int = 4,
    seed: int = 0,
    s_build: float = DEFAULT_BUILD_THRESHOLD,
    temporal: TemporalConstraintModel | None = None,
) -> SimilarityGraph:
    """Score LSH candidate pairs and keep those at or above `s_build`.

    With a temporal model supplied, each pair similarity is multiplied by
    the plausibility of the pair's day gap before thresholding, so
    temporally impossible pairs never enter the graph.
    """
    if not 0.0 < s_build <= 1.0:
        raise ValueError("s_build must lie in (0, 1]")
    index = build_index(records, profile, num_bands, band_size, seed)
    timestamps: dict[int, date] = {}
    edges: dict[tuple[int, int], float] = {}
    # Name values repeat heavily, so cache weighted similarities per
    # (attribute, value pair); every similarity function is symmetric.
    cache: dict[tuple[str, str, str], float] = {}
    comparators = profile.comparators
    total_weight = profile.total_weight
    for a, b in sorted(candidate_pairs(index)):
        rec_a = records.by_id(a)
        rec_b = records.by_id(b)
        score = 0.0
        for cmp in comparators:
            val_a = rec_a.attributes.get(cmp.attribute) or ""
            val_b = rec_b.attributes.get(cmp.attribute) or ""
            if val_a > val_b:
                val_a, val_b = val_b, val_a
            key = (cmp.attribute, val_a, val_b)
            cached = cache.get(key)
            if cached is None:
                cached = cmp.compare(val_a, val_b) * cmp.weight
                cache[key] = cached
            score += cached
        score = min(1.0, score / total_weight)
        if temporal is not None:
            gap = abs((rec_a.timestamp - rec_b.timestamp).days)
            score *= plausibility(temporal, gap)
        if score >= s_build:
            edges[(a, b)] = score
            timestamps[a] = rec_a.timestamp
            timestamps[b] = rec_b.timestamp
    return SimilarityGraph(s_build=s_build, timestamps=timestamps, edges=edges)


def sim_neighbours(g: SimilarityGraph, record_id: int, s_min: float) -> set[int]:
    """Neighbours of a node joined by an edge of weight at least s_min."""
    return {u for u, w in g.neighbours(record_id).items() if w >= s_min}


def avg_neighbour_similarity(
    g: SimilarityGraph, record_id: int, neighbours: Iterable[int]
) -> float:
    """Mean weight of the edges from a node to the given neighbours; 0 if none."""
    adjacency = g.neighbours(record_id)
    weights = []
    for u in neighbours:
        if u not in adjacency:
            raise ValueError(f"record {u} is not adjacent to {record_id}")
        weights.append(adjacency[u])
    if not weights:
        return 0.0
    return sum(weights) / len(weights)


def save_graph(g: SimilarityGraph, path: str | Path) -> None:
    """Write edges as three space-separated columns: id_i id_j weight."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for a, b, weight in g.sorted_edges():
            handle.write(f"{a} {b} {weight!r}\n")


def load_graph(
    path: str | Path, records: RecordSet, s_build: float = DEFAULT_BUILD_THRESHOLD
) -> SimilarityGraph:
    """Read a graph file back, re-attaching timestamps from the records."""
    path = Path(path)
    edges: dict[tuple[int, int], float] = {}
    timestamps: dict[int, date] = {}
    with path.open(encoding="utf-8") as handle:
        for line_num, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise ValueError(f"{path}:{line_num}: expected three columns")
            a, b, weight = int(parts[0]), int(parts[1]), float(parts[2])
            edges[(a, b)] = weight
            timestamps[a] = records.by_id(a).timestamp
            timestamps[b] = records.by_id(b).timestamp
    return SimilarityGraph(s_build=s_build, timestamps=timestamps, edges=edges)
