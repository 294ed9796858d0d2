"""Pairwise-link precision/recall and the threshold-sweep harness.

A clustering is scored by expanding it into the set of intra-cluster record
pairs and comparing that against the pairs implied by the ground truth.
With no predicted links precision is 1.0 by convention, and with no true
links recall is 1.0. The sweep builds the similarity graph once at the
build threshold and re-clusters at each requested threshold.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .graph import SimilarityGraph, build_graph
from .greedy import greedy_cluster
from .records import GroundTruth, RecordSet
from .similarity import ComparisonProfile
from .star import Clustering, star_cluster
from .temporal import DEFAULT_P_MIN, TemporalConstraintModel

DEFAULT_SWEEP_THRESHOLDS: tuple[float, ...] = (1.0, 0.95, 0.90, 0.85, 0.80, 0.75, 0.70)

CLUSTERERS = ("star", "greedy")


@dataclass(frozen=True)
class EvaluationReport:
    """Link-level counts and scores for one clustering configuration."""

    config: Mapping[str, object]
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float

    def to_dict(self) -> dict:
        return {
            "config": dict(self.config),
            "true_positives": self.true_positives,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "precision": self.precision,
            "recall": self.recall,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "EvaluationReport":
        return cls(
            config=dict(data["config"]),
            true_positives=int(data["true_positives"]),
            false_positives=int(data["false_positives"]),
            false_negatives=int(data["false_negatives"]),
            precision=float(data["precision"]),
            recall=float(data["recall"]),
        )


def pairwise_links(clustering: Clustering) -> set[tuple[int, int]]:
    """All intra-cluster unordered pairs, smaller id first.

    Raises ValueError if the clusters overlap: link expansion is only
    meaningful on a disjoint partition.
    """
    seen: set[int] = set()
    links: set[tuple[int, int]] = set()
    for cluster in clustering.clusters:
        overlap = seen & cluster
        if overlap:
            raise ValueError(f"clusters overlap on record ids {sorted(overlap)[:5]}")
        seen |= cluster
        members = sorted(cluster)
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                links.add((a, b))
    return links


def ground_truth_links(ground_truth: GroundTruth) -> set[tuple[int, int]]:
    """Intra-entity pairs implied by the ground truth assignment."""
    links: set[tuple[int, int]] = set()
    for members in ground_truth.entities().values():
        ordered = sorted(members)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                links.add((a, b))
    return links


def precision_recall(
    clustering: Clustering,
    ground_truth: GroundTruth,
    config: Mapping[str, object] | None = None,
) -> EvaluationReport:
    """Compare predicted against true pairwise links."""
    universe = clustering.universe()
    truth_ids = set(ground_truth.assignment)
    if universe != truth_ids:
        missing = sorted(truth_ids - universe)[:5]
        extra = sorted(universe - truth_ids)[:5]
        raise ValueError(
            f"clustering and ground truth cover different records "
            f"(missing {missing}, extra {extra})"
        )
    predicted = pairwise_links(clustering)
    truth = ground_truth_links(ground_truth)
    tp = len(predicted & truth)
    fp = len(predicted - truth)
    fn = len(truth - predicted)
    precision = tp / (tp + fp) if predicted else 1.0
    recall = tp / (tp + fn) if truth else 1.0
    return EvaluationReport(
        config=dict(config or {}),
        true_positives=tp,
        false_positives=fp,
        false_negatives=fn,
        precision=precision,
        recall=recall,
    )


@dataclass(frozen=True)
class SweepSettings:
    """Everything the sweep needs besides the data: one profile, one clusterer."""

    profile: ComparisonProfile
    clusterer: str = "star"
    sort_method: str = "avr-sim-first"
    resolve_method: str = "avr-all"
    select_method: str = "next"
    num_bands: int = 100
    band_size: int = 4
    seed: int = 0
    s_build: float = 0.7
    temporal: TemporalConstraintModel | None = None
    p_min: float = DEFAULT_P_MIN
    greedy_retry: bool = False

    def __post_init__(self):
        if self.clusterer not in CLUSTERERS:
            raise ValueError(f"unknown clusterer {self.clusterer!r}; expected one of {CLUSTERERS}")

    def describe(self, threshold: float) -> dict[str, object]:
        method = (
            f"{self.sort_method}+{self.resolve_method}"
            if self.clusterer == "star"
            else self.select_method
        )
        return {
            "profile": self.profile.name,
            "weighted": self.profile.weighted,
            "clusterer": self.clusterer,
            "method": method,
            "temporal": self.temporal is not None,
            "p_min": self.p_min,
            "s_min": threshold,
        }


def run_clusterer(
    g: SimilarityGraph,
    record_ids: Iterable[int],
    settings: SweepSettings,
    threshold: float,
) -> Clustering:
    if settings.clusterer == "star":
        return star_cluster(
            g,
            record_ids,
            temporal=settings.temporal,
            p_min=settings.p_min,
            s_min=threshold,
            sort_method=settings.sort_method,
            resolve_method=settings.resolve_method,
        )
    return greedy_cluster(
        g.at_threshold(threshold),
        record_ids,
        temporal=settings.temporal,
        p_min=settings.p_min,
        select_method=settings.select_method,
        retry_on_rejection=settings.greedy_retry,
    )


def sweep(
    records: RecordSet,
    ground_truth: GroundTruth,
    settings: SweepSettings,
    thresholds: Iterable[float] = DEFAULT_SWEEP_THRESHOLDS,
) -> list[EvaluationReport]:
    """One report per threshold, re-clustering a single graph built once."""
    thresholds = tuple(thresholds)
    for t in thresholds:
        if not settings.s_build <= t <= 1.0:
            raise ValueError(
                f"sweep threshold {t} outside [{settings.s_build}, 1.0]"
            )
    graph = build_graph(
        records,
        settings.profile,
        num_bands=settings.num_bands,
        band_size=settings.band_size,
        seed=settings.seed,
        s_build=settings.s_build,
    )
    record_ids = records.ids()
    reports = []
    for threshold in thresholds:
        clustering = run_clusterer(graph, record_ids, settings, threshold)
        reports.append(
            precision_recall(clustering, ground_truth, settings.describe(threshold))
        )
    return reports


_CSV_COLUMNS = (
    "profile",
    "weighted",
    "clusterer",
    "method",
    "temporal",
    "p_min",
    "s_min",
    "true_positives",
    "false_positives",
    "false_negatives",
    "precision",
    "recall",
)


def write_reports_json(reports: Iterable[EvaluationReport], path: str | Path) -> None:
    payload = {"reports": [r.to_dict() for r in reports]}
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_reports_json(path: str | Path) -> list[EvaluationReport]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return [EvaluationReport.from_dict(entry) for entry in payload["reports"]]


def _cell(value: object) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_reports_csv(reports: Iterable[EvaluationReport], path: str | Path) -> None:
    """Flat table of one row per configuration point, ready for PR plotting."""
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for report in reports:
            writer.writerow(
                _cell(report.config.get(col, getattr(report, col, "")))
                for col in _CSV_COLUMNS
            )
