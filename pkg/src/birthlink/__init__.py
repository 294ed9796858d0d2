"""birthlink: bundle historical birth records by mother.

Builds a pairwise similarity graph over birth registrations (min-hash LSH
blocking plus weighted attribute similarities) and clusters it under
biologically motivated temporal constraints, with a precision/recall sweep
harness for evaluation against expert ground truth.
"""

from .blocking import MinHashIndex, build_index, candidate_pairs, shingle, signature
from .evaluation import (
    DEFAULT_SWEEP_THRESHOLDS,
    EvaluationReport,
    SweepSettings,
    pairwise_links,
    precision_recall,
    sweep,
)
from .graph import (
    SimilarityGraph,
    avg_neighbour_similarity,
    build_graph,
    load_graph,
    save_graph,
    sim_neighbours,
)
from .greedy import DirectedTemporalGraph, greedy_cluster, select_next, to_directed
from .records import (
    GroundTruth,
    Record,
    RecordSet,
    SyntheticConfig,
    generate_synthetic,
    load_ground_truth,
    load_records,
    save_ground_truth,
    save_records,
)
from .similarity import (
    AttributeComparator,
    ComparisonProfile,
    compare_records,
    exact,
    jaro_winkler,
    normalise,
    preset,
    score_pair,
    year_difference,
)
from .star import (
    Clustering,
    NodeTuple,
    StarCluster,
    next_best_neighbour,
    resolve_overlaps,
    sort_unassigned,
    star_cluster,
)
from .temporal import (
    DEFAULT_BREAKPOINTS,
    DEFAULT_P_MIN,
    TemporalConstraintModel,
    cluster_plausible,
    pair_plausible,
    plausibility,
)

__version__ = "0.1.0"
