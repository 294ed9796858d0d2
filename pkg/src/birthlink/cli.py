"""Command-line pipeline: generate, build-graph, cluster, evaluate, sweep.

Every subcommand reads one JSON config (see `PipelineConfig`); a handful of
flags override individual keys. All stages are deterministic under a fixed
config and seed, and exit non-zero with a diagnostic on any contract error.
"""

import argparse
import csv
import sys
from pathlib import Path

from .config import PipelineConfig
from .evaluation import (
    precision_recall,
    run_clusterer,
    sweep,
    write_reports_csv,
    write_reports_json,
)
from .graph import build_graph, load_graph, save_graph
from .records import (
    GroundTruth,
    generate_synthetic,
    load_ground_truth,
    load_records,
    save_ground_truth,
    save_records,
)
from .star import Clustering

RECORDS_FILE = "records.csv"
GROUND_TRUTH_FILE = "ground_truth.csv"
GRAPH_FILE = "graph.txt"
CLUSTERS_FILE = "clusters.txt"
REPORT_FILE = "report.json"
SWEEP_JSON = "sweep.json"
SWEEP_CSV = "sweep.csv"


def save_clustering(clustering: Clustering, path: str | Path) -> None:
    """Two columns, record id then cluster id, sorted by record id."""
    rows = []
    for index, members in enumerate(clustering.as_sorted_lists()):
        label = f"c{index:06d}"
        rows.extend((record_id, label) for record_id in members)
    rows.sort()
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("record_id", "cluster_id"))
        writer.writerows((str(r), c) for r, c in rows)


def load_clustering(path: str | Path) -> Clustering:
    groups: dict[str, set[int]] = {}
    with Path(path).open(newline="", encoding="utf-8") as handle:
        for row_num, row in enumerate(csv.reader(handle), start=1):
            if not row:
                continue
            if row_num == 1 and row[0] == "record_id":
                continue
            if len(row) != 2:
                raise ValueError(f"row {row_num}: expected two columns")
            groups.setdefault(row[1], set()).add(int(row[0]))
    return Clustering(clusters=tuple(frozenset(g) for g in groups.values()))


def _load_config(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig.from_file(args.config)
    overrides = {
        "seed": getattr(args, "seed", None),
        "clusterer": getattr(args, "clusterer", None),
        "sort_method": getattr(args, "sort_method", None),
        "resolve_method": getattr(args, "resolve_method", None),
        "select_method": getattr(args, "select_method", None),
        "output_dir": getattr(args, "out", None),
    }
    temporal = getattr(args, "temporal", None)
    if temporal is not None:
        overrides["temporal"] = temporal == "on"
    threshold = getattr(args, "threshold", None)
    if threshold is not None:
        overrides["thresholds"] = (threshold,)
    return config.override(**overrides)


def _out_dir(config: PipelineConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_inputs(config: PipelineConfig):
    if not config.records:
        raise ValueError("config key 'records' is required for this command")
    records = load_records(config.records)
    return records


def cmd_generate(config: PipelineConfig) -> None:
    if config.synthetic is None:
        raise ValueError("config key 'synthetic' is required for generate")
    synthetic = config.synthetic
    records, truth = generate_synthetic(synthetic)
    out = _out_dir(config)
    save_records(records, out / RECORDS_FILE)
    save_ground_truth(truth, out / GROUND_TRUTH_FILE)
    print(f"wrote {len(records)} records for {len(set(truth.assignment.values()))} mothers to {out}")


def cmd_build_graph(config: PipelineConfig) -> None:
    records = _load_inputs(config)
    graph = build_graph(
        records,
        config.comparison_profile(),
        num_bands=config.lsh_bands,
        band_size=config.lsh_rows,
        seed=config.seed,
        s_build=config.graph_threshold,
        temporal=config.temporal_model() if config.graph_temporal else None,
    )
    out = _out_dir(config)
    save_graph(graph, out / GRAPH_FILE)
    print(f"wrote graph with {len(graph.nodes)} nodes and {graph.edge_count} edges to {out / GRAPH_FILE}")


def cmd_cluster(config: PipelineConfig) -> None:
    records = _load_inputs(config)
    graph_path = Path(config.output_dir) / GRAPH_FILE
    if not graph_path.exists():
        raise ValueError(f"graph file {graph_path} not found; run build-graph first")
    graph = load_graph(graph_path, records, s_build=config.graph_threshold)
    threshold = config.thresholds[0] if len(config.thresholds) == 1 else config.graph_threshold
    clustering = run_clusterer(graph, records.ids(), config.sweep_settings(), threshold)
    out = _out_dir(config)
    save_clustering(clustering, out / CLUSTERS_FILE)
    print(f"wrote {len(clustering)} clusters to {out / CLUSTERS_FILE}")


def cmd_evaluate(config: PipelineConfig) -> None:
    records = _load_inputs(config)
    if not config.ground_truth:
        raise ValueError("config key 'ground_truth' is required for evaluate")
    truth = load_ground_truth(config.ground_truth, records)
    clusters_path = Path(config.output_dir) / CLUSTERS_FILE
    if not clusters_path.exists():
        raise ValueError(f"clustering file {clusters_path} not found; run cluster first")
    clustering = load_clustering(clusters_path)
    report = precision_recall(
        clustering, truth, config.sweep_settings().describe(config.graph_threshold)
    )
    out = _out_dir(config)
    write_reports_json([report], out / REPORT_FILE)
    print(f"precision={report.precision:.4f} recall={report.recall:.4f} -> {out / REPORT_FILE}")


def cmd_sweep(config: PipelineConfig, plot_data: bool = False) -> None:
    records = _load_inputs(config)
    if not config.ground_truth:
        raise ValueError("config key 'ground_truth' is required for sweep")
    truth = load_ground_truth(config.ground_truth, records)
    reports = sweep(records, truth, config.sweep_settings(), config.thresholds)
    out = _out_dir(config)
    write_reports_csv(reports, out / SWEEP_CSV)
    if not plot_data:
        write_reports_json(reports, out / SWEEP_JSON)
    print(f"wrote {len(reports)} sweep points to {out / SWEEP_CSV}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="path to the pipeline config JSON")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="override the output directory")
    parser.add_argument(
        "--temporal", choices=("on", "off"), help="override temporal constraints"
    )
    parser.add_argument("--threshold", type=float, help="single similarity threshold")
    parser.add_argument("--clusterer", choices=("star", "greedy"))
    parser.add_argument("--sort-method", dest="sort_method",
                        choices=("avr-sim-first", "degree-first", "comb"))
    parser.add_argument("--resolve-method", dest="resolve_method",
                        choices=("avr-all", "avr-high", "edge-ratio"))
    parser.add_argument("--select-method", dest="select_method",
                        choices=("next", "max-sim", "avr-sim"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="birthlink",
        description="Bundle birth records by mother via temporal graph clustering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("generate", "build-graph", "cluster", "evaluate", "sweep"):
        command = sub.add_parser(name)
        _add_common(command)
        if name == "sweep":
            command.add_argument(
                "--plot-data",
                action="store_true",
                help="emit only the PR-curve CSV table",
            )
    return parser


_COMMANDS = {
    "generate": cmd_generate,
    "build-graph": cmd_build_graph,
    "cluster": cmd_cluster,
    "evaluate": cmd_evaluate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "sweep":
            cmd_sweep(config, plot_data=args.plot_data)
        else:
            _COMMANDS[args.command](config)
    except (ValueError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
