"""Pipeline stages with file-based boundaries.

Each stage reads the artifacts of earlier stages from ``output_dir`` and
writes its own; running them in order is exactly what ``pipeline`` does.
"""
from __future__ import annotations

import json
import logging
from collections.abc import Callable
from pathlib import Path

import networkx as nx

from email_communities.clustering.export import (
    build_report,
    load_partition_report,
    write_partition_csv,
    write_partition_json,
)
from email_communities.clustering.kmedoids import cluster_matrix, labels_of
from email_communities.clustering.similarity import csm_matrix
from email_communities.errors import ConfigInvalid, KTooLarge, MissingArtifact
from email_communities.eval.fmeasure import load_reference
from email_communities.eval.harness import run_eval
from email_communities.eval.sweep import sweep_k, write_sweep_csv
from email_communities.features.cpi import FeatureMatrix, extract_cpi, normalize
from email_communities.features.export import (
    read_feature_matrix,
    write_feature_matrix,
    write_raw_features,
)
from email_communities.graph.builder import aggregate, prune
from email_communities.graph.io import read_graphml, write_dot, write_graphml, write_node_list
from email_communities.graph.ledger import build_ledger
from email_communities.ingest.corpus import scan_corpus
from email_communities.ingest.export import load_records, write_diagnostics, write_records
from email_communities.netstats import (
    community_stats,
    render_stats_table,
    whole_graph_stats,
    write_stats_csv,
)
from email_communities.pipeline.config import PipelineConfig
from email_communities.schema import EmailRecord, Partition

logger = logging.getLogger(__name__)

RECORDS = "records.jsonl"
DIAGNOSTICS = "diagnostics.json"
GRAPHML = "graph.graphml"
GRAPH_DOT = "graph.dot"
NODE_LIST = "nodes.txt"
FEATURES_RAW = "features_raw.csv"
FEATURES = "features.csv"
PARTITION_JSON = "partition.json"
PARTITION_CSV = "partition.csv"
COMMUNITIES_DOT = "communities.dot"
QUALITY = "quality.json"
STATS_CSV = "stats.csv"
STATS_MD = "stats.md"
SWEEP = "sweep.csv"


def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise MissingArtifact(f"{stage} needs {path}; run the producing stage first")
    return path


def _load_records(config: PipelineConfig, stage: str) -> list[EmailRecord]:
    return load_records(_require(config.output_dir / RECORDS, stage))


def _load_graph(config: PipelineConfig, stage: str) -> nx.Graph:
    return read_graphml(_require(config.output_dir / GRAPHML, stage))


def _load_features(config: PipelineConfig, graph: nx.Graph, stage: str) -> FeatureMatrix:
    """features.csv when present, otherwise rebuilt from records.jsonl."""
    path = config.output_dir / FEATURES
    if path.exists():
        features = read_feature_matrix(path)
    elif (config.output_dir / RECORDS).exists():
        records = _load_records(config, stage)
        features = normalize(extract_cpi(records, config.owner, sorted(graph.nodes)))
    else:
        raise MissingArtifact(f"{stage} needs {path} or {config.output_dir / RECORDS}")
    return features.reindex(sorted(graph.nodes))


def _load_partition(config: PipelineConfig, graph: nx.Graph, stage: str) -> Partition:
    partition = load_partition_report(_require(config.output_dir / PARTITION_JSON, stage)).to_partition()
    labels_of(partition, sorted(graph.nodes))
    return partition


def run_ingest(config: PipelineConfig) -> list[Path]:
    if config.corpus_path is None:
        raise ConfigInvalid("ingest needs corpus_path")
    records, diagnostics = scan_corpus(config.corpus_path, workers=config.workers)

    out = config.output_dir
    write_records(records, out / RECORDS)
    write_diagnostics(diagnostics, out / DIAGNOSTICS)
    return [out / RECORDS, out / DIAGNOSTICS]


def run_build_graph(config: PipelineConfig) -> list[Path]:
    owner = config.owner
    records = _load_records(config, "build-graph")

    ledger = build_ledger(records)
    graph = aggregate(ledger, owner, config.hop_scope)
    graph = prune(graph, config.min_weight, config.drop_isolated)

    raw = extract_cpi(records, owner, sorted(graph.nodes))
    features = normalize(raw)

    out = config.output_dir
    write_graphml(graph, out / GRAPHML)
    write_dot(graph, out / GRAPH_DOT)
    write_node_list(graph, out / NODE_LIST)
    write_raw_features(raw, out / FEATURES_RAW)
    write_feature_matrix(features, out / FEATURES)
    return [out / p for p in (GRAPHML, GRAPH_DOT, NODE_LIST, FEATURES_RAW, FEATURES)]


def run_cluster(config: PipelineConfig) -> list[Path]:
    graph = _load_graph(config, "cluster")
    clustering = config.clustering
    if clustering.k > graph.number_of_nodes():
        raise KTooLarge(f"k={clustering.k} exceeds node count {graph.number_of_nodes()}")
    features = _load_features(config, graph, "cluster")

    nodes, sim = csm_matrix(graph, features, clustering.params)
    partition = cluster_matrix(nodes, sim, clustering)
    report = build_report(partition, nodes, sim, clustering)

    out = config.output_dir
    write_partition_json(report, out / PARTITION_JSON)
    write_partition_csv(partition, out / PARTITION_CSV)
    write_dot(graph, out / COMMUNITIES_DOT, partition=partition)
    return [out / PARTITION_JSON, out / PARTITION_CSV, out / COMMUNITIES_DOT]


def run_evaluate(config: PipelineConfig) -> list[Path]:
    graph = _load_graph(config, "evaluate")
    features = _load_features(config, graph, "evaluate")
    partition = _load_partition(config, graph, "evaluate")
    reference = load_reference(config.reference_path) if config.reference_path else None

    report = run_eval(graph, features, partition, bins=config.bins, reference=reference)

    path = config.output_dir / QUALITY
    payload = report.model_dump(by_alias=True, exclude_none=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return [path]


def run_stats(config: PipelineConfig) -> list[Path]:
    graph = _load_graph(config, "stats")
    partition = _load_partition(config, graph, "stats")
    rows = community_stats(graph, partition) + [whole_graph_stats(graph)]

    out = config.output_dir
    write_stats_csv(rows, out / STATS_CSV)
    (out / STATS_MD).write_text(render_stats_table(rows), encoding="utf-8")
    return [out / STATS_CSV, out / STATS_MD]


def run_sweep(config: PipelineConfig) -> list[Path]:
    if config.k_sweep is None:
        raise ConfigInvalid("sweep needs k_sweep (--sweep LO:HI)")
    graph = _load_graph(config, "sweep")
    features = _load_features(config, graph, "sweep")

    rows = sweep_k(
        graph, features, config.k_sweep, config.clustering,
        bins=config.bins, workers=config.workers,
    )
    path = config.output_dir / SWEEP
    write_sweep_csv(rows, path)
    return [path]


STAGES: dict[str, Callable[[PipelineConfig], list[Path]]] = {
    "ingest": run_ingest,
    "build-graph": run_build_graph,
    "cluster": run_cluster,
    "evaluate": run_evaluate,
    "stats": run_stats,
    "sweep": run_sweep,
}


def run_pipeline(config: PipelineConfig) -> list[Path]:
    """All stages in order; ``sweep`` only when a k range is configured."""
    written: list[Path] = []
    for name in STAGES:
        if name == "sweep" and config.k_sweep is None:
            logger.info("Skipping sweep: no k range configured")
            continue
        written.extend(run_stage(name, config))
    return written


def run_stage(name: str, config: PipelineConfig) -> list[Path]:
    config.output_dir.mkdir(parents=True, exist_ok=True)
    written = STAGES[name](config)
    for path in written:
        logger.info("%s: wrote %s", name, path)
    return written
