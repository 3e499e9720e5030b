"""Partition export: JSON report and two-column CSV."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError

from email_communities.clustering.config import ClusteringConfig
from email_communities.clustering.kmedoids import labels_of
from email_communities.errors import InconsistentPartition, UnreadablePath
from email_communities.schema import (
    ClusterSummary,
    NodeAssignment,
    Partition,
    PartitionReport,
)


def build_report(
    partition: Partition,
    nodes: list[str],
    sim: np.ndarray,
    config: ClusteringConfig,
) -> PartitionReport:
    """Per node: address, cluster, CSM to its medoid. Per cluster: medoid, size."""
    labels, medoids = labels_of(partition, nodes)
    to_medoid = sim[np.arange(len(nodes)), medoids[labels]]
    sizes = np.bincount(labels, minlength=partition.k)

    return PartitionReport(
        k=partition.k,
        alpha=config.params.alpha,
        seed=config.seed,
        objective=partition.objective,
        iterations_run=partition.iterations_run,
        converged=partition.converged,
        nodes=[
            NodeAssignment(address=node, cluster=int(labels[i]), csm_to_medoid=float(to_medoid[i]))
            for i, node in enumerate(nodes)
        ],
        clusters=[
            ClusterSummary(cluster=c, medoid=m, size=int(sizes[c]))
            for c, m in enumerate(partition.medoids)
        ],
        trace=partition.trace,
    )


def write_partition_json(report: PartitionReport, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")


def write_partition_csv(partition: Partition, path: Path) -> None:
    """Columns: address, cluster; rows in address order."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        sorted(partition.assignment.items()), columns=["address", "cluster"],
    )
    frame.to_csv(path, index=False, lineterminator="\n")


def load_partition_report(path: Path) -> PartitionReport:
    try:
        return PartitionReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise UnreadablePath(f"{path}: {e}") from e
    except ValidationError as e:
        raise InconsistentPartition(f"{path}: {e}") from e
