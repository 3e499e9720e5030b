"""Quality as a function of the number of communities."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import networkx as nx
import pandas as pd

from email_communities.clustering.config import ClusteringConfig
from email_communities.clustering.kmedoids import cluster_matrix
from email_communities.clustering.similarity import csm_matrix
from email_communities.errors import ConfigInvalid, KTooLarge
from email_communities.eval.density import density
from email_communities.eval.entropy import DEFAULT_BINS, entropy
from email_communities.features.cpi import FeatureMatrix
from email_communities.schema import SweepRow

logger = logging.getLogger(__name__)

SWEEP_COLUMNS: tuple[str, ...] = tuple(SweepRow.model_fields)


def sweep_k(
    graph: nx.Graph,
    features: FeatureMatrix,
    k_range: tuple[int, int],
    base_config: ClusteringConfig,
    bins: int = DEFAULT_BINS,
    workers: int = 1,
) -> list[SweepRow]:
    """One clustering run per k in the inclusive range, same seed and alpha.

    The similarity matrix is computed once and shared by every run. Rows
    come back ordered by k whatever the completion order.
    """
    lo, hi = k_range
    n = graph.number_of_nodes()
    if lo < 1 or lo > hi:
        raise ConfigInvalid(f"invalid k range {lo}:{hi}")
    if hi > n:
        raise KTooLarge(f"k range upper bound {hi} exceeds node count {n}")

    nodes, sim = csm_matrix(graph, features, base_config.params)

    def _run(k: int) -> SweepRow:
        partition = cluster_matrix(nodes, sim, base_config.with_k(k))
        row = SweepRow(
            k=k,
            density=density(graph, partition),
            entropy=entropy(features, partition, bins),
            objective=partition.objective,
            iterations=partition.iterations_run,
            converged=partition.converged,
        )
        logger.info(
            "sweep k=%d: density=%.4f entropy=%.4f objective=%.4f",
            k, row.density, row.entropy, row.objective,
        )
        return row

    ks = list(range(lo, hi + 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run, ks))
    else:
        rows = [_run(k) for k in ks]
    return sorted(rows, key=lambda r: r.k)


def write_sweep_csv(rows: list[SweepRow], path: Path) -> None:
    """Columns: k, density, entropy, objective, iterations, converged."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame([r.model_dump() for r in rows], columns=list(SWEEP_COLUMNS))
    frame.to_csv(path, index=False, lineterminator="\n")
