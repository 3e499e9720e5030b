from __future__ import annotations

import networkx as nx

from email_communities.eval.density import density
from email_communities.eval.entropy import DEFAULT_BINS, entropy
from email_communities.eval.fmeasure import f_measure
from email_communities.features.cpi import FeatureMatrix
from email_communities.netstats import community_stats, whole_graph_stats
from email_communities.schema import Partition, QualityReport


def run_eval(
    graph: nx.Graph,
    features: FeatureMatrix,
    partition: Partition,
    bins: int = DEFAULT_BINS,
    reference: dict[str, str] | None = None,
) -> QualityReport:
    """Score a partition: density, entropy, optional f-measure, per-community stats."""
    return QualityReport(
        k=partition.k,
        density=density(graph, partition),
        entropy=entropy(features, partition, bins),
        f_measure=f_measure(partition, reference) if reference else None,
        per_community_stats=community_stats(graph, partition),
        whole_graph_stats=whole_graph_stats(graph),
    )
