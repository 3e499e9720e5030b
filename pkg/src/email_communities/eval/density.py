from __future__ import annotations

import logging

import networkx as nx

from email_communities.schema import Partition

logger = logging.getLogger(__name__)


def density(graph: nx.Graph, partition: Partition) -> float:
    """Fraction of edges whose endpoints share a cluster (unweighted).

    An edgeless graph is vacuously dense (1.0).
    """
    total = graph.number_of_edges()
    if total == 0:
        logger.warning("NoEdges: density of an edgeless graph is defined as 1.0")
        return 1.0
    assignment = partition.assignment
    intra = sum(1 for u, v in graph.edges() if assignment[u] == assignment[v])
    return intra / total
