"""k-medoids local search over the collaborative similarity matrix.

All ties resolve toward the lowest node index, i.e. the lexicographically
smallest address, then toward the lowest cluster index.
"""
from __future__ import annotations

import logging

import networkx as nx
import numpy as np

from email_communities.clustering.config import ClusteringConfig, SimilarityParams
from email_communities.clustering.similarity import csm_matrix
from email_communities.errors import EmptyGraph, InconsistentPartition, KTooLarge
from email_communities.features.cpi import FeatureMatrix
from email_communities.schema import IterationTrace, Partition

logger = logging.getLogger(__name__)

# Scores closer than this to the best one are tied.
TIE_TOLERANCE = 1e-9


def first_best(values: np.ndarray) -> int:
    """Index of the first entry tied with the maximum."""
    return int(np.flatnonzero(values >= values.max() - TIE_TOLERANCE)[0])


def first_best_per_row(scores: np.ndarray) -> np.ndarray:
    """Row-wise :func:`first_best`."""
    best = scores.max(axis=1, keepdims=True)
    return np.argmax(scores >= best - TIE_TOLERANCE, axis=1)


def seeded_rng(seed: int) -> np.random.Generator:
    """Generator for a signed 64-bit seed; distinct seeds give distinct streams."""
    return np.random.default_rng(seed & (2**64 - 1))


def init_medoids(sim: np.ndarray, k: int, seed: int) -> np.ndarray:
    """Seeded random first medoid, then greedy farthest-first.

    Each next medoid is the node whose maximum similarity to the chosen
    medoids is smallest.
    """
    n = sim.shape[0]
    medoids = [int(seeded_rng(seed).integers(n))]
    closest = sim[medoids[0]].copy()
    for _ in range(1, k):
        candidates = -closest
        candidates[medoids] = -np.inf
        nxt = first_best(candidates)
        medoids.append(nxt)
        closest = np.maximum(closest, sim[nxt])
    return np.array(medoids, dtype=int)


def assign(sim: np.ndarray, medoids: np.ndarray) -> np.ndarray:
    """Each node joins the medoid it is most similar to.

    Medoids always belong to their own cluster, so no cluster can empty;
    nodes with zero similarity to every medoid land in cluster 0.
    """
    labels = first_best_per_row(sim[:, medoids])
    labels[medoids] = np.arange(len(medoids))
    return labels


def update_medoids(sim: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """Per cluster, the member with the largest total similarity to its cluster."""
    medoids = np.empty(k, dtype=int)
    for c in range(k):
        members = np.flatnonzero(labels == c)
        totals = sim[np.ix_(members, members)].sum(axis=1)
        medoids[c] = members[first_best(totals)]
    return medoids


def objective_value(sim: np.ndarray, labels: np.ndarray, medoids: np.ndarray) -> float:
    """Sum over nodes of CSM(node, medoid of its cluster)."""
    return float(sim[np.arange(len(labels)), medoids[labels]].sum())


def cluster_matrix(nodes: list[str], sim: np.ndarray, config: ClusteringConfig) -> Partition:
    """Run k-medoids on a precomputed similarity matrix.

    Raises:
        EmptyGraph: no nodes.
        KTooLarge: k exceeds the node count.
    """
    n = len(nodes)
    if n == 0:
        raise EmptyGraph("cannot cluster an empty graph")
    if config.k > n:
        raise KTooLarge(f"k={config.k} exceeds node count {n}")

    medoids = init_medoids(sim, config.k, config.seed)
    labels = assign(sim, medoids)
    trace: list[IterationTrace] = []
    converged = False
    iterations = 0

    for iteration in range(1, config.max_iters + 1):
        iterations = iteration
        before = objective_value(sim, labels, medoids)
        medoids = update_medoids(sim, labels, config.k)
        after = objective_value(sim, labels, medoids)

        new_labels = assign(sim, medoids)
        changed = int(np.count_nonzero(new_labels != labels))
        trace.append(IterationTrace(
            iteration=iteration,
            objective_before_update=before,
            objective_after_update=after,
            reassigned=changed,
        ))
        logger.debug(
            "iter %d: objective %.6f -> %.6f, %d reassigned", iteration, before, after, changed,
        )
        labels = new_labels
        if changed == 0:
            converged = True
            break

    objective = objective_value(sim, labels, medoids)
    logger.info(
        "k=%d: objective %.6f after %d iterations (%s)",
        config.k, objective, iterations, "converged" if converged else "max_iters reached",
    )
    return Partition(
        assignment={node: int(labels[i]) for i, node in enumerate(nodes)},
        medoids=[nodes[m] for m in medoids],
        objective=objective,
        iterations_run=iterations,
        converged=converged,
        trace=trace,
    )


def cluster(graph: nx.Graph, features: FeatureMatrix, config: ClusteringConfig) -> Partition:
    """Group the graph's nodes into ``config.k`` communities by CSM k-medoids."""
    if graph.number_of_nodes() == 0:
        raise EmptyGraph("cannot cluster an empty graph")
    if config.k > graph.number_of_nodes():
        raise KTooLarge(f"k={config.k} exceeds node count {graph.number_of_nodes()}")
    nodes, sim = csm_matrix(graph, features, config.params)
    return cluster_matrix(nodes, sim, config)


def labels_of(partition: Partition, nodes: list[str]) -> tuple[np.ndarray, np.ndarray]:
    """Validate a partition against ``nodes`` and return (labels, medoid indices).

    Raises:
        InconsistentPartition: a node is unassigned or unknown, a cluster
            index is out of range or empty, or a medoid sits outside its cluster.
    """
    k = partition.k
    position = {node: i for i, node in enumerate(nodes)}
    if set(partition.assignment) != set(nodes):
        raise InconsistentPartition("partition does not cover exactly the graph's nodes")
    if len(set(partition.medoids)) != k:
        raise InconsistentPartition("medoids must be distinct")

    labels = np.array([partition.assignment[node] for node in nodes], dtype=int)
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise InconsistentPartition(f"cluster index outside [0, {k})")
    if len(np.unique(labels)) != k:
        raise InconsistentPartition("every cluster must be non-empty")

    medoids = []
    for c, medoid in enumerate(partition.medoids):
        if medoid not in position:
            raise InconsistentPartition(f"medoid {medoid} is not a graph node")
        if partition.assignment[medoid] != c:
            raise InconsistentPartition(f"medoid {medoid} is not in cluster {c}")
        medoids.append(position[medoid])
    return labels, np.array(medoids, dtype=int)


def objective(
    graph: nx.Graph,
    features: FeatureMatrix,
    params: SimilarityParams,
    partition: Partition,
) -> float:
    """Recompute the sum of CSM(node, its medoid) for a partition."""
    nodes, sim = csm_matrix(graph, features, params)
    labels, medoids = labels_of(partition, nodes)
    return objective_value(sim, labels, medoids)
