"""Structural, semantic and collaborative (blended) node similarity.

Structural similarity is a generalized weighted Jaccard over closed
neighborhood weight profiles; semantic similarity is the cosine of the
nonnegative CPI rows; CSM blends the two with weight alpha.
"""
from __future__ import annotations

import networkx as nx
import numpy as np

from email_communities.clustering.config import SimilarityParams
from email_communities.errors import UnknownNode
from email_communities.features.cpi import FeatureMatrix


def _check_node(graph: nx.Graph, node: str) -> None:
    if node not in graph:
        raise UnknownNode(f"{node} is not a graph node")


def neighborhood_profile(graph: nx.Graph, u: str) -> dict[str, int]:
    """x_u[w] = weight(u, w) for neighbors; x_u[u] = max incident weight (1 if isolated)."""
    _check_node(graph, u)
    profile = {w: data["weight"] for w, data in graph[u].items() if w != u}
    profile[u] = max(profile.values(), default=1)
    return profile


def structural_sim(graph: nx.Graph, u: str, v: str) -> float:
    x_u = neighborhood_profile(graph, u)
    x_v = neighborhood_profile(graph, v)
    support = x_u.keys() | x_v.keys()
    num = sum(min(x_u.get(w, 0), x_v.get(w, 0)) for w in support)
    den = sum(max(x_u.get(w, 0), x_v.get(w, 0)) for w in support)
    return num / den


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 and norm_b == 0.0:
        return 1.0
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (norm_a * norm_b), 0.0, 1.0))


def semantic_sim(features: FeatureMatrix, u: str, v: str) -> float:
    """Cosine of two rows; both all-zero -> 1.0, exactly one all-zero -> 0.0."""
    if u == v:
        features.index(u)
        return 1.0
    return _cosine(features.row(u), features.row(v))


def csm(
    graph: nx.Graph,
    features: FeatureMatrix,
    params: SimilarityParams,
    u: str,
    v: str,
) -> float:
    """alpha * structural_sim + (1 - alpha) * semantic_sim."""
    alpha = params.alpha
    return alpha * structural_sim(graph, u, v) + (1.0 - alpha) * semantic_sim(features, u, v)


# ---------------------------------------------------------------------------
# Dense matrices over the canonical node order
# ---------------------------------------------------------------------------

def structural_matrix(graph: nx.Graph, nodes: list[str]) -> np.ndarray:
    n = len(nodes)
    position = {node: i for i, node in enumerate(nodes)}
    profiles = np.zeros((n, n), dtype=float)
    for i, u in enumerate(nodes):
        for w, weight in neighborhood_profile(graph, u).items():
            profiles[i, position[w]] = weight

    sim = np.empty((n, n), dtype=float)
    for i in range(n):
        num = np.minimum(profiles[i], profiles).sum(axis=1)
        den = np.maximum(profiles[i], profiles).sum(axis=1)
        sim[i] = num / den
    return sim


def semantic_matrix(features: FeatureMatrix, nodes: list[str]) -> np.ndarray:
    values = features.reindex(nodes).values
    norms = np.linalg.norm(values, axis=1)
    zero = norms == 0.0
    safe = np.where(zero, 1.0, norms)
    sim = (values @ values.T) / np.outer(safe, safe)
    sim[np.ix_(zero, ~zero)] = 0.0
    sim[np.ix_(~zero, zero)] = 0.0
    sim[np.ix_(zero, zero)] = 1.0
    return np.clip(sim, 0.0, 1.0)


def csm_matrix(
    graph: nx.Graph,
    features: FeatureMatrix,
    params: SimilarityParams,
) -> tuple[list[str], np.ndarray]:
    """Pairwise CSM over the graph's nodes in lexicographic order.

    Returns (nodes, S) with S symmetric, S[i, i] = 1 and entries in [0, 1].

    Raises:
        UnknownNode: a graph node has no feature row.
    """
    nodes = sorted(graph.nodes)
    alpha = params.alpha
    n = len(nodes)

    sim = np.zeros((n, n), dtype=float)
    if alpha > 0.0:
        sim += alpha * structural_matrix(graph, nodes)
    if alpha < 1.0:
        sim += (1.0 - alpha) * semantic_matrix(features, nodes)

    sim = (sim + sim.T) / 2.0
    np.fill_diagonal(sim, 1.0)
    return nodes, np.clip(sim, 0.0, 1.0)
