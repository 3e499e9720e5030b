"""Planted-partition graphs with known community labels."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np

from email_communities.features.cpi import CPI_FEATURES, FeatureMatrix
from email_communities.graph.builder import ordered_graph


@dataclass(frozen=True, eq=False)
class PlantedGraph:
    graph: nx.Graph
    features: FeatureMatrix
    labels: dict[str, str]  # address -> planted community label


def node_name(community: int, member: int) -> str:
    return f"c{community}n{member:02d}@planted.test"


def planted_cliques(
    sizes: tuple[int, ...] = (8, 8),
    bridges: int = 2,
    weight: int = 1,
) -> PlantedGraph:
    """Cliques joined by bridge edges, with per-clique-constant feature rows.

    Consecutive cliques c and c+1 are linked by ``bridges`` edges between
    members 0..bridges-1 of each. Clique c gets the one-hot feature row e_c,
    so features are distinct between cliques and constant within one.
    """
    if len(sizes) > len(CPI_FEATURES):
        raise ValueError(f"at most {len(CPI_FEATURES)} cliques have distinct one-hot rows")
    if any(bridges > size for size in sizes):
        raise ValueError("bridges cannot exceed clique size")

    nodes: list[str] = []
    edges: list[tuple[str, str, int]] = []
    labels: dict[str, str] = {}
    for c, size in enumerate(sizes):
        members = [node_name(c, i) for i in range(size)]
        nodes.extend(members)
        labels.update({m: f"com-{c}" for m in members})
        edges.extend((u, v, weight) for u, v in combinations(members, 2))
    for c in range(len(sizes) - 1):
        edges.extend((node_name(c, i), node_name(c + 1, i), weight) for i in range(bridges))

    graph = ordered_graph(nodes, edges)
    ordered = sorted(graph.nodes)
    values = np.zeros((len(ordered), len(CPI_FEATURES)), dtype=float)
    for i, node in enumerate(ordered):
        values[i, int(labels[node].split("-")[1])] = 1.0
    return PlantedGraph(graph, FeatureMatrix(tuple(ordered), values), labels)
