"""Per-community topological parameters on induced subgraphs.

Edge weights are ignored. The clustering coefficient averages only nodes of
degree >= 2, and centralization is Freeman-normalized degree centralization.
"""
from __future__ import annotations

from collections.abc import Iterable
from pathlib import Path

import networkx as nx
import pandas as pd

from email_communities.errors import EmptyGraph
from email_communities.schema import NetStatsRow, Partition

TABLE_COLUMNS: tuple[str, ...] = (
    "ClusCoefficient", "Centralization", "AvgNeighbors", "Nodes", "NetworkDensity",
)


def network_density(avg_neighbors: float, nodes: int) -> float:
    """avg_neighbors / (nodes - 1); 0 for a single node."""
    return avg_neighbors / (nodes - 1) if nodes >= 2 else 0.0


def clustering_coefficient(graph: nx.Graph) -> float:
    triangles = nx.triangles(graph)
    local = [
        2 * triangles[node] / (deg * (deg - 1))
        for node, deg in graph.degree()
        if deg >= 2
    ]
    return sum(local) / len(local) if local else 0.0


def centralization(graph: nx.Graph) -> float:
    n = graph.number_of_nodes()
    if n < 3:
        return 0.0
    degrees = [deg for _, deg in graph.degree()]
    d_max = max(degrees)
    return sum(d_max - d for d in degrees) / ((n - 1) * (n - 2))


def topology_row(graph: nx.Graph, community_index: int) -> NetStatsRow:
    n = graph.number_of_nodes()
    if n == 0:
        raise EmptyGraph(f"community {community_index} has no nodes")
    simple = nx.Graph(graph.edges())
    simple.add_nodes_from(graph.nodes)
    avg = 2 * simple.number_of_edges() / n
    return NetStatsRow(
        community_index=community_index,
        clustering_coefficient=clustering_coefficient(simple),
        centralization=centralization(simple),
        avg_neighbors=avg,
        nodes=n,
        network_density=network_density(avg, n),
    )


def community_stats(graph: nx.Graph, partition: Partition) -> list[NetStatsRow]:
    """One row per community, computed on its induced subgraph."""
    return [
        topology_row(graph.subgraph(members), index)
        for index, members in enumerate(partition.clusters())
    ]


def whole_graph_stats(graph: nx.Graph) -> NetStatsRow:
    return topology_row(graph, -1)


# ---------------------------------------------------------------------------
# Table output
# ---------------------------------------------------------------------------

def stats_frame(rows: Iterable[NetStatsRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [row.model_dump(by_alias=True) for row in rows],
        columns=["community_index", *TABLE_COLUMNS],
    )


def write_stats_csv(rows: Iterable[NetStatsRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    stats_frame(rows).to_csv(path, index=False, lineterminator="\n")


def _column_name(row: NetStatsRow) -> str:
    return "Graph" if row.community_index < 0 else f"Com-{row.community_index + 1}"


def render_stats_table(rows: list[NetStatsRow]) -> str:
    """Markdown table with parameters as rows and communities as columns."""
    labels = {
        "ClusCoefficient": "Clus Coefficient",
        "Centralization": "Centralization",
        "AvgNeighbors": "Avg. Neighbors",
        "Nodes": "Nodes",
        "NetworkDensity": "Network Density",
    }
    header = "| Parameters | " + " | ".join(_column_name(r) for r in rows) + " |"
    lines = [
        "# Community Statistics",
        "",
        header,
        "|" + "---|" * (len(rows) + 1),
    ]
    dumped = [r.model_dump(by_alias=True) for r in rows]
    for column in TABLE_COLUMNS:
        cells = []
        for values in dumped:
            value = values[column]
            cells.append(str(value) if column == "Nodes" else f"{value:.3f}")
        lines.append(f"| {labels[column]} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
