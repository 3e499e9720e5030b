"""GraphML and DOT import/export for UW-Graphs."""
from __future__ import annotations

import logging
from pathlib import Path
from xml.etree.ElementTree import ParseError

import networkx as nx

from email_communities.errors import GraphFormatError, UnreadablePath
from email_communities.graph.builder import ordered_graph
from email_communities.schema import Partition, is_canonical

logger = logging.getLogger(__name__)

# Qualitative palette cycled over community indices
_PALETTE: tuple[str, ...] = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def write_graphml(graph: nx.Graph, path: Path) -> None:
    """Node id = address; integer edge attribute ``weight``; owner as graph data."""
    path.parent.mkdir(parents=True, exist_ok=True)
    nx.write_graphml(graph, path)


def read_graphml(path: Path) -> nx.Graph:
    """Load a GraphML UW-Graph and rebuild it in canonical node order.

    Raises:
        UnreadablePath: the file does not exist or is not valid XML.
        GraphFormatError: directed or multi-edge graph, non-canonical node id,
            self-loop, or missing/non-positive integer weight.
    """
    try:
        raw = nx.read_graphml(path, node_type=str)
    except (OSError, ParseError) as e:
        raise UnreadablePath(f"{path}: {e}") from e
    except nx.NetworkXError as e:
        raise GraphFormatError(f"{path}: {e}") from e

    if raw.is_directed() or raw.is_multigraph():
        raise GraphFormatError(f"{path}: expected an undirected simple graph")

    for node in raw.nodes:
        if not is_canonical(node):
            raise GraphFormatError(f"{path}: node id {node!r} is not a canonical address")

    edges: list[tuple[str, str, int]] = []
    for u, v, data in raw.edges(data=True):
        if u == v:
            raise GraphFormatError(f"{path}: self-loop on {u}")
        weight = data.get("weight")
        # string-typed GraphML keys arrive as "3"
        try:
            value = float(weight)
        except (TypeError, ValueError):
            raise GraphFormatError(f"{path}: edge {u}--{v} has no integer weight") from None
        if not value.is_integer() or value < 1:
            raise GraphFormatError(f"{path}: edge {u}--{v} weight must be a positive integer")
        edges.append((u, v, int(value)))

    graph = ordered_graph(raw.nodes, edges, owner=raw.graph.get("owner"))
    logger.info(
        "Loaded %s: %d nodes, %d edges",
        path, graph.number_of_nodes(), graph.number_of_edges(),
    )
    return graph


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: nx.Graph, partition: Partition | None = None) -> str:
    """Render an undirected DOT graph with edge label = weight.

    With a partition, each community becomes a ``cluster_<i>`` subgraph and
    its nodes are filled with one palette color.
    """
    lines = ["graph uwgraph {", "  node [shape=ellipse, style=filled, fillcolor=white];"]

    owner = graph.graph.get("owner")
    if partition is None:
        for node in sorted(graph.nodes):
            attrs = " [peripheries=2]" if node == owner else ""
            lines.append(f"  {_quote(node)}{attrs};")
    else:
        for index, members in enumerate(partition.clusters()):
            color = _PALETTE[index % len(_PALETTE)]
            lines.append(f"  subgraph cluster_{index} {{")
            lines.append(f"    label={_quote(f'Com-{index + 1}')};")
            for node in members:
                extra = ", peripheries=2" if node == owner else ""
                lines.append(f"    {_quote(node)} [fillcolor={_quote(color)}{extra}];")
            lines.append("  }")

    for u, v, data in sorted(graph.edges(data=True), key=lambda e: (min(e[0], e[1]), max(e[0], e[1]))):
        a, b = min(u, v), max(u, v)
        lines.append(f"  {_quote(a)} -- {_quote(b)} [label={data['weight']}, weight={data['weight']}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(graph: nx.Graph, path: Path, partition: Partition | None = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_dot(graph, partition), encoding="utf-8")


def write_node_list(graph: nx.Graph, path: Path) -> None:
    """One address per line in canonical order."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{node}\n" for node in sorted(graph.nodes)), encoding="utf-8")
