"""Aggregation of the directed ledger into the undirected weighted graph."""
from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable

import networkx as nx

from email_communities.errors import ConfigInvalid, EmptyGraph, OwnerAbsent
from email_communities.graph.ledger import InteractionLedger
from email_communities.schema import HopScope, OwnerSpec

logger = logging.getLogger(__name__)


def ordered_graph(
    nodes: Iterable[str],
    weighted_edges: Iterable[tuple[str, str, int]],
    owner: str | None = None,
) -> nx.Graph:
    """Build an ``nx.Graph`` whose node and edge order is lexicographic.

    Node order is the canonical iteration order for every downstream
    tie-break, so all graphs in the package are built through here.
    """
    graph = nx.Graph()
    if owner is not None:
        graph.graph["owner"] = owner
    graph.add_nodes_from(sorted(set(nodes)))
    edges = sorted((min(u, v), max(u, v), w) for u, v, w in weighted_edges)
    for u, v, w in edges:
        graph.add_edge(u, v, weight=int(w))
    return graph


def sorted_nodes(graph: nx.Graph) -> list[str]:
    return sorted(graph.nodes)


def aggregate(
    ledger: InteractionLedger,
    owner: OwnerSpec,
    hop_scope: HopScope = HopScope.all_observed,
) -> nx.Graph:
    """Collapse directions: weight({u, v}) = count(u->v) + count(v->u).

    Owner aliases merge into one node labeled by the smallest alias. With
    ``owner-incident`` only edges touching the owner node are kept.

    Raises:
        OwnerAbsent: no ledger pair involves any owner alias.
    """
    if not any(s in owner.addresses or r in owner.addresses for s, r in ledger.counts):
        raise OwnerAbsent(
            f"no message involves the owner ({', '.join(sorted(owner.addresses))})"
        )

    label = owner.label
    weights: Counter[tuple[str, str]] = Counter()
    for (sender, recipient), count in ledger.counts.items():
        u, v = owner.resolve(sender), owner.resolve(recipient)
        if u == v:
            # two aliases of the owner
            continue
        if hop_scope == HopScope.owner_incident and label not in (u, v):
            continue
        weights[(min(u, v), max(u, v))] += count

    nodes = {a for pair in weights for a in pair} | {label}
    graph = ordered_graph(nodes, ((u, v, w) for (u, v), w in weights.items()), owner=label)
    logger.info(
        "Aggregated UW-Graph (%s): %d nodes, %d edges",
        HopScope(hop_scope).value, graph.number_of_nodes(), graph.number_of_edges(),
    )
    return graph


def prune(graph: nx.Graph, min_weight: int = 1, drop_isolated: bool = True) -> nx.Graph:
    """Remove edges lighter than ``min_weight`` and, optionally, isolated nodes.

    Raises:
        ConfigInvalid: min_weight < 1.
        EmptyGraph: no node survives.
    """
    if min_weight < 1:
        raise ConfigInvalid(f"min_weight must be >= 1, got {min_weight}")

    edges = [
        (u, v, d["weight"]) for u, v, d in graph.edges(data=True) if d["weight"] >= min_weight
    ]
    if drop_isolated:
        nodes = {a for u, v, _ in edges for a in (u, v)}
    else:
        nodes = set(graph.nodes)

    if not nodes:
        raise EmptyGraph(f"no node survives pruning at min_weight={min_weight}")

    owner = graph.graph.get("owner")
    pruned = ordered_graph(nodes, edges, owner=owner)
    logger.info(
        "Pruned at min_weight=%d: %d nodes, %d edges",
        min_weight, pruned.number_of_nodes(), pruned.number_of_edges(),
    )
    return pruned
