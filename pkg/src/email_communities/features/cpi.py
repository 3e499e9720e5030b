"""Communication-pattern-of-interest (CPI) features per node."""
from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from datetime import date
from functools import cached_property

import numpy as np

from email_communities.errors import UnknownNode
from email_communities.schema import CPIVector, EmailRecord, OwnerSpec

CPI_FEATURES: tuple[str, ...] = tuple(CPIVector.model_fields)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Normalized CPI rows aligned with the graph's node order."""

    nodes: tuple[str, ...]
    values: np.ndarray  # shape (len(nodes), len(columns)), entries in [0, 1]
    columns: tuple[str, ...] = CPI_FEATURES

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.nodes), len(self.columns)):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{len(self.nodes)} nodes x {len(self.columns)} columns"
            )

    def index(self, node: str) -> int:
        try:
            return self._positions[node]
        except KeyError:
            raise UnknownNode(f"no feature row for {node}") from None

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    def row(self, node: str) -> np.ndarray:
        return self.values[self.index(node)]

    def reindex(self, nodes: Sequence[str]) -> FeatureMatrix:
        """Rows reordered (and restricted) to ``nodes``."""
        positions = self._positions
        missing = [n for n in nodes if n not in positions]
        if missing:
            raise UnknownNode(f"no feature row for {', '.join(missing[:5])}")
        order = [positions[n] for n in nodes]
        return FeatureMatrix(tuple(nodes), self.values[order], self.columns)


def extract_cpi(
    records: Iterable[EmailRecord],
    owner: OwnerSpec,
    nodes: Sequence[str],
) -> dict[str, CPIVector]:
    """Compute the raw CPI vector of every requested node.

    Owner aliases count as the merged owner node. Reciprocity is measured
    against the owner: min(c(u->O), c(O->u)) / max(1, max(c(u->O), c(O->u))),
    and the owner's own reciprocity is 1.

    Raises:
        UnknownNode: a requested node never appears in the records.
    """
    label = owner.label
    sent: Counter[str] = Counter()
    received: Counter[str] = Counter()
    cc: Counter[str] = Counter()
    recipients_sent: Counter[str] = Counter()
    days: dict[str, set[date]] = defaultdict(set)
    to_owner: Counter[str] = Counter()
    from_owner: Counter[str] = Counter()

    for record in records:
        sender = owner.resolve(record.sender)
        day = record.timestamp.date()
        recipients = list(dict.fromkeys(owner.resolve(r) for r in record.recipients))
        distinct_others = [r for r in recipients if r != sender]

        sent[sender] += 1
        recipients_sent[sender] += len(distinct_others)
        days[sender].add(day)
        for r in recipients:
            received[r] += 1
            days[r].add(day)
        for r in dict.fromkeys(owner.resolve(a) for a in record.cc):
            cc[r] += 1

        for r in distinct_others:
            if r == label:
                to_owner[sender] += 1
            elif sender == label:
                from_owner[r] += 1

    vectors: dict[str, CPIVector] = {}
    for node in nodes:
        if node not in days:
            raise UnknownNode(f"{node} does not appear in any record")
        n_sent = sent[node]
        if node == label:
            reciprocity = 1.0
        else:
            a, b = to_owner[node], from_owner[node]
            reciprocity = min(a, b) / max(1, max(a, b))
        vectors[node] = CPIVector(
            sent_count=n_sent,
            recv_count=received[node],
            cc_count=cc[node],
            avg_recipients_sent=recipients_sent[node] / n_sent if n_sent else 0.0,
            active_days=len(days[node]),
            reciprocity=reciprocity,
        )
    return vectors


def raw_matrix(raw: dict[str, CPIVector]) -> np.ndarray:
    return np.array([v.as_row() for v in raw.values()], dtype=float).reshape(len(raw), len(CPI_FEATURES))


def normalize(raw: dict[str, CPIVector]) -> FeatureMatrix:
    """Min-max scale each feature to [0, 1]; constant features become 0.

    Row order follows the insertion order of ``raw``.
    """
    if not raw:
        raise ValueError("normalize needs at least one node")
    values = raw_matrix(raw)
    low = values.min(axis=0)
    span = values.max(axis=0) - low
    constant = span == 0
    scaled = (values - low) / np.where(constant, 1.0, span)
    scaled[:, constant] = 0.0
    return FeatureMatrix(tuple(raw), np.clip(scaled, 0.0, 1.0))
