from __future__ import annotations

import re
from datetime import datetime, timezone
from enum import Enum
from typing import Annotated

from pydantic import AfterValidator, BaseModel, Field, field_validator, model_validator

_CANONICAL_RE = re.compile(r"^[^@\s<>]+@[^@\s<>]+$")


def is_canonical(value: str) -> bool:
    return bool(_CANONICAL_RE.match(value)) and value == value.lower()


def _check_canonical(value: str) -> str:
    if not is_canonical(value):
        raise ValueError(f"not a canonical address: {value!r}")
    return value


# lowercase local@domain, no display name, no angle brackets
CanonicalAddress = Annotated[str, AfterValidator(_check_canonical)]


def _dedupe(values: list[str]) -> list[str]:
    return list(dict.fromkeys(values))


# ---------------------------------------------------------------------------
# Ingestion models
# ---------------------------------------------------------------------------

class SkipReason(str, Enum):
    missing_sender = "MissingSender"
    no_recipients = "NoRecipients"
    unparsable_date = "UnparsableDate"
    unreadable_file = "UnreadableFile"
    malformed_row = "MalformedRow"
    duplicate = "Duplicate"


class EmailRecord(BaseModel):
    message_id: str
    sender: CanonicalAddress
    to: list[CanonicalAddress] = Field(default_factory=list)
    cc: list[CanonicalAddress] = Field(default_factory=list)
    bcc: list[CanonicalAddress] = Field(default_factory=list)
    timestamp: datetime

    model_config = {"frozen": True}

    @field_validator("to", "cc", "bcc")
    @classmethod
    def _within_list_dedup(cls, value: list[str]) -> list[str]:
        return _dedupe(value)

    @field_validator("timestamp")
    @classmethod
    def _utc_seconds(cls, value: datetime) -> datetime:
        if value.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")
        return value.astimezone(timezone.utc).replace(microsecond=0)

    @model_validator(mode="after")
    def _has_recipients(self) -> EmailRecord:
        if not (self.to or self.cc or self.bcc):
            raise ValueError("message has no recipients")
        return self

    @property
    def recipients(self) -> list[str]:
        """Distinct addresses across to, cc and bcc, in first-seen order."""
        return _dedupe(self.to + self.cc + self.bcc)


class IngestDiagnostics(BaseModel):
    parsed_count: int = Field(default=0, ge=0, serialization_alias="parsed")
    skipped_count: int = Field(default=0, ge=0, serialization_alias="skipped")
    skip_reasons: dict[str, int] = Field(default_factory=dict, serialization_alias="reasons")
    duplicate_count: int = Field(default=0, ge=0, serialization_alias="duplicates")

    @property
    def scanned_count(self) -> int:
        return self.parsed_count + self.skipped_count

    def skip(self, reason: SkipReason) -> None:
        self.skipped_count += 1
        self.skip_reasons[reason.value] = self.skip_reasons.get(reason.value, 0) + 1


# ---------------------------------------------------------------------------
# Graph models
# ---------------------------------------------------------------------------

class HopScope(str, Enum):
    owner_incident = "owner-incident"
    all_observed = "all-observed"


class OwnerSpec(BaseModel):
    addresses: frozenset[CanonicalAddress] = Field(min_length=1)

    @property
    def label(self) -> str:
        """Node label of the merged owner: the smallest alias."""
        return min(self.addresses)

    def resolve(self, address: str) -> str:
        return self.label if address in self.addresses else address


# ---------------------------------------------------------------------------
# Feature models
# ---------------------------------------------------------------------------

class CPIVector(BaseModel):
    sent_count: int = Field(ge=0)
    recv_count: int = Field(ge=0)
    cc_count: int = Field(ge=0)
    avg_recipients_sent: float = Field(ge=0.0)
    active_days: int = Field(ge=0)
    reciprocity: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _no_sends_no_average(self) -> CPIVector:
        if self.sent_count == 0 and self.avg_recipients_sent != 0:
            raise ValueError("avg_recipients_sent must be 0 when sent_count is 0")
        return self

    def as_row(self) -> list[float]:
        return [float(v) for v in self.model_dump().values()]


# ---------------------------------------------------------------------------
# Clustering models
# ---------------------------------------------------------------------------

class IterationTrace(BaseModel):
    iteration: int
    objective_before_update: float
    objective_after_update: float
    reassigned: int  # nodes whose cluster changed in the following assignment


class Partition(BaseModel):
    assignment: dict[str, int]
    medoids: list[str]
    objective: float
    iterations_run: int = 0
    converged: bool = False
    trace: list[IterationTrace] = Field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.medoids)

    def members(self, cluster: int) -> list[str]:
        return sorted(node for node, c in self.assignment.items() if c == cluster)

    def clusters(self) -> list[list[str]]:
        return [self.members(i) for i in range(self.k)]


class NodeAssignment(BaseModel):
    address: str
    cluster: int
    csm_to_medoid: float


class ClusterSummary(BaseModel):
    cluster: int
    medoid: str
    size: int


class PartitionReport(BaseModel):
    """On-disk form of a Partition plus the run settings that produced it."""

    k: int
    alpha: float
    seed: int
    objective: float
    iterations_run: int
    converged: bool
    nodes: list[NodeAssignment]
    clusters: list[ClusterSummary]
    trace: list[IterationTrace] = Field(default_factory=list)

    def to_partition(self) -> Partition:
        return Partition(
            assignment={n.address: n.cluster for n in self.nodes},
            medoids=[c.medoid for c in sorted(self.clusters, key=lambda c: c.cluster)],
            objective=self.objective,
            iterations_run=self.iterations_run,
            converged=self.converged,
            trace=self.trace,
        )


# ---------------------------------------------------------------------------
# Evaluation result models
# ---------------------------------------------------------------------------

class NetStatsRow(BaseModel):
    community_index: int
    clustering_coefficient: float = Field(ge=0.0, le=1.0, alias="ClusCoefficient")
    centralization: float = Field(ge=0.0, alias="Centralization")
    avg_neighbors: float = Field(ge=0.0, alias="AvgNeighbors")
    nodes: int = Field(ge=1, alias="Nodes")
    network_density: float = Field(ge=0.0, le=1.0, alias="NetworkDensity")

    model_config = {"populate_by_name": True}


class QualityReport(BaseModel):
    k: int = Field(ge=1)
    density: float = Field(ge=0.0, le=1.0)
    entropy: float = Field(ge=0.0)
    f_measure: float | None = Field(default=None, ge=0.0, le=1.0)
    per_community_stats: list[NetStatsRow] = Field(default_factory=list)
    whole_graph_stats: NetStatsRow | None = None


class SweepRow(BaseModel):
    k: int
    density: float
    entropy: float
    objective: float
    iterations: int
    converged: bool
