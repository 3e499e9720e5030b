"""Error types raised by the pipeline.

Each error carries the short ``code`` printed by the CLI and the process
exit status it maps to. Per-message ingest problems are not errors; they
are reported as :class:`~email_communities.schema.SkipReason` values.
"""
from __future__ import annotations


class PipelineError(Exception):
    code: str = "PipelineError"
    exit_code: int = 1

    def one_line(self) -> str:
        message = " ".join(str(self).split())
        return f"error: {self.code}: {message}"


class ConfigInvalid(PipelineError, ValueError):
    code = "ConfigInvalid"
    exit_code = 2


class MissingArtifact(PipelineError):
    code = "MissingArtifact"
    exit_code = 3


class UnreadablePath(PipelineError):
    code = "UnreadablePath"
    exit_code = 4


class OwnerAbsent(PipelineError):
    code = "OwnerAbsent"
    exit_code = 5


class EmptyGraph(PipelineError):
    code = "EmptyGraph"
    exit_code = 6


class UnknownNode(PipelineError, KeyError):
    code = "UnknownNode"
    exit_code = 7

    def __str__(self) -> str:
        # KeyError.__str__ repr-quotes the message
        return str(self.args[0]) if self.args else ""


class KTooLarge(PipelineError, ValueError):
    code = "KTooLarge"
    exit_code = 8


class InconsistentPartition(PipelineError, ValueError):
    code = "InconsistentPartition"
    exit_code = 9


class InsufficientReference(PipelineError, ValueError):
    code = "InsufficientReference"
    exit_code = 10


class GraphFormatError(PipelineError):
    code = "GraphFormatError"
    exit_code = 11
