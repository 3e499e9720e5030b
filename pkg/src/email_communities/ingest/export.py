"""JSONL export of parsed records and the diagnostics file."""
from __future__ import annotations

import json
from pathlib import Path

from pydantic import ValidationError

from email_communities.errors import MissingArtifact, UnreadablePath
from email_communities.schema import EmailRecord, IngestDiagnostics


def write_records(records: list[EmailRecord], path: Path) -> int:
    """Write one record per line, in the given order. Returns the count."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(record.model_dump_json() + "\n")
    return len(records)


def load_records(path: Path) -> list[EmailRecord]:
    """Read a JSONL file written by :func:`write_records`.

    Raises:
        UnreadablePath: the file cannot be opened.
        MissingArtifact: a line is not a valid record.
    """
    records: list[EmailRecord] = []
    try:
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    records.append(EmailRecord.model_validate_json(line))
                except ValidationError as e:
                    first = e.errors()[0]
                    where = ".".join(str(part) for part in first["loc"]) or "record"
                    raise MissingArtifact(
                        f"{path}:{lineno}: not a valid record ({where}: {first['msg']})"
                    ) from None
    except (OSError, UnicodeDecodeError) as e:
        raise UnreadablePath(f"{path}: {e}") from e
    return records


def write_diagnostics(diagnostics: IngestDiagnostics, path: Path) -> None:
    """Write diagnostics with keys parsed, skipped, reasons, duplicates."""
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = diagnostics.model_dump(by_alias=True)
    payload["reasons"] = dict(sorted(payload["reasons"].items()))
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
