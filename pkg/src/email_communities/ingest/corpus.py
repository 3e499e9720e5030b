"""Corpus scanning: a maildir-style directory tree or a CSV interaction log."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import pandas as pd

from email_communities.errors import UnreadablePath
from email_communities.ingest.addresses import split_address_list
from email_communities.ingest.parser import build_record, parse_email
from email_communities.schema import EmailRecord, IngestDiagnostics, SkipReason

logger = logging.getLogger(__name__)

CSV_COLUMNS: tuple[str, ...] = ("message_id", "sender", "to", "cc", "bcc", "timestamp")


def _parse_file(path: Path) -> EmailRecord | SkipReason:
    try:
        raw = path.read_bytes()
    except OSError as e:
        logger.debug("Cannot read %s: %s", path, e)
        return SkipReason.unreadable_file
    return parse_email(raw)


def _message_files(root: Path) -> list[Path]:
    """Regular files under root in sorted order, hidden entries excluded."""
    return sorted(
        p for p in root.rglob("*")
        if p.is_file() and not any(part.startswith(".") for part in p.relative_to(root).parts)
    )


def parse_iso_utc(value: str) -> datetime | None:
    """Parse an ISO-8601 timestamp with an explicit zone; None otherwise."""
    value = value.strip()
    if not value:
        return None
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(value)
    except ValueError:
        return None
    if parsed.tzinfo is None:
        return None
    return parsed.astimezone(timezone.utc)


def _parse_row(row: dict[str, str]) -> EmailRecord | SkipReason:
    senders = split_address_list(row["sender"])
    return build_record(
        message_id=row["message_id"].strip(),
        sender=senders[0] if senders else None,
        to=split_address_list(row["to"]),
        cc=split_address_list(row["cc"]),
        bcc=split_address_list(row["bcc"]),
        timestamp=parse_iso_utc(row["timestamp"]),
    )


def _read_csv(path: Path) -> tuple[list[EmailRecord | SkipReason], int]:
    """Parse every row; returns outcomes plus the number of malformed lines."""
    bad_lines: list[list[str]] = []

    def _on_bad_line(line: list[str]) -> None:
        bad_lines.append(line)

    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            engine="python",
            on_bad_lines=_on_bad_line,
        )
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise UnreadablePath(f"{path}: {e}") from e

    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise UnreadablePath(f"{path}: missing CSV columns {', '.join(missing)}")

    # short rows come back as NaN even with keep_default_na=False
    frame = frame[list(CSV_COLUMNS)].fillna("")
    outcomes = [_parse_row(row) for row in frame.to_dict("records")]
    return outcomes, len(bad_lines)


def dedupe(records: list[EmailRecord]) -> tuple[list[EmailRecord], int]:
    """Drop records whose message_id was already seen; first occurrence wins."""
    seen: set[str] = set()
    kept: list[EmailRecord] = []
    duplicates = 0
    for record in records:
        if record.message_id in seen:
            duplicates += 1
            continue
        seen.add(record.message_id)
        kept.append(record)
    return kept, duplicates


def sort_records(records: list[EmailRecord]) -> list[EmailRecord]:
    return sorted(records, key=lambda r: (r.timestamp, r.message_id))


def scan_corpus(
    root: str | Path,
    workers: int = 1,
) -> tuple[list[EmailRecord], IngestDiagnostics]:
    """Scan a directory of messages or a CSV log into sorted, deduplicated records.

    Args:
        root: Directory tree of plain-text messages, or a ``.csv`` file with
            columns message_id, sender, to, cc, bcc, timestamp.
        workers: Thread pool size for parsing message files. The output does
            not depend on it.

    Returns:
        (records, diagnostics). Records are ordered by (timestamp, message_id).

    Raises:
        UnreadablePath: root is missing, unreadable, or neither a directory
            nor a CSV file.
    """
    root = Path(root)
    diagnostics = IngestDiagnostics()

    if root.is_dir():
        try:
            files = _message_files(root)
        except OSError as e:
            raise UnreadablePath(f"{root}: {e}") from e
        logger.info("Scanning %d message files under %s", len(files), root)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_parse_file, files))
        else:
            outcomes = [_parse_file(p) for p in files]
        sources = [str(p) for p in files]
    elif root.is_file() and root.suffix.lower() == ".csv":
        outcomes, bad_lines = _read_csv(root)
        for _ in range(bad_lines):
            diagnostics.skip(SkipReason.malformed_row)
        sources = [f"{root}:row {i + 2}" for i in range(len(outcomes))]
    else:
        raise UnreadablePath(f"{root}: expected a directory or a .csv file")

    parsed: list[EmailRecord] = []
    for source, outcome in zip(sources, outcomes):
        if isinstance(outcome, SkipReason):
            logger.debug("Skipped %s: %s", source, outcome.value)
            diagnostics.skip(outcome)
        else:
            parsed.append(outcome)

    records, duplicates = dedupe(parsed)
    for _ in range(duplicates):
        diagnostics.skip(SkipReason.duplicate)
    diagnostics.duplicate_count = duplicates
    diagnostics.parsed_count = len(records)

    logger.info(
        "Ingested %d records (%d skipped, %d duplicates)",
        diagnostics.parsed_count, diagnostics.skipped_count, diagnostics.duplicate_count,
    )
    return sort_records(records), diagnostics
