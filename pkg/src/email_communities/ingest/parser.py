"""Header-only parsing of a single plain-text message."""
from __future__ import annotations

import hashlib
import re
from datetime import datetime, timezone
from email.message import Message
from email.parser import BytesHeaderParser
from email.policy import compat32
from email.utils import mktime_tz, parsedate_tz

from email_communities.ingest.addresses import extract_addresses
from email_communities.schema import EmailRecord, SkipReason

_FOLD_RE = re.compile(r"\r?\n[ \t]+")

# Headers only; the body is never read.
_PARSER = BytesHeaderParser(policy=compat32)


def _unfold(value: str) -> str:
    return _FOLD_RE.sub(" ", value).strip()


def _header(msg: Message, name: str) -> str:
    values = msg.get_all(name) or []
    return ", ".join(_unfold(str(v)) for v in values if str(v).strip())


def _first_header(msg: Message, name: str) -> str:
    value = msg.get(name)
    return _unfold(str(value)) if value is not None else ""


def parse_date(value: str) -> datetime | None:
    """Parse an RFC-2822-style date to UTC; None when malformed or zone-less."""
    if not value:
        return None
    try:
        parts = parsedate_tz(value)
        if parts is None or parts[9] is None:
            return None
        return datetime.fromtimestamp(mktime_tz(parts), tz=timezone.utc)
    except (ValueError, OverflowError, OSError, TypeError):
        return None


def synthesize_message_id(
    sender: str, timestamp: datetime, recipients: list[str],
) -> str:
    """Content hash standing in for a missing Message-ID."""
    key = "\n".join([sender, timestamp.isoformat(), *sorted(set(recipients))])
    return "<sha1:" + hashlib.sha1(key.encode("utf-8")).hexdigest() + ">"


def build_record(
    message_id: str,
    sender: str | None,
    to: list[str],
    cc: list[str],
    bcc: list[str],
    timestamp: datetime | None,
) -> EmailRecord | SkipReason:
    """Apply the skip rules shared by message files and CSV rows."""
    if not sender:
        return SkipReason.missing_sender
    if not (to or cc or bcc):
        return SkipReason.no_recipients
    if timestamp is None:
        return SkipReason.unparsable_date

    timestamp = timestamp.replace(microsecond=0)
    if not message_id:
        message_id = synthesize_message_id(sender, timestamp, to + cc + bcc)

    return EmailRecord(
        message_id=message_id,
        sender=sender,
        to=to,
        cc=cc,
        bcc=bcc,
        timestamp=timestamp,
    )


def parse_email(raw: bytes) -> EmailRecord | SkipReason:
    """Parse one message (headers, blank line, ignored body)."""
    msg = _PARSER.parsebytes(raw)

    senders = extract_addresses(_header(msg, "From"))
    return build_record(
        message_id=_first_header(msg, "Message-ID"),
        sender=senders[0] if senders else None,
        to=extract_addresses(_header(msg, "To")),
        cc=extract_addresses(_header(msg, "Cc")),
        bcc=extract_addresses(_header(msg, "Bcc")),
        timestamp=parse_date(_first_header(msg, "Date")),
    )
