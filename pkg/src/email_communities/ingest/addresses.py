"""Address extraction and canonicalization."""
from __future__ import annotations

from email.utils import getaddresses

from email_communities.schema import is_canonical


def canonicalize(raw: str) -> str | None:
    """Return the canonical ``local@domain`` form of one address, or None.

    Strips whitespace and angle brackets and lowercases. Anything that does
    not end up with exactly one ``@`` and no inner whitespace is rejected.
    """
    value = raw.strip().strip("<>").strip().lower()
    return value if is_canonical(value) else None


def extract_addresses(header_value: str) -> list[str]:
    """Extract canonical addresses from a comma-separated header value.

    Accepts both ``Name <a@b>`` and bare ``a@b`` entries. Entries that do not
    canonicalize are dropped; duplicates collapse to the first occurrence.
    """
    found: list[str] = []
    for _name, addr in getaddresses([header_value]):
        canonical = canonicalize(addr)
        if canonical is not None and canonical not in found:
            found.append(canonical)
    return found


def split_address_list(value: str, sep: str = ";") -> list[str]:
    """Canonicalize a ``sep``-delimited list as found in CSV interaction logs."""
    found: list[str] = []
    for part in value.split(sep):
        if not part.strip():
            continue
        for canonical in extract_addresses(part):
            if canonical not in found:
                found.append(canonical)
    return found
