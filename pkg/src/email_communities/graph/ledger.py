"""Directed (sender, recipient) interaction counts."""
from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field

from email_communities.schema import EmailRecord


@dataclass
class InteractionLedger:
    """Count of emails per directed (sender, recipient) pair.

    Self-pairs never enter the ledger and every stored count is >= 1.
    """

    counts: Counter[tuple[str, str]] = field(default_factory=Counter)

    def add(self, sender: str, recipient: str, count: int = 1) -> None:
        if sender != recipient and count > 0:
            self.counts[(sender, recipient)] += count

    def merge(self, other: InteractionLedger) -> InteractionLedger:
        """Combine two partial ledgers (counting is a commutative fold)."""
        merged = InteractionLedger(Counter(self.counts))
        merged.counts.update(other.counts)
        return merged

    def transposed(self) -> InteractionLedger:
        return InteractionLedger(Counter({(r, s): c for (s, r), c in self.counts.items()}))

    def total(self) -> int:
        return sum(self.counts.values())

    def addresses(self) -> set[str]:
        return {a for pair in self.counts for a in pair}

    def __len__(self) -> int:
        return len(self.counts)


def build_ledger(records: Iterable[EmailRecord]) -> InteractionLedger:
    """One increment per (sender, r) for every distinct recipient r != sender.

    Co-recipients are never linked to each other.
    """
    ledger = InteractionLedger()
    for record in records:
        for recipient in record.recipients:
            ledger.add(record.sender, recipient)
    return ledger
