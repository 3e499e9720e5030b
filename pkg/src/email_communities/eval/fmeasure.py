from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
from sklearn.metrics.cluster import pair_confusion_matrix

from email_communities.errors import ConfigInvalid, InsufficientReference, UnreadablePath
from email_communities.ingest.addresses import canonicalize
from email_communities.schema import Partition


def f_measure(partition: Partition, reference: dict[str, str]) -> float:
    """Pairwise F1 over node pairs covered by the reference.

    A pair is predicted-positive when co-clustered and actual-positive when
    co-labeled; F1 = 2PR / (P + R), and 0 when P + R = 0.

    Raises:
        InsufficientReference: fewer than two partition nodes are labeled.
    """
    covered = sorted(n for n in partition.assignment if n in reference)
    if len(covered) < 2:
        raise InsufficientReference(
            f"reference covers {len(covered)} partition node(s); need at least 2"
        )

    actual = np.array([reference[n] for n in covered])
    predicted = np.array([partition.assignment[n] for n in covered])
    pairs = pair_confusion_matrix(actual, predicted)
    true_pos = pairs[1][1]
    if true_pos == 0:
        return 0.0
    precision = true_pos / (true_pos + pairs[0][1])
    recall = true_pos / (true_pos + pairs[1][0])
    return float(2 * precision * recall / (precision + recall))


def load_reference(path: Path) -> dict[str, str]:
    """Read a two-column CSV (address,label) with a header row."""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise UnreadablePath(f"{path}: {e}") from e
    if list(frame.columns[:2]) != ["address", "label"]:
        raise ConfigInvalid(f"{path}: header must be 'address,label'")

    reference: dict[str, str] = {}
    for address, label in frame[["address", "label"]].itertuples(index=False):
        canonical = canonicalize(address)
        if canonical is not None and label.strip():
            reference[canonical] = label.strip()
    if not reference:
        raise InsufficientReference(f"{path}: no usable (address, label) rows")
    return reference
