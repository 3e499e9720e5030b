from __future__ import annotations

import numpy as np
from scipy.stats import entropy as shannon_entropy

from email_communities.errors import ConfigInvalid
from email_communities.features.cpi import FeatureMatrix
from email_communities.schema import Partition

DEFAULT_BINS = 10


def bin_features(values: np.ndarray, bins: int) -> np.ndarray:
    """Equal-width bin index over [0, 1]; 1.0 falls in the last bin."""
    return np.minimum(np.floor(values * bins), bins - 1).astype(int)


def _bin_entropy(binned: np.ndarray, bins: int) -> float:
    # + 0.0 turns -0.0 into 0.0 for pure clusters
    return float(shannon_entropy(np.bincount(binned, minlength=bins), base=2)) + 0.0


def entropy(features: FeatureMatrix, partition: Partition, bins: int = DEFAULT_BINS) -> float:
    """Size-weighted mean per-feature bin entropy within clusters, in bits.

    result = (1/m) * sum_f sum_C (|C|/|V|) * H(f, C)
    """
    if bins < 2:
        raise ConfigInvalid(f"bins must be >= 2, got {bins}")

    nodes = sorted(partition.assignment)
    values = features.reindex(nodes).values
    labels = np.array([partition.assignment[n] for n in nodes], dtype=int)
    binned = bin_features(values, bins)
    n, m = binned.shape
    if n == 0 or m == 0:
        return 0.0

    total = 0.0
    for c in np.unique(labels):
        members = binned[labels == c]
        weight = members.shape[0] / n
        for f in range(m):
            total += weight * _bin_entropy(members[:, f], bins)
    return total / m
