"""CSV audit export and import of CPI matrices."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from email_communities.errors import ConfigInvalid, UnreadablePath
from email_communities.features.cpi import CPI_FEATURES, FeatureMatrix, raw_matrix
from email_communities.schema import CPIVector


def _frame(nodes: list[str] | tuple[str, ...], values: np.ndarray, columns) -> pd.DataFrame:
    frame = pd.DataFrame(values, columns=list(columns))
    frame.insert(0, "address", list(nodes))
    return frame


def write_raw_features(raw: dict[str, CPIVector], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    _frame(list(raw), raw_matrix(raw), CPI_FEATURES).to_csv(path, index=False, lineterminator="\n")


def write_feature_matrix(features: FeatureMatrix, path: Path) -> None:
    """Header row = ``address`` + feature names; one row per node in order."""
    path.parent.mkdir(parents=True, exist_ok=True)
    _frame(features.nodes, features.values, features.columns).to_csv(
        path, index=False, lineterminator="\n",
    )


def read_feature_matrix(path: Path) -> FeatureMatrix:
    """Load a normalized matrix; every entry must lie in [0, 1]."""
    try:
        frame = pd.read_csv(path, dtype={"address": str}, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise UnreadablePath(f"{path}: {e}") from e

    if frame.columns.empty or frame.columns[0] != "address":
        raise ConfigInvalid(f"{path}: first column must be 'address'")
    columns = tuple(frame.columns[1:])
    try:
        values = frame[list(columns)].to_numpy(dtype=float)
    except ValueError as e:
        raise ConfigInvalid(f"{path}: non-numeric feature value ({e})") from e
    if values.size and (np.isnan(values).any() or values.min() < 0.0 or values.max() > 1.0):
        raise ConfigInvalid(f"{path}: feature values must lie in [0, 1]")

    return FeatureMatrix(tuple(frame["address"]), values.reshape(len(frame), len(columns)), columns)
