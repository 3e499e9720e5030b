"""Pipeline configuration: JSON file plus command-line overrides."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from email_communities.clustering.config import ClusteringConfig, SimilarityParams
from email_communities.errors import ConfigInvalid
from email_communities.ingest.addresses import extract_addresses
from email_communities.schema import HopScope, OwnerSpec


class PipelineConfig(BaseModel):
    corpus_path: Path | None = None
    owner_addresses: list[str] = Field(default_factory=list)
    hop_scope: HopScope = HopScope.all_observed
    min_weight: int = Field(default=1, ge=1)
    drop_isolated: bool = True
    alpha: float = Field(default=0.5, ge=0.0, le=1.0)
    k: int = Field(default=4, ge=1)
    k_sweep: tuple[int, int] | None = None
    bins: int = Field(default=10, ge=2)
    seed: int = Field(default=0, ge=-(2**63), lt=2**63)
    max_iters: int = Field(default=100, ge=1)
    reference_path: Path | None = None
    output_dir: Path = Path("runs")
    workers: int = Field(default=1, ge=1)

    model_config = {"extra": "forbid"}

    @field_validator("owner_addresses")
    @classmethod
    def _canonical_owners(cls, value: list[str]) -> list[str]:
        owners: list[str] = []
        for raw in value:
            parsed = extract_addresses(raw)
            if len(parsed) != 1:
                raise ValueError(f"owner address {raw!r} is not a single valid address")
            canonical = parsed[0]
            if canonical not in owners:
                owners.append(canonical)
        return owners

    @field_validator("k_sweep", mode="before")
    @classmethod
    def _parse_sweep(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_range(value)
        return value

    @model_validator(mode="after")
    def _sweep_order(self) -> PipelineConfig:
        if self.k_sweep is not None:
            lo, hi = self.k_sweep
            if lo < 1 or lo > hi:
                raise ValueError(f"k_sweep must satisfy 1 <= lo <= hi, got {lo}:{hi}")
        return self

    @property
    def owner(self) -> OwnerSpec:
        if not self.owner_addresses:
            raise ConfigInvalid("at least one owner address is required (--owner)")
        return OwnerSpec(addresses=frozenset(self.owner_addresses))

    @property
    def clustering(self) -> ClusteringConfig:
        return ClusteringConfig(
            k=self.k,
            max_iters=self.max_iters,
            seed=self.seed,
            params=SimilarityParams(alpha=self.alpha),
        )


def parse_range(value: str) -> tuple[int, int]:
    """Parse ``LO:HI`` into an inclusive integer range."""
    lo, sep, hi = value.partition(":")
    if not sep:
        raise ValueError(f"expected LO:HI, got {value!r}")
    return int(lo), int(hi)


def load_config(path: Path | None = None, overrides: dict[str, Any] | None = None) -> PipelineConfig:
    """File values first, then non-None overrides; validated as a whole.

    Raises:
        ConfigInvalid: unreadable file, malformed JSON or failed validation.
    """
    data: dict[str, Any] = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigInvalid(f"{path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigInvalid(f"{path}: top-level value must be an object")

    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value

    try:
        return PipelineConfig.model_validate(data)
    except ValidationError as e:
        errors = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigInvalid(errors) from e
