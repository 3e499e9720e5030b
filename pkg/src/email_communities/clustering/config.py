"""Configuration dataclasses for collaborative-similarity clustering."""
from __future__ import annotations

from dataclasses import dataclass, field

from email_communities.errors import ConfigInvalid


@dataclass(frozen=True)
class SimilarityParams:
    """Blend weight: alpha on structure, 1 - alpha on semantics."""

    alpha: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigInvalid(f"alpha must lie in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class ClusteringConfig:
    """k-medoids run configuration."""

    k: int
    max_iters: int = 100
    seed: int = 0
    params: SimilarityParams = field(default_factory=SimilarityParams)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigInvalid(f"k must be >= 1, got {self.k}")
        if self.max_iters < 1:
            raise ConfigInvalid(f"max_iters must be >= 1, got {self.max_iters}")
        if not -(2**63) <= self.seed < 2**63:
            raise ConfigInvalid(f"seed must be a signed 64-bit integer, got {self.seed}")

    def with_k(self, k: int) -> ClusteringConfig:
        return ClusteringConfig(k=k, max_iters=self.max_iters, seed=self.seed, params=self.params)
