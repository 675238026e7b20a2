"""
Sampling plans: exhaustive enumeration under per-arity caps, seeded sampling above.
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from config import Config


@dataclass(frozen=True)
class SamplingPlan:
    seed: int = Config.DEFAULT_SEED
    sample_count: int = Config.SAMPLE_COUNT
    wide_sample_count: int = Config.WIDE_SAMPLE_COUNT
    caps: Dict[int, int] = field(default_factory=lambda: dict(Config.EXHAUSTIVE_CAPS))
    threads: int = 1
    chunk_size: int = Config.CHUNK_SIZE
    witness_limit: int = Config.WITNESS_LIMIT

    @classmethod
    def from_config(cls, config: Optional[Config] = None, **overrides) -> 'SamplingPlan':
        config = config or Config()
        values = {
            'seed': config.seed,
            'sample_count': config.sample_count,
            'wide_sample_count': config.wide_sample_count,
            'caps': config.exhaustive_caps,
            'threads': config.threads,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def replace(self, **changes) -> 'SamplingPlan':
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})

    def cap(self, arity: int) -> int:
        return self.caps.get(arity, 0)

    def is_exhaustive(self, n: int, arity: int) -> bool:
        return n <= self.cap(arity)

    def mode(self, n: int, arity: int) -> str:
        return 'exhaustive' if self.is_exhaustive(n, arity) else 'sampled'

    def budget(self, arity: int) -> int:
        return self.sample_count if arity <= 3 else self.wide_sample_count

    def rng(self, arity: int, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.seed, arity, stream]))

    def tuples(self, n: int, arity: int, stream: int = 0) -> np.ndarray:
        """All n**arity tuples in lexicographic order, or a seeded sample of them."""
        if self.is_exhaustive(n, arity):
            flat = np.arange(n ** arity, dtype=np.int64)
            digits = np.unravel_index(flat, (n,) * arity)
            return np.stack(digits, axis=1).astype(np.int64)
        return self.rng(arity, stream).integers(0, n, size=(self.budget(arity), arity), dtype=np.int64)

    def partners(self, n: int, count: int, stream: int = 0) -> np.ndarray:
        """One seeded partner element per tuple, used by the linearity checks."""
        return self.rng(1, 1000 + stream).integers(0, n, size=count, dtype=np.int64)

    def points(self, n: int, count: int, stream: int = 0) -> np.ndarray:
        """Distinct seeded probe points, sorted."""
        count = min(count, n)
        return np.sort(self.rng(1, 2000 + stream).choice(n, size=count, replace=False)).astype(np.int64)
