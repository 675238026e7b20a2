import os
import logging
from typing import Dict, Optional

from dotenv import load_dotenv

# Load environment variables from a .env file when present
load_dotenv()


class Config:
    # Default seed for every sampled check
    DEFAULT_SEED = 0x5EED

    # Sample counts: arity <= 3, arity >= 4, and the identity batteries of verify-paper
    SAMPLE_COUNT = 10**6
    WIDE_SAMPLE_COUNT = 10**5
    SUITE_SAMPLE_COUNT = 10**5

    # A check of arity k runs exhaustively when n ** k tuples fit, i.e. n <= cap[k]
    EXHAUSTIVE_CAPS: Dict[int, int] = {
        1: 1 << 22,
        2: 1024,
        3: 81,
        4: 27,
        5: 15
    }

    # Cayley tables above this order are never written
    CAYLEY_EXPORT_CAP = 4096

    # Size gates for the dense algorithms
    GROUP_ASSOC_EXHAUSTIVE_CAP = 512
    CENTER_FULL_SCAN_CAP = 512
    CENTER_PREFILTER_PAIRS = 4096
    NUCLEUS_CAYLEY_CAP = 1024
    BRACKET_SCAN_CAP = 512
    INNER_GENERATOR_CAP = 1024
    QUOTIENT_FULL_CHECK_CAP = 4096

    # Pseudo-automorphism checks
    COMPANION_EXHAUSTIVE_CAP = 1024
    COMPANION_SAMPLES = 10**5

    # Inner mapping group
    CLOSURE_BUDGET = 300_000
    MATERIALIZED_POINT_BUDGET = 64 * 1024 * 1024
    PROBE_POINTS = 64
    INNER_FULL_PAIR_SAMPLES = 10**4

    # Bracket-form certification on random full elements
    FORMS_RANDOM_SAMPLES = 10**6

    # Half loop: left Bol identity runs exhaustively up to this order
    HALF_BOL_EXHAUSTIVE_CAP = 81

    # Reports
    WITNESS_LIMIT = 10
    REPORT_LIST_LIMIT = 256

    # Work partitioning
    CHUNK_SIZE = 1 << 18

    LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

    def __init__(self):
        self.threads = self._int_env('LOOPFORGE_THREADS', min(4, os.cpu_count() or 1))
        self.seed = self._int_env('LOOPFORGE_SEED', self.DEFAULT_SEED)
        self.sample_count = self._int_env('LOOPFORGE_SAMPLES', self.SAMPLE_COUNT)
        self.wide_sample_count = self._int_env('LOOPFORGE_WIDE_SAMPLES', self.WIDE_SAMPLE_COUNT)
        self.cayley_export_cap = self._int_env('LOOPFORGE_CAYLEY_CAP', self.CAYLEY_EXPORT_CAP)
        self.log_level = os.getenv('LOOPFORGE_LOG_LEVEL', 'INFO').upper()
        self.log_file: Optional[str] = os.getenv('LOOPFORGE_LOG_FILE') or None

        # Validate configuration
        self._validate_config()

    @staticmethod
    def _int_env(name: str, default: int) -> int:
        raw = os.getenv(name)
        if raw is None or not raw.strip():
            return default
        try:
            return int(raw.strip(), 0)
        except ValueError:
            raise ValueError(f"{name} must be an integer, got {raw!r}")

    def _validate_config(self):
        """Validate configuration settings"""
        if self.threads < 1:
            raise ValueError("LOOPFORGE_THREADS must be at least 1")

        if self.seed < 0:
            raise ValueError("LOOPFORGE_SEED must be non-negative")

        if self.sample_count < 1 or self.wide_sample_count < 1:
            raise ValueError("Sample counts must be positive")

        if self.cayley_export_cap < 1:
            raise ValueError("LOOPFORGE_CAYLEY_CAP must be positive")

        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ValueError(f"Unknown log level '{self.log_level}'")

        for arity, cap in self.EXHAUSTIVE_CAPS.items():
            if arity < 1 or cap < 0:
                raise ValueError(f"Invalid exhaustive cap {cap} for arity {arity}")

    @property
    def exhaustive_caps(self) -> Dict[int, int]:
        """Copy of the per-arity exhaustive caps"""
        return dict(self.EXHAUSTIVE_CAPS)
