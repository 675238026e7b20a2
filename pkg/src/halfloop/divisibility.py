"""
m-divisibility: whether x ↦ x^m is a bijection, with its inverse when it is.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from loops.base import Loop
from utils.errors import UsageError

logger = logging.getLogger(__name__)


@dataclass
class RootTable:
    m: int
    forward: np.ndarray
    inverse: np.ndarray

    def __bool__(self) -> bool:
        return True

    def root(self, x) -> np.ndarray:
        """x^{1/m}"""
        return self.inverse[np.asarray(x, dtype=np.int64)]

    def describe(self, loop: Loop) -> str:
        return f"x ↦ x^{self.m} is a bijection"


@dataclass
class DivisibilityFailure:
    m: int
    witness: int
    collision: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return False

    def describe(self, loop: Loop) -> str:
        text = f"{loop.describe(self.witness)} is not an m-th power for m = {self.m}"
        if self.collision:
            x, y = self.collision
            text += f"; {loop.describe(x)} and {loop.describe(y)} have the same {self.m}-th power"
        return text


def divisibility(loop: Loop, m: int) -> Union[RootTable, DivisibilityFailure]:
    """Power map x ↦ x^m over all elements, inverted when bijective."""
    if m < 2:
        raise UsageError(f"divisibility needs m >= 2, got {m}")
    cached = loop.cache.get(f"divisibility:{m}")
    if cached is not None:
        return cached

    forward = loop.pow(loop.elements(), m)
    hit = np.zeros(loop.order, dtype=bool)
    hit[forward] = True
    if hit.all():
        inverse = np.empty(loop.order, dtype=np.int64)
        inverse[forward] = np.arange(loop.order)
        result = RootTable(m, forward, inverse)
    else:
        witness = int(np.flatnonzero(~hit)[0])
        order = np.argsort(forward, kind='stable')
        same = np.flatnonzero(np.diff(forward[order]) == 0)
        collision = (int(order[same[0]]), int(order[same[0] + 1])) if len(same) else None
        result = DivisibilityFailure(m, witness, collision)

    logger.debug(f"{loop.name}: {result.describe(loop)}")
    loop.cache[f"divisibility:{m}"] = result
    return result
