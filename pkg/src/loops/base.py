"""
Finite loops over the index set [0, n) with 0 as the neutral element.

Every element operation is vectorized: arguments may be ints or integer
arrays and broadcast against each other.
"""

import logging
from abc import ABC, abstractmethod
from typing import Dict, Optional

import numpy as np

from config import Config
from utils.errors import ElementError, InverseError, LoopFormatError, SizeGateError

logger = logging.getLogger(__name__)


def as_index(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


class Loop(ABC):
    """Abstract finite loop."""

    def __init__(self, order: int, name: str = 'loop'):
        self.order = int(order)
        self.name = name
        self.power_associative = False
        # Per-loop memo for certifications and derived structures
        self.cache: Dict[str, object] = {}

    @property
    def kind(self) -> str:
        return 'loop'

    @abstractmethod
    def mul(self, x, y) -> np.ndarray:
        """x·y"""

    @abstractmethod
    def ldiv(self, x, y) -> np.ndarray:
        """x\\y, the unique z with x·z = y"""

    @abstractmethod
    def rdiv(self, x, y) -> np.ndarray:
        """x/y, the unique z with z·y = x"""

    def inv(self, x) -> np.ndarray:
        x = as_index(x)
        zero = np.zeros_like(x)
        right = self.ldiv(x, zero)
        left = self.rdiv(zero, x)
        mismatch = np.flatnonzero(np.ravel(right != left))
        if len(mismatch):
            bad = int(np.ravel(x)[mismatch[0]])
            raise InverseError(f"no two-sided inverse for element {self.describe(bad)}")
        return right

    def pow(self, x, k: int) -> np.ndarray:
        """x^k; left-bracketed x(x(...x)) until the loop is known power-associative."""
        x = as_index(x)
        k = int(k)
        if k < 0:
            return self.pow(self.inv(x), -k)
        result = np.zeros_like(x)
        if k == 0:
            return result
        if not self.power_associative:
            result = x.copy()
            for _ in range(k - 1):
                result = self.mul(x, result)
            return result
        base = x.copy()
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def check_element(self, x) -> int:
        try:
            value = int(x)
        except (TypeError, ValueError):
            raise ElementError(f"element {x!r} is not an integer index")
        if not 0 <= value < self.order:
            raise ElementError(f"element {value} outside [0,{self.order}) in {self.name}")
        return value

    # Scalar convenience wrappers
    def multiply(self, x: int, y: int) -> int:
        return int(self.mul(self.check_element(x), self.check_element(y)))

    def left_divide(self, x: int, y: int) -> int:
        return int(self.ldiv(self.check_element(x), self.check_element(y)))

    def right_divide(self, x: int, y: int) -> int:
        return int(self.rdiv(self.check_element(x), self.check_element(y)))

    def inverse(self, x: int) -> int:
        return int(self.inv(self.check_element(x)))

    def power(self, x: int, k: int) -> int:
        return int(self.pow(self.check_element(x), k))

    def describe(self, x: int) -> str:
        return str(int(x))

    def mark_power_associative(self):
        if not self.power_associative:
            logger.debug(f"{self.name}: power-associative, repeated squaring enabled")
        self.power_associative = True

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, order={self.order})"


class CayleyLoop(Loop):
    """A loop given by its full multiplication table."""

    def __init__(self, table, name: str = 'cayley', validate: bool = True):
        table = np.asarray(table)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise LoopFormatError(f"table must be a nonempty square array, got shape {table.shape}")
        n = table.shape[0]
        super().__init__(n, name)
        dtype = np.int16 if n <= np.iinfo(np.int16).max else np.int32
        if validate:
            validate_table(table)
        self.table = table.astype(dtype)
        self.ldiv_table = np.empty_like(self.table)
        self.rdiv_table = np.empty_like(self.table)
        rows = np.repeat(np.arange(n), n).reshape(n, n)
        cols = np.tile(np.arange(n), n).reshape(n, n)
        self.ldiv_table[rows, self.table] = cols
        self.rdiv_table[self.table, cols] = rows

    @property
    def kind(self) -> str:
        return 'cayley'

    def mul(self, x, y) -> np.ndarray:
        return self.table[as_index(x), as_index(y)].astype(np.int64)

    def ldiv(self, x, y) -> np.ndarray:
        return self.ldiv_table[as_index(x), as_index(y)].astype(np.int64)

    def rdiv(self, x, y) -> np.ndarray:
        return self.rdiv_table[as_index(x), as_index(y)].astype(np.int64)

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))


def validate_table(table: np.ndarray):
    """Reject tables that are not Latin squares or whose element 0 is not neutral."""
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        bad = np.argwhere((table < 0) | (table >= n))[0]
        raise LoopFormatError(f"entry {int(table[bad[0], bad[1]])} at row {bad[0]}, column {bad[1]} "
                              f"outside [0,{n})", row=int(bad[0]), column=int(bad[1]))

    target = np.arange(n)
    row_ok = (np.sort(table, axis=1) == target).all(axis=1)
    if not row_ok.all():
        row = int(np.flatnonzero(~row_ok)[0])
        counts = np.bincount(table[row], minlength=n)
        duplicate = int(np.flatnonzero(counts > 1)[0])
        raise LoopFormatError(f"row {row} is not a permutation: {duplicate} appears {counts[duplicate]} times",
                              row=row)

    col_ok = (np.sort(table, axis=0) == target[:, None]).all(axis=0)
    if not col_ok.all():
        column = int(np.flatnonzero(~col_ok)[0])
        counts = np.bincount(table[:, column], minlength=n)
        duplicate = int(np.flatnonzero(counts > 1)[0])
        raise LoopFormatError(f"column {column} is not a permutation: {duplicate} appears "
                              f"{counts[duplicate]} times", column=column)

    if not (np.array_equal(table[0], target) and np.array_equal(table[:, 0], target)):
        raise LoopFormatError("element 0 is not neutral", row=0)


def as_cayley(loop: Loop, cap: Optional[int] = None) -> CayleyLoop:
    """Materialize any loop as a Cayley table, refusing above the cap."""
    if isinstance(loop, CayleyLoop):
        return loop
    cap = cap or Config.CAYLEY_EXPORT_CAP
    if loop.order > cap:
        raise SizeGateError(f"{loop.name} has order {loop.order}, above the Cayley cap {cap}")
    cached = loop.cache.get('cayley')
    if cached is None:
        elements = loop.elements()
        table = loop.mul(elements[:, None], elements[None, :])
        cached = CayleyLoop(table, name=loop.name, validate=False)
        cached.power_associative = loop.power_associative
        loop.cache['cayley'] = cached
        logger.info(f"📊 Materialized {loop.name} as a {loop.order}x{loop.order} table")
    return cached
