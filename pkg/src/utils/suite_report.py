"""
Suite reports: per-identity verdicts with witnesses and a gate trace.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

logger = logging.getLogger(__name__)


class Status(str, Enum):
    PASS = 'pass'
    FAIL = 'fail'
    VACUOUS = 'vacuous-gate'

    def __str__(self) -> str:
        return self.value


@dataclass
class SuiteItem:
    name: str
    status: Status
    checked: int = 0
    mode: str = 'exhaustive'
    failures: int = 0
    witnesses: List[Tuple[Any, ...]] = field(default_factory=list)
    note: str = ''

    @property
    def passed(self) -> bool:
        return self.status == Status.PASS

    @property
    def failed(self) -> bool:
        return self.status == Status.FAIL

    @classmethod
    def vacuous(cls, name: str, note: str) -> 'SuiteItem':
        return cls(name, Status.VACUOUS, checked=0, mode='gated', note=note)


@dataclass
class SuiteReport:
    suite: str
    items: List[SuiteItem] = field(default_factory=list)
    gate_trace: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    verdict: Optional[str] = None

    def add(self, item: SuiteItem) -> SuiteItem:
        self.items.append(item)
        if item.failed:
            logger.warning(f"❌ {self.suite}: {item.name} failed ({item.failures} of {item.checked})")
        return item

    def trace(self, message: str):
        self.gate_trace.append(message)
        logger.debug(f"{self.suite} gate: {message}")

    def merge(self, other: 'SuiteReport', prefix: str = ''):
        """Append the items and trace of another report, optionally prefixing item names."""
        for item in other.items:
            self.items.append(replace(item, name=f"{prefix}{item.name}") if prefix else item)
        self.gate_trace.extend(other.gate_trace)

    def item(self, name: str) -> SuiteItem:
        for item in self.items:
            if item.name == name:
                return item
        raise KeyError(f"no item {name!r} in suite {self.suite}")

    def has_item(self, name: str) -> bool:
        return any(item.name == name for item in self.items)

    @property
    def ok(self) -> bool:
        return not any(item.failed for item in self.items)

    @property
    def all_passed(self) -> bool:
        """True when every item passed outright, with no vacuous gate."""
        return bool(self.items) and all(item.passed for item in self.items)

    @property
    def status(self) -> Status:
        if not self.ok:
            return Status.FAIL
        if self.items and all(item.status == Status.VACUOUS for item in self.items):
            return Status.VACUOUS
        return Status.PASS

    @property
    def failed_items(self) -> List[SuiteItem]:
        return [item for item in self.items if item.failed]

    def first_witness(self) -> Optional[Tuple[str, Tuple[Any, ...]]]:
        for item in self.failed_items:
            if item.witnesses:
                return item.name, item.witnesses[0]
        return None

    def to_frame(self) -> pd.DataFrame:
        """Per-identity verdicts as a table"""
        rows = [{
            'suite': self.suite,
            'identity': item.name,
            'status': item.status.value,
            'checked': item.checked,
            'mode': item.mode,
            'failures': item.failures,
            'witnesses': '; '.join(str(w) for w in item.witnesses),
            'note': item.note
        } for item in self.items]
        return pd.DataFrame(rows, columns=['suite', 'identity', 'status', 'checked', 'mode',
                                           'failures', 'witnesses', 'note'])

    def summary(self) -> str:
        counts = {status: 0 for status in Status}
        for item in self.items:
            counts[item.status] += 1
        return (f"{self.suite}: {counts[Status.PASS]} pass, {counts[Status.FAIL]} fail, "
                f"{counts[Status.VACUOUS]} vacuous")
