"""
Identity evaluation over exhaustive or sampled tuples.

An identity is a vectorized predicate over tuple columns. Evaluation runs in
fixed-size chunks through the worker pool and merges results in tuple order,
so witnesses are always the lowest failing tuple indices.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from loops.base import Loop
from suites.plan import SamplingPlan
from utils.errors import InverseError
from utils.parallel import map_chunks
from utils.suite_report import Status, SuiteItem

logger = logging.getLogger(__name__)

Columns = List[np.ndarray]
Predicate = Callable[[Loop, Columns], np.ndarray]


@dataclass(frozen=True)
class Identity:
    name: str
    arity: int
    check: Predicate

    def holds_at(self, loop: Loop, values: Sequence[int]) -> bool:
        """Re-evaluate the identity on one tuple."""
        cols = [np.asarray([int(v)], dtype=np.int64) for v in values]
        return bool(np.asarray(self.check(loop, cols))[0])


def _columns(block: np.ndarray) -> Columns:
    return [block[:, i] for i in range(block.shape[1])]


def evaluate(loop: Loop, identity: Identity, plan: SamplingPlan,
             tuples: Optional[np.ndarray] = None, mode: Optional[str] = None,
             gate: Optional[Predicate] = None, stream: int = 0,
             name: Optional[str] = None) -> SuiteItem:
    """Check an identity on the plan's tuples (or on the given ones).

    With a gate, only tuples where the gate holds are checked; when no tuple
    opens the gate the item is reported as vacuous.
    """
    label = name or identity.name
    if tuples is None:
        tuples = plan.tuples(loop.order, identity.arity, stream)
        mode = plan.mode(loop.order, identity.arity)
    mode = mode or 'given'
    total = len(tuples)

    def run(lo: int, hi: int):
        block = tuples[lo:hi]
        if gate is not None:
            open_rows = np.flatnonzero(np.asarray(gate(loop, _columns(block)), dtype=bool))
            block = block[open_rows]
        else:
            open_rows = np.arange(hi - lo)
        if len(block) == 0:
            return 0, np.empty(0, dtype=np.int64)
        ok = np.asarray(identity.check(loop, _columns(block)), dtype=bool)
        return len(block), open_rows[~ok] + lo

    try:
        parts = map_chunks(run, total, plan.threads, plan.chunk_size)
    except InverseError as e:
        logger.info(f"⚠️ {label}: {e}")
        return SuiteItem.vacuous(label, f"requires two-sided inverses: {e}")

    checked = sum(count for count, _ in parts)
    failing = np.concatenate([bad for _, bad in parts]) if parts else np.empty(0, dtype=np.int64)

    if gate is not None and checked == 0:
        return SuiteItem(label, Status.VACUOUS, checked=0, mode=mode, note='no tuple opened the gate')

    witnesses = [tuple(int(v) for v in tuples[i]) for i in failing[:plan.witness_limit]]
    status = Status.FAIL if len(failing) else Status.PASS
    return SuiteItem(label, status, checked=checked, mode=mode,
                     failures=int(len(failing)), witnesses=witnesses)


def evaluate_all(loop: Loop, identities: Sequence[Identity], plan: SamplingPlan,
                 tuples: Optional[np.ndarray] = None, mode: Optional[str] = None,
                 gate: Optional[Predicate] = None, stream: int = 0) -> List[SuiteItem]:
    """Evaluate several identities on one shared tuple set."""
    if tuples is None and identities:
        arity = max(identity.arity for identity in identities)
        tuples = plan.tuples(loop.order, arity, stream)
        mode = plan.mode(loop.order, arity)
    return [evaluate(loop, identity, plan, tuples=tuples, mode=mode, gate=gate)
            for identity in identities]


def exhaustive_tuples(points: np.ndarray, arity: int) -> np.ndarray:
    """All tuples over a point set, in lexicographic order of positions."""
    k = len(points)
    flat = np.arange(k ** arity, dtype=np.int64)
    digits = np.unravel_index(flat, (k,) * arity)
    return np.stack([points[d] for d in digits], axis=1).astype(np.int64)
