"""
Latin-square verification: every left and right translation is a bijection.
"""

import logging
from typing import Optional

import numpy as np

from loops.base import CayleyLoop, Loop
from loops.triple import TripleLoop
from suites.plan import SamplingPlan
from utils.parallel import map_chunks
from utils.suite_report import Status, SuiteItem, SuiteReport

logger = logging.getLogger(__name__)


def _bad_lines(table: np.ndarray, axis: int) -> np.ndarray:
    n = table.shape[0]
    target = np.arange(n)
    if axis == 1:
        return np.flatnonzero(~(np.sort(table, axis=1) == target).all(axis=1))
    return np.flatnonzero(~(np.sort(table, axis=0) == target[:, None]).all(axis=0))


def _item(name: str, bad, checked: int, mode: str, limit: int, note: str = '') -> SuiteItem:
    bad = list(bad)
    return SuiteItem(name, Status.FAIL if bad else Status.PASS, checked=checked, mode=mode,
                     failures=len(bad), witnesses=bad[:limit], note=note)


def verify_latin(loop: Loop, plan: Optional[SamplingPlan] = None) -> SuiteReport:
    """Exhaustive on Cayley tables; sampled collisions plus a-component translations on triple loops."""
    plan = plan or SamplingPlan.from_config()
    limit = plan.witness_limit
    report = SuiteReport('latin', metadata={'loop': loop.name})
    n = loop.order
    el = loop.elements()

    if isinstance(loop, CayleyLoop):
        t = loop.table
        report.add(_item('rows', [(int(r),) for r in _bad_lines(t, 1)], n, 'exhaustive', limit))
        report.add(_item('columns', [(int(c),) for c in _bad_lines(t, 0)], n, 'exhaustive', limit))
    else:
        triples = plan.rng(3, 6000).integers(0, n, size=(plan.sample_count, 3), dtype=np.int64)

        def collisions(lo, hi):
            x, y, z = triples[lo:hi].T
            bad = (y != z) & ((loop.mul(x, y) == loop.mul(x, z)) | (loop.mul(y, x) == loop.mul(z, x)))
            return [tuple(int(v) for v in triples[lo + i]) for i in np.flatnonzero(bad)]

        found = [w for part in map_chunks(collisions, len(triples), plan.threads, plan.chunk_size) for w in part]
        report.add(_item('collisions', found, len(triples), 'sampled', limit))

        translators = loop.a_elements() if isinstance(loop, TripleLoop) else el[:1]
        bad = []
        for x in translators:
            if len(np.unique(loop.mul(x, el))) != n or len(np.unique(loop.mul(el, x))) != n:
                bad.append((int(x),))
        report.add(_item('a-translations', bad, len(translators), 'exhaustive', limit,
                         note=f"{len(translators)} translations by a-components"))

    neutral = np.array_equal(loop.mul(0, el), el) and np.array_equal(loop.mul(el, 0), el)
    report.add(_item('neutral', [] if neutral else [(0,)], n, 'exhaustive', limit))
    logger.debug(f"{loop.name}: {report.summary()}")
    return report
