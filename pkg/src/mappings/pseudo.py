"""
Companion checks for pseudo-automorphisms and the center-automorphism test.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config import Config
from loops.base import Loop
from mappings.mapping import Mapping
from suites.plan import SamplingPlan
from utils.parallel import map_chunks
from utils.suite_report import Status, SuiteItem, SuiteReport

logger = logging.getLogger(__name__)


@dataclass
class CompanionResult:
    holds: bool
    mode: str
    checked: int
    failures: int = 0
    witness: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.holds


def _pairs(loop: Loop, plan: SamplingPlan, stream: int) -> Tuple[np.ndarray, str]:
    n = loop.order
    if n <= Config.COMPANION_EXHAUSTIVE_CAP:
        x, y = np.divmod(np.arange(n * n, dtype=np.int64), n)
        return np.stack([x, y], axis=1), 'exhaustive'
    sample = plan.rng(2, 3000 + stream).integers(0, n, size=(Config.COMPANION_SAMPLES, 2), dtype=np.int64)
    return sample, 'sampled'


def _failing(pairs: np.ndarray, predicate, plan: SamplingPlan) -> np.ndarray:
    def run(lo, hi):
        block = pairs[lo:hi]
        ok = np.asarray(predicate(block[:, 0], block[:, 1]), dtype=bool)
        return np.flatnonzero(~ok) + lo

    parts = map_chunks(run, len(pairs), plan.threads, plan.chunk_size)
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def companion_check(loop: Loop, phi: Mapping, c: int, plan: Optional[SamplingPlan] = None) -> CompanionResult:
    """True iff (xφ)(yφ·c) = (xy)φ·c for all checked pairs."""
    plan = plan or SamplingPlan.from_config()
    c = loop.check_element(c)
    pairs, mode = _pairs(loop, plan, stream=0)

    def predicate(x, y):
        return loop.mul(phi(x), loop.mul(phi(y), c)) == loop.mul(phi(loop.mul(x, y)), c)

    failing = _failing(pairs, predicate, plan)
    witness = tuple(int(v) for v in pairs[failing[0]]) if len(failing) else None
    result = CompanionResult(len(failing) == 0, mode, len(pairs), len(failing), witness)
    logger.debug(f"Companion {loop.describe(c)} for {phi!r}: {result.holds} ({mode}, {len(pairs)} pairs)")
    return result


def _item(name: str, pairs: np.ndarray, failing: np.ndarray, mode: str, limit: int, note: str = '') -> SuiteItem:
    return SuiteItem(name, Status.FAIL if len(failing) else Status.PASS, checked=len(pairs), mode=mode,
                     failures=len(failing),
                     witnesses=[tuple(int(v) for v in pairs[i]) for i in failing[:limit]], note=note)


def center_automorphism_check(loop: Loop, phi: Mapping, plan: Optional[SamplingPlan] = None) -> SuiteReport:
    """Check that ψ: x ↦ x\\(xφ) is a homomorphism into Z(Q).

    Preconditions are φ being an automorphism and xZ(Q) = (xφ)Z(Q) for every x;
    when either fails the homomorphism item is skipped.
    """
    from analysis.center import center

    plan = plan or SamplingPlan.from_config()
    limit = plan.witness_limit
    report = SuiteReport('center-automorphism', metadata={'loop': loop.name, 'map': repr(phi)})
    pairs, mode = _pairs(loop, plan, stream=1)

    failing = _failing(pairs, lambda x, y: phi(loop.mul(x, y)) == loop.mul(phi(x), phi(y)), plan)
    report.add(_item('automorphism', pairs, failing, mode, limit))

    points = loop.elements()
    psi = loop.ldiv(points, phi(points))
    z = center(loop)
    outside = np.flatnonzero(~z.mask[psi])
    report.add(SuiteItem('center-cosets', Status.FAIL if len(outside) else Status.PASS, checked=loop.order,
                         mode='exhaustive', failures=len(outside),
                         witnesses=[(int(x),) for x in outside[:limit]], note=f"|Z| = {z.order}"))

    if not report.ok:
        report.verdict = 'not a center automorphism'
        report.trace('precondition failed, homomorphism check skipped')
        report.add(SuiteItem.vacuous('homomorphism', 'not a center automorphism'))
        logger.info(f"⚠️ {phi!r} is not a center automorphism of {loop.name}")
        return report

    failing = _failing(pairs, lambda x, y: psi[loop.mul(x, y)] == loop.mul(psi[x], psi[y]), plan)
    report.add(_item('homomorphism', pairs, failing, mode, limit, note='x ↦ x\\(xφ)'))
    report.verdict = 'homomorphism into the center' if report.ok else 'not a homomorphism'
    return report
