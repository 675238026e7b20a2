"""
Identities linking Q and its half loop Q(1/2).
"""

import logging
from typing import Optional

import numpy as np

from halfloop.half_loop import HalfLoop, build_half_loop
from loops.base import Loop
from suites.identities import Identity, evaluate
from suites.multilinear import assoc, comm
from suites.plan import SamplingPlan
from utils.errors import SizeGateError
from utils.suite_report import Status, SuiteItem, SuiteReport

logger = logging.getLogger(__name__)


def _all_pairs(n: int) -> np.ndarray:
    x, y = np.divmod(np.arange(n * n, dtype=np.int64), n)
    return np.stack([x, y], axis=1)


def _biconditional(name: str, left: bool, right: bool, checked: int, mode: str, note: str) -> SuiteItem:
    agree = left == right
    return SuiteItem(name, Status.PASS if agree else Status.FAIL, checked=checked, mode=mode,
                     failures=0 if agree else 1,
                     witnesses=[] if agree else [(f"half={left}", f"criterion={right}")],
                     note=f"{note}: {left} ⇔ {right}")


def _commutativity_item(loop: Loop, half: HalfLoop, plan: SamplingPlan) -> SuiteItem:
    """Q(1/2) commutative ⇔ [x,y]x = x[x,y] for all x, y."""
    pairs = plan.tuples(loop.order, 2, stream=60)
    x, y = pairs[:, 0], pairs[:, 1]
    commutative = bool((half.mul(x, y) == half.mul(y, x)).all())
    c = comm(loop, x, y)
    criterion = bool((loop.mul(c, x) == loop.mul(x, c)).all())
    return _biconditional('commutativity-criterion', commutative, criterion, len(pairs),
                          plan.mode(loop.order, 2), 'Q(1/2) commutative vs [x,y]x = x[x,y]')


def _half_associative(half: HalfLoop, plan: SamplingPlan) -> bool:
    triples = plan.tuples(half.order, 3, stream=61)
    x, y, z = triples[:, 0], triples[:, 1], triples[:, 2]
    return bool((half.mul(half.mul(x, y), z) == half.mul(x, half.mul(y, z))).all())


def _abelian_item(loop: Loop, half: HalfLoop, commutative: bool, plan: SamplingPlan, report: SuiteReport):
    """Q(1/2) abelian group ⇔ [x,y] ∈ N(Q), [x,y,z] ∈ Z(Q), [[x,y],z] = [x,y,z]^2."""
    from analysis.center import center, nucleus

    abelian = commutative and _half_associative(half, plan)
    report.metadata['half.abelian'] = abelian
    try:
        n_mask = nucleus(loop, plan).mask
        z_mask = center(loop, plan).mask
    except SizeGateError as e:
        return SuiteItem.vacuous('abelian-criterion', str(e))

    triples = plan.tuples(loop.order, 3, stream=62)
    x, y, z = triples[:, 0], triples[:, 1], triples[:, 2]
    c = comm(loop, x, y)
    a = assoc(loop, x, y, z)
    criterion = bool(n_mask[c].all() and z_mask[a].all() and (comm(loop, c, z) == loop.pow(a, 2)).all())
    return _biconditional('abelian-criterion', abelian, criterion, len(triples), plan.mode(loop.order, 3),
                          'Q(1/2) abelian group vs bracket criterion')


def half_suite(loop: Loop, plan: Optional[SamplingPlan] = None) -> SuiteReport:
    """Half-loop battery; refuses (NotDivisibleError) loops that are not uniquely 2-divisible."""
    from analysis.series import upper_central_series

    plan = plan or SamplingPlan.from_config()
    half = build_half_loop(loop, plan)
    r = half.roots.inverse
    report = SuiteReport('half-bundle', metadata={'loop': loop.name})
    report.merge(half.checks, prefix='construction.')

    commutativity = report.add(_commutativity_item(loop, half, plan))
    commutative = bool(np.array_equal(half.table, half.table.T))
    report.metadata['half.commutative'] = commutative
    report.add(_abelian_item(loop, half, commutative, plan, report))

    series = upper_central_series(loop, plan=plan)
    class_two = series.nilpotent and series.nilpotency_class <= 2
    report.metadata['class'] = series.verdict()
    report.trace(f"class = {series.verdict()}: gate cl <= 2 {'open' if class_two else 'closed'}")
    gated = [
        # y^-1xy = x*[x,y]
        Identity('conjugation-star', 2, lambda lp, c: lp.mul(lp.mul(lp.inv(c[1]), c[0]), c[1])
                 == half.mul(c[0], comm(lp, c[0], c[1]))),
        # [x^(1/2),y] = [x,y]^(1/2)
        Identity('root-commutator', 2, lambda lp, c: comm(lp, r[c[0]], c[1]) == r[comm(lp, c[0], c[1])]),
        Identity('associator-agreement', 3, lambda lp, c: assoc(lp, c[0], c[1], c[2]) == half.ldiv(
            half.mul(c[0], half.mul(c[1], c[2])), half.mul(half.mul(c[0], c[1]), c[2])))
    ]
    for stream, identity in enumerate(gated):
        if class_two:
            report.add(evaluate(loop, identity, plan, stream=63 + stream))
        else:
            report.add(SuiteItem.vacuous(identity.name, f"needs cl <= 2, class = {series.verdict()}"))

    # x*x = x^2, x*(x*(x*x)) = x^4, shared neutral element
    el = loop.elements()
    powers_ok = np.ones(loop.order, dtype=bool)
    for k in range(2, 6):
        powers_ok &= half.pow(el, k) == loop.pow(el, k)
    neutral = bool(np.array_equal(half.table[0], el) and np.array_equal(half.table[:, 0], el))
    bad = np.flatnonzero(~powers_ok)
    report.add(SuiteItem('same-powers', Status.PASS if neutral and not len(bad) else Status.FAIL,
                         checked=loop.order, mode='exhaustive', failures=len(bad) + (0 if neutral else 1),
                         witnesses=[(int(x),) for x in bad[:plan.witness_limit]],
                         note='k = 2..5, neutral element shared' if neutral else 'neutral element differs'))

    logger.info(f"📊 {report.summary()}; commutative {commutative}, abelian {report.metadata['half.abelian']}")
    if not commutativity.passed:
        logger.warning(f"⚠️ {loop.name}: commutativity criterion disagrees with Q(1/2)")
    return report
