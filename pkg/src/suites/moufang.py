"""
The Moufang identity x(y(xz)) = ((xy)x)z, with the associator reduction on triple loops.
"""

import logging
from typing import Optional

from loops.base import Loop
from loops.triple import TripleLoop
from suites.identities import Identity, evaluate, exhaustive_tuples
from suites.plan import SamplingPlan
from utils.suite_report import SuiteReport

logger = logging.getLogger(__name__)


def _assoc(loop: Loop, x, y, z):
    return loop.ldiv(loop.mul(x, loop.mul(y, z)), loop.mul(loop.mul(x, y), z))


def _moufang(loop: Loop, cols):
    x, y, z = cols[:3]
    return loop.mul(x, loop.mul(y, loop.mul(x, z))) == loop.mul(loop.mul(loop.mul(x, y), x), z)


def _reduction(loop: Loop, cols):
    # [x,y,xz][xy,x,z] = 1
    x, y, z = cols[:3]
    return loop.mul(_assoc(loop, x, y, loop.mul(x, z)), _assoc(loop, loop.mul(x, y), x, z)) == 0


MOUFANG = Identity('moufang', 3, _moufang)
REDUCTION = Identity('reduction', 3, _reduction)


def check_moufang(loop: Loop, plan: Optional[SamplingPlan] = None) -> SuiteReport:
    """Moufang suite; a pass marks the loop power-associative."""
    plan = plan or SamplingPlan.from_config()
    key = f"moufang:{plan.seed}:{plan.mode(loop.order, 3)}:{plan.budget(3)}"
    cached = loop.cache.get(key)
    if cached is not None:
        return cached
    logger.info(f"🚀 Moufang check on {loop.name} ({plan.mode(loop.order, 3)})")
    report = SuiteReport('moufang', metadata={'loop': loop.name, 'seed': plan.seed})

    tuples = plan.tuples(loop.order, 3)
    mode = plan.mode(loop.order, 3)
    report.add(evaluate(loop, MOUFANG, plan, tuples=tuples, mode=mode))

    if isinstance(loop, TripleLoop):
        report.add(evaluate(loop, REDUCTION, plan, tuples=tuples, mode=mode))
        a_triples = exhaustive_tuples(loop.a_elements(), 3)
        report.add(evaluate(loop, REDUCTION, plan, tuples=a_triples, mode='exhaustive',
                            name='reduction-a-components'))

    if report.ok:
        loop.mark_power_associative()
        logger.info(f"✅ {loop.name} is Moufang ({report.summary()})")
    else:
        logger.info(f"❌ {loop.name} is not Moufang: witness {report.first_witness()}")
    loop.cache[key] = report
    return report
