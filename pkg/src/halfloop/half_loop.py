"""
The associated Bruck loop Q(1/2): x*y = (x^{1/2}y)x^{1/2}.
"""

import logging
from typing import Optional

import numpy as np

from config import Config
from halfloop.divisibility import RootTable, divisibility
from loops.base import CayleyLoop, Loop
from suites.identities import Identity, evaluate
from suites.moufang import check_moufang
from suites.plan import SamplingPlan
from utils.errors import ConstructionRefused, NotDivisibleError, SizeGateError
from utils.suite_report import SuiteReport

logger = logging.getLogger(__name__)


class HalfLoop(CayleyLoop):
    def __init__(self, table, parent: Loop, roots: RootTable):
        super().__init__(table, name=f"{parent.name}(1/2)")
        self.parent = parent
        self.roots = roots
        self.checks: Optional[SuiteReport] = None

    @property
    def kind(self) -> str:
        return 'half'


def _left_bol(loop: Loop, cols):
    # x*(y*(x*z)) = (x*(y*x))*z
    x, y, z = cols[:3]
    return loop.mul(x, loop.mul(y, loop.mul(x, z))) == loop.mul(loop.mul(x, loop.mul(y, x)), z)


LEFT_BOL = Identity('left-bol', 3, _left_bol)


def build_half_loop(loop: Loop, plan: Optional[SamplingPlan] = None) -> HalfLoop:
    """Materialize Q(1/2), refusing inputs that are not uniquely 2-divisible Moufang loops."""
    cached = loop.cache.get('half')
    if cached is not None:
        return cached
    plan = plan or SamplingPlan.from_config()

    roots = divisibility(loop, 2)
    if not roots:
        raise NotDivisibleError(f"{loop.name} is not uniquely 2-divisible: {roots.describe(loop)}")
    if loop.order > Config.CAYLEY_EXPORT_CAP:
        raise SizeGateError(f"{loop.name}: half loop of order {loop.order} is above the Cayley cap")
    moufang = check_moufang(loop, plan)
    if not moufang.ok:
        raise ConstructionRefused(f"{loop.name} fails the Moufang suite; x^(1/2)yx^(1/2) has no "
                                  f"canonical bracketing (witness {moufang.first_witness()})")

    logger.info(f"🚀 Building {loop.name}(1/2)")
    el = loop.elements()
    r = roots.inverse
    table = loop.mul(loop.mul(r[:, None], el[None, :]), r[:, None])
    half = HalfLoop(table, loop, roots)

    checks = SuiteReport('half-construction', metadata={'loop': loop.name})
    exhaustive = loop.order <= Config.HALF_BOL_EXHAUSTIVE_CAP
    bol_plan = plan.replace(caps={**plan.caps, 3: Config.HALF_BOL_EXHAUSTIVE_CAP})
    checks.add(evaluate(half, LEFT_BOL, bol_plan, stream=50))

    pairs = plan.tuples(loop.order, 2, stream=51)
    other = Identity('bracketing', 2, lambda lp, c: lp.mul(lp.mul(r[c[0]], c[1]), r[c[0]])
                     == lp.mul(r[c[0]], lp.mul(c[1], r[c[0]])))
    checks.add(evaluate(loop, other, plan, tuples=pairs, mode=plan.mode(loop.order, 2)))
    half.checks = checks
    if not checks.ok:
        logger.error(f"❌ {half.name} failed its construction checks: {checks.summary()}")
        raise ConstructionRefused(f"{half.name}: {checks.summary()}, witness {checks.first_witness()}")

    logger.info(f"✅ Built {half.name} (left Bol {'exhaustive' if exhaustive else 'sampled'})")
    loop.cache['half'] = half
    return half
