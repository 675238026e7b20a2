"""
Upper central series and nilpotency class.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from analysis.brackets import forms_certified
from analysis.center import cayley_center_mask, center, central_step_triple
from analysis.subloops import Subloop, quotient
from loops.base import Loop
from loops.triple import TripleLoop
from suites.plan import SamplingPlan

logger = logging.getLogger(__name__)


@dataclass
class CentralSeries:
    loop: Loop
    terms: List[Subloop] = field(default_factory=list)
    nilpotent: bool = False
    nilpotency_class: Optional[int] = None
    mode: str = 'quotients'

    @property
    def stabilized(self) -> Optional[Subloop]:
        """The proper term the series got stuck at, if any."""
        return None if self.nilpotent else self.terms[-1]

    @property
    def orders(self) -> List[int]:
        return [term.order for term in self.terms]

    def verdict(self) -> str:
        if self.nilpotent:
            return str(self.nilpotency_class)
        return 'not nilpotent'


def _parametric_series(loop: TripleLoop) -> CentralSeries:
    series = CentralSeries(loop, mode='parametric')
    inside = np.zeros(loop.order, dtype=bool)
    inside[0] = True
    series.terms.append(Subloop.trivial(loop))
    while True:
        step = central_step_triple(loop, inside)
        if np.array_equal(step, inside):
            break
        inside = step
        series.terms.append(Subloop.from_mask(loop, inside, normal=True, verified_how='parametric'))
        if inside.all():
            series.nilpotent = True
            break
    return series


def _quotient_series(loop: Loop, plan: SamplingPlan) -> CentralSeries:
    series = CentralSeries(loop, mode='quotients')
    current = Subloop.trivial(loop)
    series.terms.append(current)
    while True:
        if current.order == 1:
            preimage = center(loop, plan).mask
        else:
            factor = quotient(loop, current, assume_normal=True, plan=plan)
            preimage = factor.preimage(np.flatnonzero(cayley_center_mask(factor, plan)))
        if np.array_equal(preimage, current.mask):
            break
        current = Subloop.from_mask(loop, preimage, normal=True, verified_how='preimage')
        series.terms.append(current)
        logger.debug(f"{loop.name}: Z_{len(series.terms) - 1} has order {current.order}")
        if current.is_whole():
            series.nilpotent = True
            break
    return series


def upper_central_series(loop: Loop, via_quotients: bool = False,
                         plan: Optional[SamplingPlan] = None) -> CentralSeries:
    """Z_0 = 1 and Z_{i+1}/Z_i = Z(Q/Z_i), until Z_i = Q or the chain stabilizes."""
    key = f"series:{'quotients' if via_quotients else 'auto'}"
    cached = loop.cache.get(key)
    if cached is not None:
        return cached
    plan = plan or SamplingPlan.from_config()

    logger.info(f"🚀 Computing the upper central series of {loop.name}")
    if loop.order == 1:
        series = CentralSeries(loop, [Subloop.trivial(loop)], nilpotent=True, mode='trivial')
    elif isinstance(loop, TripleLoop) and not via_quotients and forms_certified(loop):
        series = _parametric_series(loop)
    else:
        series = _quotient_series(loop, plan)

    if series.nilpotent:
        series.nilpotency_class = len(series.terms) - 1
        logger.info(f"📊 {loop.name}: class {series.nilpotency_class}, orders {series.orders}")
    else:
        logger.info(f"📊 {loop.name}: not nilpotent, series stabilizes at order {series.terms[-1].order}")
    loop.cache[key] = series
    return series


def nilpotency_class(loop: Loop) -> Optional[int]:
    """cl(Q), or None when Q is not nilpotent."""
    return upper_central_series(loop).nilpotency_class
