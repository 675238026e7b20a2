"""
Theorem harnesses: class <= 2 for Moufang loops with abelian Inn that are
of odd order, or uniquely 2- and 3-divisible.
"""

import logging
from typing import Optional

from loops.base import Loop
from suites.moufang import check_moufang
from suites.plan import SamplingPlan
from utils.errors import UnknownNameError
from utils.suite_report import Status, SuiteItem, SuiteReport

logger = logging.getLogger(__name__)

THEOREMS = ('odd-order', 'six-div')

PASS = 'pass'
VIOLATION = 'THEOREM VIOLATION'
NOT_APPLICABLE = 'not-applicable'
CONTRAPOSITIVE = 'contrapositive-consistent'
UNMET = 'hypotheses-unmet'


def _hypothesis(report: SuiteReport, name: str, holds: bool, note: str = '') -> bool:
    status = Status.PASS if holds else Status.VACUOUS
    report.add(SuiteItem(f"hypothesis.{name}", status, checked=1, mode='computed', note=note))
    report.trace(f"{name}: {'holds' if holds else 'fails'}{f' ({note})' if note else ''}")
    return holds


def _size_hypothesis(loop: Loop, which: str, report: SuiteReport) -> bool:
    if which == 'odd-order':
        return _hypothesis(report, 'odd-order', loop.order % 2 == 1, f"order {loop.order}")

    from halfloop.divisibility import divisibility

    holds = True
    for m in (2, 3):
        result = divisibility(loop, m)
        holds &= _hypothesis(report, f"uniquely-{m}-divisible", bool(result), result.describe(loop))
    return holds


def theorem_harness(loop: Loop, which: str = 'odd-order', plan: Optional[SamplingPlan] = None) -> SuiteReport:
    """Evaluate the hypotheses; when all hold, assert cl(Q) <= 2.

    The verdict is pass, THEOREM VIOLATION, not-applicable (size hypothesis
    fails), contrapositive-consistent (another hypothesis fails and cl > 2) or
    hypotheses-unmet (another hypothesis fails and cl <= 2).
    """
    from analysis.series import upper_central_series
    from mappings.inner_group import inner_group_closure

    if which not in THEOREMS:
        raise UnknownNameError(f"unknown theorem '{which}' (known: {', '.join(THEOREMS)})")
    plan = plan or SamplingPlan.from_config()
    report = SuiteReport(f"theorem.{which}", metadata={'loop': loop.name})
    logger.info(f"🚀 Theorem harness {which} on {loop.name}")

    if not _size_hypothesis(loop, which, report):
        report.verdict = NOT_APPLICABLE
        report.add(SuiteItem.vacuous('conclusion', NOT_APPLICABLE))
        logger.info(f"📊 {which} on {loop.name}: {report.verdict}")
        return report

    moufang = check_moufang(loop, plan)
    hypotheses = _hypothesis(report, 'moufang', moufang.ok, f"{moufang.items[0].checked} tuples, "
                                                           f"{moufang.items[0].mode}")
    inn = inner_group_closure(loop)
    hypotheses &= _hypothesis(report, 'inn-abelian', inn.abelian and inn.complete,
                              f"|Inn| = {inn.order}{'' if inn.complete else ' (incomplete)'}")

    series = upper_central_series(loop, plan=plan)
    at_most_two = series.nilpotent and series.nilpotency_class <= 2
    report.metadata['class'] = series.verdict()

    if hypotheses:
        report.verdict = PASS if at_most_two else VIOLATION
        report.add(SuiteItem('conclusion', Status.PASS if at_most_two else Status.FAIL, checked=1,
                             mode='computed', failures=0 if at_most_two else 1,
                             witnesses=[] if at_most_two else [(f"class={series.verdict()}",)],
                             note=f"class = {series.verdict()}"))
        if not at_most_two:
            logger.error(f"❌ {VIOLATION}: {loop.name} meets every hypothesis of {which} "
                         f"but has class {series.verdict()}")
    else:
        report.verdict = UNMET if at_most_two else CONTRAPOSITIVE
        report.add(SuiteItem.vacuous('conclusion', f"{report.verdict}, class = {series.verdict()}"))

    logger.info(f"📊 {which} on {loop.name}: {report.verdict} (class {series.verdict()})")
    return report
