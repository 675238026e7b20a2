"""
Named identity batteries: bruck-battery, class2-bundle, tsmall, t-compose, class3-bundle.

Gates are evaluated on the same tuples as the identities they guard. A closed
gate yields a vacuous item and a line in the gate trace, never a failure.
"""

import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from config import Config
from loops.base import Loop
from loops.triple import TripleLoop
from suites.identities import Identity, evaluate, evaluate_all
from suites.moufang import check_moufang
from suites.multilinear import (alternating_identity, assoc, check_multilinear_alternating, comm,
                                linearity_items)
from suites.plan import SamplingPlan
from utils.errors import LoopforgeError, SizeGateError, UnknownNameError
from utils.suite_report import Status, SuiteItem, SuiteReport

logger = logging.getLogger(__name__)

SUITES = ('moufang', 'bruck-battery', 'class2-bundle', 'tsmall', 't-compose', 'class3-bundle',
          'half-bundle', 'multilinear')


def _identity(name: str, arity: int):
    def wrap(fn: Callable) -> Identity:
        return Identity(name, arity, lambda lp, c: fn(lp, *c[:arity]))
    return wrap


# Bruck battery (i)-(vii), each on (x, y, z)
BRUCK_BATTERY: List[Identity] = [
    _identity('i', 3)(lambda lp, x, y, z: comm(lp, assoc(lp, x, y, z), x) == 0),
    _identity('ii', 3)(lambda lp, x, y, z: assoc(lp, x, y, comm(lp, y, z)) == 0),
    _identity('iii', 3)(lambda lp, x, y, z: lp.inv(assoc(lp, x, y, z)) == assoc(lp, lp.inv(x), y, z)),
    _identity('iv', 3)(lambda lp, x, y, z:
                       lp.inv(assoc(lp, x, y, z)) == assoc(lp, lp.inv(x), lp.inv(y), lp.inv(z))),
    _identity('v', 3)(lambda lp, x, y, z: assoc(lp, x, y, z) == assoc(lp, x, lp.mul(z, y), z)),
    _identity('vi', 3)(lambda lp, x, y, z: assoc(lp, x, y, z) == assoc(lp, x, z, lp.inv(y))),
    _identity('vii', 3)(lambda lp, x, y, z: assoc(lp, x, y, z) == assoc(lp, x, lp.mul(x, y), z))
]

POWER_RANGE = (-2, -1, 0, 1, 2, 3)


def _cyclic(lp, x, y, z):
    a = assoc(lp, x, y, z)
    return (a == assoc(lp, y, z, x)) & (a == lp.inv(assoc(lp, y, x, z)))


def _powers(lp, x, y, z):
    a = assoc(lp, x, y, z)
    ok = np.ones(np.shape(a), dtype=bool)
    for n in POWER_RANGE:
        ok &= assoc(lp, lp.pow(x, n), y, z) == lp.pow(a, n)
    return ok


def _expansion(lp, x, y, z):
    # [xy,z] = (([x,z][[x,z],y])[y,z])[x,y,z]^3
    xz = comm(lp, x, z)
    rhs = lp.mul(lp.mul(lp.mul(xz, comm(lp, xz, y)), comm(lp, y, z)), lp.pow(assoc(lp, x, y, z), 3))
    return comm(lp, lp.mul(x, y), z) == rhs


def _inner_action(lp, x, y, z):
    # pL(y,z) = (zy)\(z(yp)), pR(y,z) = ((py)z)/(yz), both at p = x
    target = lp.mul(x, assoc(lp, x, y, z))
    left = lp.ldiv(lp.mul(z, y), lp.mul(z, lp.mul(y, x)))
    right = lp.rdiv(lp.mul(lp.mul(x, y), z), lp.mul(y, z))
    return (left == target) & (right == target)


BRUCK_CONSEQUENCES: List[Identity] = [
    _identity('cyclic', 3)(_cyclic),
    _identity('powers', 3)(_powers),
    _identity('expansion', 3)(_expansion),
    _identity('inner-action', 3)(_inner_action)
]


def bruck_battery(loop: Loop, plan: SamplingPlan) -> SuiteReport:
    report = SuiteReport('bruck-battery', metadata={'loop': loop.name})
    tuples = plan.tuples(loop.order, 3)
    mode = plan.mode(loop.order, 3)
    battery = evaluate_all(loop, BRUCK_BATTERY, plan, tuples=tuples, mode=mode)
    for item in battery:
        report.add(item)

    verdicts = {item.status for item in battery}
    moufang = check_moufang(loop, plan)
    if not moufang.ok:
        report.trace('all-or-none applies to Moufang loops; the loop failed the Moufang suite')
        report.add(SuiteItem.vacuous('all-or-none', 'loop is not Moufang'))
    else:
        unanimous = len(verdicts) == 1
        report.add(SuiteItem('all-or-none', Status.PASS if unanimous else Status.FAIL, checked=len(battery),
                             mode='meta', failures=0 if unanimous else 1,
                             witnesses=[] if unanimous else [tuple(f"{i.name}={i.status}" for i in battery)],
                             note=', '.join(f"{i.name}={i.status}" for i in battery)))

    if all(item.passed for item in battery):
        report.trace('(i)-(vii) hold: consequences asserted')
        for item in evaluate_all(loop, BRUCK_CONSEQUENCES, plan, tuples=tuples, mode=mode):
            report.add(item)
    else:
        report.trace('(i)-(vii) do not all hold: consequences skipped')
        for identity in BRUCK_CONSEQUENCES:
            report.add(SuiteItem.vacuous(identity.name, '(i)-(vii) do not all hold'))
    return report


def _class_at_most(loop: Loop, bound: int, plan: SamplingPlan, report: SuiteReport) -> bool:
    from analysis.series import upper_central_series

    series = upper_central_series(loop, plan=plan)
    verdict = series.verdict()
    report.metadata['class'] = verdict
    holds = series.nilpotent and series.nilpotency_class <= bound
    report.trace(f"class = {verdict}: cl <= {bound} {'holds' if holds else 'fails'}")
    return holds


CLASS2_IDENTITIES: List[Identity] = [
    _identity('cube-nuclear', 3)(lambda lp, x, y, z: (
        (assoc(lp, lp.pow(x, 3), y, z) == 0) & (assoc(lp, y, lp.pow(x, 3), z) == 0)
        & (assoc(lp, y, z, lp.pow(x, 3)) == 0))),
    _identity('associator-cubed', 3)(lambda lp, x, y, z: lp.pow(assoc(lp, x, y, z), 3) == 0),
    # [xy,z] = [x,z][y,z]·[x,y,z]^3
    _identity('expansion', 3)(lambda lp, x, y, z: comm(lp, lp.mul(x, y), z) == lp.mul(
        lp.mul(comm(lp, x, z), comm(lp, y, z)), lp.pow(assoc(lp, x, y, z), 3)))
]


def class2_bundle(loop: Loop, plan: SamplingPlan) -> SuiteReport:
    report = SuiteReport('class2-bundle', metadata={'loop': loop.name})
    moufang = check_moufang(loop, plan)
    report.trace(f"Moufang: {moufang.ok}")
    names = [identity.name for identity in CLASS2_IDENTITIES] + [
        'commutator.linear[1]', 'commutator.linear[2]', 'commutator.alternating',
        'associator.linear[1]', 'associator.linear[2]', 'associator.linear[3]', 'associator.alternating']
    if not (moufang.ok and _class_at_most(loop, 2, plan, report)):
        for name in names:
            report.add(SuiteItem.vacuous(name, 'needs a Moufang loop of class <= 2'))
        return report

    for item in evaluate_all(loop, CLASS2_IDENTITIES, plan):
        report.add(item)
    for name in ('commutator', 'associator'):
        for item in linearity_items(loop, name, plan, stream=10):
            report.add(item)
        report.add(evaluate(loop, alternating_identity(name), plan, stream=11))
    return report


def _tsmall_gate_parametric(loop: TripleLoop) -> Callable:
    from mappings.inner_group import HGroup
    from mappings.mapping import conjugation_parameters, inner_parameters

    hg = HGroup(loop)

    def gate(lp, cols):
        x, y, z = cols[:3]
        t = hg.join(*conjugation_parameters(loop, x))
        lyz = hg.join(*inner_parameters(loop, y, z))
        return hg.mul(t, lyz) == hg.mul(lyz, t)

    return gate


def _tsmall_gate_pointwise(loop: Loop, chunk_size: int) -> Callable:
    if loop.order > Config.INNER_GENERATOR_CAP:
        raise SizeGateError(f"{loop.name}: pointwise tsmall gate needs order <= {Config.INNER_GENERATOR_CAP}")
    points = loop.elements()
    # row x holds the images of T(x)
    conj = loop.ldiv(points[:, None], loop.mul(points[None, :], points[:, None]))

    def gate(lp, cols):
        x, y, z = (c[:, None] for c in cols[:3])
        result = np.empty(len(cols[0]), dtype=bool)
        rows = max(1, chunk_size // loop.order)
        for lo in range(0, len(cols[0]), rows):
            xs, ys, zs = x[lo:lo + rows], y[lo:lo + rows], z[lo:lo + rows]
            zy = lp.mul(zs, ys)

            def lmap(p):
                return lp.ldiv(zy, lp.mul(zs, lp.mul(ys, p)))

            tx = conj[xs[:, 0]]
            # T(x) then L(y,z) against L(y,z) then T(x)
            first = lmap(tx)
            second = np.take_along_axis(tx, lmap(points[None, :]), axis=1)
            result[lo:lo + rows] = (first == second).all(axis=1)
        return result

    return gate


def tsmall(loop: Loop, plan: SamplingPlan) -> SuiteReport:
    """Where T(x) commutes with L(y,z), [[x,y,z],x] = 1."""
    from mappings.inner_group import inner_form_certified

    report = SuiteReport('tsmall', metadata={'loop': loop.name})
    if isinstance(loop, TripleLoop) and inner_form_certified(loop):
        gate = _tsmall_gate_parametric(loop)
        report.trace('gate T(x)L(y,z) = L(y,z)T(x) decided in H-parameter space')
    else:
        gate = _tsmall_gate_pointwise(loop, plan.chunk_size)
        report.trace('gate T(x)L(y,z) = L(y,z)T(x) decided pointwise on all points')

    tuples = plan.tuples(loop.order, 3)
    item = report.add(evaluate(loop, BRUCK_BATTERY[0], plan, tuples=tuples, mode=plan.mode(loop.order, 3),
                               gate=gate, name='assoc-commutes-with-x'))
    report.metadata['gate_open'] = item.checked
    report.trace(f"gate open on {item.checked} of {len(tuples)} tuples")
    return report


def _t(lp, x, z):
    """zT(x) = x\\(zx)"""
    return lp.ldiv(x, lp.mul(z, x))


T_COMPOSE_GATES: Dict[str, Identity] = {
    'g1': _identity('assoc-commutes-with-x', 3)(lambda lp, x, y, z: comm(lp, assoc(lp, x, y, z), x) == 0),
    # [x,y] against (z, w) in all three positions, w the partner column
    'g2': Identity('commutators-nuclear', 4, lambda lp, c: (
        (assoc(lp, comm(lp, c[0], c[1]), c[2], c[3]) == 0)
        & (assoc(lp, c[2], comm(lp, c[0], c[1]), c[3]) == 0)
        & (assoc(lp, c[2], c[3], comm(lp, c[0], c[1])) == 0))),
    'g3': _identity('iterated-commutator-square', 3)(
        lambda lp, x, y, z: comm(lp, comm(lp, x, y), z) == lp.pow(assoc(lp, x, y, z), 2))
}

# zT(y)T(x) = zT(yx)·[x,y,z]^-3
LAW_A = _identity('law-a', 3)(lambda lp, x, y, z: _t(lp, x, _t(lp, y, z)) == lp.mul(
    _t(lp, lp.mul(y, x), z), lp.pow(assoc(lp, x, y, z), -3)))
# zT(y)T(x) = zT(x)T(y)·[x,y,z]^-4
LAW_B = _identity('law-b', 3)(lambda lp, x, y, z: _t(lp, x, _t(lp, y, z)) == lp.mul(
    _t(lp, y, _t(lp, x, z)), lp.pow(assoc(lp, x, y, z), -4)))


def _close_gate(item: SuiteItem) -> SuiteItem:
    item.name = f"gate.{item.name}"
    if item.failed:
        # a closed gate is not a failure of the laws
        item.status = Status.VACUOUS
        item.note = f"gate closed on {item.failures} tuples"
    return item


def t_compose(loop: Loop, plan: SamplingPlan) -> SuiteReport:
    """Composition laws for conjugations, under whole-loop hypotheses.

    Law a needs a Moufang loop with [[x,y,z],x] = 1 throughout the sample;
    law b also needs nuclear commutators and [[x,y],z] = [x,y,z]^2.
    """
    report = SuiteReport('t-compose', metadata={'loop': loop.name})
    names = ['gate.' + T_COMPOSE_GATES[g].name for g in ('g1', 'g2', 'g3')] + ['law-a', 'law-b']
    moufang = check_moufang(loop, plan)
    report.trace(f"Moufang: {moufang.ok}")
    if not moufang.ok:
        report.add(SuiteItem.vacuous('gate.moufang', 'loop failed the Moufang suite'))
        for name in names:
            report.add(SuiteItem.vacuous(name, 'needs a Moufang loop'))
        return report
    report.add(SuiteItem('gate.moufang', Status.PASS, checked=sum(i.checked for i in moufang.items),
                         mode='meta'))

    tuples = plan.tuples(loop.order, 3)
    mode = plan.mode(loop.order, 3)
    partners = plan.partners(loop.order, len(tuples), stream=20)
    g1, g2, g3 = (_close_gate(item) for item in (
        evaluate(loop, T_COMPOSE_GATES['g1'], plan, tuples=tuples, mode=mode),
        evaluate(loop, T_COMPOSE_GATES['g2'], plan, tuples=np.column_stack([tuples, partners]), mode=mode),
        evaluate(loop, T_COMPOSE_GATES['g3'], plan, tuples=tuples, mode=mode)))
    for item in (g1, g2, g3):
        report.add(item)
        report.trace(f"{item.name}: {'open' if item.passed else 'closed'}")

    if g1.passed:
        report.add(evaluate(loop, LAW_A, plan, tuples=tuples, mode=mode))
    else:
        report.add(SuiteItem.vacuous('law-a', '[[x,y,z],x] = 1 fails on the sample'))
    if g1.passed and g2.passed and g3.passed:
        report.add(evaluate(loop, LAW_B, plan, tuples=tuples, mode=mode))
    else:
        report.add(SuiteItem.vacuous('law-b', 'commutator gates closed on the sample'))
    return report


MINIMAL_COUNTEREXAMPLE: List[Identity] = [
    _identity('assoc-commutator-trivial', 4)(lambda lp, x, y, z, u: comm(lp, assoc(lp, x, y, z), u) == 0),
    _identity('commutator-assoc-trivial', 4)(lambda lp, x, y, z, u: assoc(lp, comm(lp, x, y), z, u) == 0)
]

CLASS3_MAPS = ('triple_comm', 'assoc_comm', 'assoc_with_comm', 'assoc_with_assoc')


def class3_bundle(loop: Loop, plan: SamplingPlan, assume_proper_class2: bool = False,
                  minimal_counterexample: bool = False) -> SuiteReport:
    report = SuiteReport('class3-bundle', metadata={'loop': loop.name,
                                                   'assume_proper_class2': assume_proper_class2})
    report.trace(f"user-asserted: every proper subloop has class <= 2: {assume_proper_class2}")
    names = ['triple_comm.alternating'] + [f"{name}.linear" for name in CLASS3_MAPS]
    if minimal_counterexample:
        names += [identity.name for identity in MINIMAL_COUNTEREXAMPLE]

    if not (assume_proper_class2 and _class_at_most(loop, 3, plan, report)):
        for name in names:
            report.add(SuiteItem.vacuous(name, 'needs cl <= 3 and the proper-subloop flag'))
        return report

    report.add(evaluate(loop, alternating_identity('triple_comm'), plan, stream=30))
    for offset, name in enumerate(CLASS3_MAPS):
        for item in linearity_items(loop, name, plan, stream=31 + offset):
            report.add(item)
    if minimal_counterexample:
        report.trace('minimal-counterexample checks requested')
        for item in evaluate_all(loop, MINIMAL_COUNTEREXAMPLE, plan, stream=40):
            report.add(item)
    return report


def run_suite(loop: Loop, suite: str, plan: Optional[SamplingPlan] = None, map_name: Optional[str] = None,
              assume_proper_class2: bool = False, minimal_counterexample: bool = False) -> SuiteReport:
    """Run a named suite; unknown names raise UnknownNameError."""
    plan = plan or SamplingPlan.from_config()
    if suite not in SUITES:
        raise UnknownNameError(f"unknown suite '{suite}' (known: {', '.join(SUITES)})")

    logger.info(f"🚀 Running {suite} on {loop.name}")
    try:
        if suite == 'moufang':
            report = check_moufang(loop, plan)
        elif suite == 'bruck-battery':
            report = bruck_battery(loop, plan)
        elif suite == 'class2-bundle':
            report = class2_bundle(loop, plan)
        elif suite == 'tsmall':
            report = tsmall(loop, plan)
        elif suite == 't-compose':
            report = t_compose(loop, plan)
        elif suite == 'class3-bundle':
            report = class3_bundle(loop, plan, assume_proper_class2, minimal_counterexample)
        elif suite == 'half-bundle':
            from halfloop.suite import half_suite
            report = half_suite(loop, plan)
        else:
            report = check_multilinear_alternating(loop, map_name or 'commutator', plan)
    except LoopforgeError as e:
        logger.error(f"❌ {suite} on {loop.name} refused: {e}")
        raise

    logger.info(f"📊 {report.summary()}")
    return report
