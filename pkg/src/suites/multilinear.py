"""
Multilinearity and alternation of bracket maps Q^k → Q.

f is linear in slot i when f(.., x·w, ..) = f(.., x, ..)·f(.., w, ..), and
alternating when f(x_π) = f(x)^sgn(π) for every slot permutation π.
"""

import itertools
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from loops.base import Loop
from suites.identities import Identity, evaluate
from suites.plan import SamplingPlan
from utils.errors import UnknownNameError
from utils.suite_report import SuiteReport

logger = logging.getLogger(__name__)

BracketMap = Callable[[Loop, Sequence[np.ndarray]], np.ndarray]


def comm(loop: Loop, x, y):
    return loop.ldiv(loop.mul(y, x), loop.mul(x, y))


def assoc(loop: Loop, x, y, z):
    return loop.ldiv(loop.mul(x, loop.mul(y, z)), loop.mul(loop.mul(x, y), z))


# name -> (arity, map)
MAPS: Dict[str, Tuple[int, BracketMap]] = {
    'commutator': (2, lambda lp, c: comm(lp, c[0], c[1])),
    'associator': (3, lambda lp, c: assoc(lp, c[0], c[1], c[2])),
    'triple_comm': (3, lambda lp, c: comm(lp, comm(lp, c[0], c[1]), c[2])),
    'assoc_comm': (4, lambda lp, c: comm(lp, assoc(lp, c[0], c[1], c[2]), c[3])),
    'assoc_with_comm': (4, lambda lp, c: assoc(lp, c[0], c[1], comm(lp, c[2], c[3]))),
    'assoc_with_assoc': (5, lambda lp, c: assoc(lp, c[0], c[1], assoc(lp, c[2], c[3], c[4])))
}

MAP_NAMES = tuple(MAPS)


def bracket_map(name: str) -> Tuple[int, BracketMap]:
    if name not in MAPS:
        raise UnknownNameError(f"unknown map '{name}' (known: {', '.join(MAP_NAMES)})")
    return MAPS[name]


def _sign(perm: Tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = True
            p = perm[p]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def linearity_identity(name: str, slot: int) -> Identity:
    """Tuples carry the partner element in the last column."""
    arity, f = bracket_map(name)

    def check(loop: Loop, cols):
        args = list(cols[:arity])
        w = cols[arity]
        combined = list(args)
        combined[slot] = loop.mul(args[slot], w)
        partner = list(args)
        partner[slot] = w
        return f(loop, combined) == loop.mul(f(loop, args), f(loop, partner))

    return Identity(f"{name}.linear[{slot + 1}]", arity + 1, check)


def alternating_identity(name: str) -> Identity:
    arity, f = bracket_map(name)
    perms = [p for p in itertools.permutations(range(arity)) if p != tuple(range(arity))]

    def check(loop: Loop, cols):
        args = list(cols[:arity])
        value = f(loop, args)
        inverse = loop.inv(value)
        ok = np.ones(np.shape(value), dtype=bool)
        for perm in perms:
            expected = value if _sign(perm) > 0 else inverse
            ok &= f(loop, [args[i] for i in perm]) == expected
        return ok

    return Identity(f"{name}.alternating", arity, check)


def linearity_items(loop: Loop, name: str, plan: SamplingPlan, stream: int = 0) -> List:
    arity, _ = bracket_map(name)
    tuples = plan.tuples(loop.order, arity, stream)
    mode = plan.mode(loop.order, arity)
    partners = plan.partners(loop.order, len(tuples), stream)
    extended = np.column_stack([tuples, partners])
    return [evaluate(loop, linearity_identity(name, slot), plan, tuples=extended, mode=mode)
            for slot in range(arity)]


def check_multilinear_alternating(loop: Loop, name: str, plan: Optional[SamplingPlan] = None,
                                  alternating: bool = True) -> SuiteReport:
    """Per-slot linearity and alternation of a bracket map.

    Gates (uniquely 2-divisible, class <= 2) are recorded in the trace only.
    """
    from analysis.series import upper_central_series
    from halfloop.divisibility import divisibility
    from utils.errors import LoopforgeError

    plan = plan or SamplingPlan.from_config()
    arity, _ = bracket_map(name)
    report = SuiteReport('multilinear', metadata={'loop': loop.name, 'map': name, 'arity': arity})
    logger.info(f"🚀 Multilinearity of {name} on {loop.name} ({plan.mode(loop.order, arity)})")

    try:
        two_divisible = bool(divisibility(loop, 2))
        verdict = upper_central_series(loop, plan=plan).verdict()
        report.trace(f"gate recorded, not enforced: uniquely 2-divisible = {two_divisible}, class = {verdict}")
    except LoopforgeError as e:
        report.trace(f"gate not evaluated: {e}")

    for item in linearity_items(loop, name, plan):
        report.add(item)
    if alternating:
        report.add(evaluate(loop, alternating_identity(name), plan, stream=1))
    logger.info(f"📊 {report.summary()}")
    return report
