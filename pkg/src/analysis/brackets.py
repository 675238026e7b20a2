"""
Commutators, associators, and their closed forms on triple loops.

[x,y] = (yx)\\(xy) and [x,y,z] = (x(yz))\\((xy)z).
"""

import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from config import Config
from loops.base import Loop
from loops.triple import TripleLoop
from suites.identities import exhaustive_tuples
from suites.plan import SamplingPlan
from utils.errors import UsageError
from utils.parallel import map_chunks
from utils.suite_report import Status, SuiteItem, SuiteReport

logger = logging.getLogger(__name__)


def commutator(loop: Loop, x, y) -> np.ndarray:
    return loop.ldiv(loop.mul(y, x), loop.mul(x, y))


def associator(loop: Loop, x, y, z) -> np.ndarray:
    return loop.ldiv(loop.mul(x, loop.mul(y, z)), loop.mul(loop.mul(x, y), z))


# Closed forms on triple loops
def commutator_form(loop: TripleLoop, x, y) -> np.ndarray:
    """(0, 2aa', ba' - b'a)"""
    a, b, _ = loop.decode(x)
    a2, b2, _ = loop.decode(y)
    return loop.encode(0, loop.dbl2[loop.m11[a, a2]],
                       loop.add3[loop.m21[b, a2], loop.neg3[loop.m21[b2, a]]])


def iterated_form(loop: TripleLoop, x, y, z) -> np.ndarray:
    """[[x,y],z] = (0, 0, 2aa'a'')"""
    a, _, _ = loop.decode(x)
    a2, _, _ = loop.decode(y)
    a3, _, _ = loop.decode(z)
    return loop.encode(0, 0, loop.dbl3[loop.m111[a, a2, a3]])


def associator_form(loop: TripleLoop, x, y, z) -> np.ndarray:
    """(0, 0, aa'a'')"""
    a, _, _ = loop.decode(x)
    a2, _, _ = loop.decode(y)
    a3, _, _ = loop.decode(z)
    return loop.encode(0, 0, loop.m111[a, a2, a3])


def inner_action_form(loop: TripleLoop, p, x, y) -> np.ndarray:
    """pL(x,y) = pR(x,y) = (a, b, c + aa'a'')"""
    a, b, c = loop.decode(p)
    a2, _, _ = loop.decode(x)
    a3, _, _ = loop.decode(y)
    return loop.encode(a, b, loop.add3[c, loop.m111[a, a2, a3]])


def conjugation_form(loop: TripleLoop, p, x) -> np.ndarray:
    """pT(x) = (a, b + 2aa', c + ba' - ab')"""
    a, b, c = loop.decode(p)
    a2, b2, _ = loop.decode(x)
    return loop.encode(a, loop.add2[b, loop.dbl2[loop.m11[a, a2]]],
                       loop.add3[c, loop.add3[loop.m21[b, a2], loop.neg3[loop.m12[a, b2]]]])


def _inner_action_direct(loop: Loop, p, x, y) -> Tuple[np.ndarray, np.ndarray]:
    left = loop.ldiv(loop.mul(y, x), loop.mul(y, loop.mul(x, p)))
    right = loop.rdiv(loop.mul(loop.mul(p, x), y), loop.mul(x, y))
    return left, right


def _form_checks(loop: TripleLoop) -> List[Tuple[str, int, Callable]]:
    """(name, arity, predicate over columns)"""

    def inner_action(cols):
        closed = inner_action_form(loop, *cols)
        left, right = _inner_action_direct(loop, *cols)
        return (left == closed) & (right == closed)

    return [
        ('commutator', 2, lambda cols: commutator(loop, *cols) == commutator_form(loop, *cols)),
        ('iterated-commutator', 3,
         lambda cols: commutator(loop, commutator(loop, cols[0], cols[1]), cols[2]) == iterated_form(loop, *cols)),
        ('associator', 3, lambda cols: associator(loop, *cols) == associator_form(loop, *cols)),
        ('inner-action', 3, inner_action),
        ('conjugation', 2,
         lambda cols: loop.ldiv(cols[1], loop.mul(cols[0], cols[1])) == conjugation_form(loop, *cols))
    ]


def certify_bracket_forms(loop: TripleLoop, plan: Optional[SamplingPlan] = None,
                          samples: Optional[int] = None) -> SuiteReport:
    """Check the five closed forms against definitional evaluation.

    Each form runs exhaustively over a-component tuples (b = c = 0) and on
    random full elements.
    """
    if not isinstance(loop, TripleLoop):
        raise UsageError("bracket-form certification applies to triple loops")
    plan = plan or SamplingPlan.from_config()
    samples = samples or Config.FORMS_RANDOM_SAMPLES
    key = f"forms:{plan.seed}:{samples}"
    cached = loop.cache.get(key)
    if cached is not None:
        return cached

    logger.info(f"🚀 Certifying bracket forms of {loop.name} ({samples} random tuples per form)")
    report = SuiteReport('bracket-forms', metadata={'loop': loop.name, 'samples': samples})
    a_points = loop.a_elements()

    for stream, (name, arity, check) in enumerate(_form_checks(loop)):
        exhaustive = exhaustive_tuples(a_points, arity)
        sampled = plan.rng(arity, 500 + stream).integers(0, loop.order, size=(samples, arity), dtype=np.int64)
        tuples = np.concatenate([exhaustive, sampled])

        def run(lo, hi, tuples=tuples, check=check):
            block = tuples[lo:hi]
            ok = np.asarray(check([block[:, i] for i in range(block.shape[1])]), dtype=bool)
            return np.flatnonzero(~ok) + lo

        failing = np.concatenate(map_chunks(run, len(tuples), plan.threads, plan.chunk_size))
        report.add(SuiteItem(name, Status.FAIL if len(failing) else Status.PASS,
                             checked=len(tuples), mode='exhaustive+sampled', failures=len(failing),
                             witnesses=[tuple(int(v) for v in tuples[i]) for i in failing[:plan.witness_limit]],
                             note=f"{len(exhaustive)} a-component tuples"))

    if report.ok:
        logger.info(f"✅ All five bracket forms certified for {loop.name}")
    else:
        logger.error(f"❌ Bracket forms rejected for {loop.name}: {report.summary()}")
    loop.cache[key] = report
    return report


def forms_certified(loop: Loop) -> bool:
    """Whether the closed forms may be used; certifies with defaults if nothing ran yet."""
    if not isinstance(loop, TripleLoop):
        return False
    reports = [value for key, value in loop.cache.items() if key.startswith('forms:')]
    if not reports:
        reports = [certify_bracket_forms(loop)]
    return any(report.ok for report in reports)
