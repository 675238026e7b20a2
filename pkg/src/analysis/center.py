"""
Center and nucleus.

Cayley loops run a commutant pass, then an associator pass on the survivors.
Certified triple loops solve both in component space.
"""

import logging
from typing import Optional

import numpy as np

from config import Config
from analysis.brackets import forms_certified
from analysis.subloops import Subloop
from loops.base import CayleyLoop, Loop, as_cayley
from loops.groups import GroupTable
from loops.triple import TripleLoop
from suites.plan import SamplingPlan
from utils.errors import SizeGateError
from utils.parallel import chunk_bounds

logger = logging.getLogger(__name__)


def _associates(t: np.ndarray, s: int, chunk_size: int) -> bool:
    """[s,y,z] = [y,s,z] = [y,z,s] = 1 for all y, z."""
    n = t.shape[0]
    row_s, col_s = t[s, :], t[:, s]
    for lo, hi in chunk_bounds(n, max(1, chunk_size // n)):
        ys = np.arange(lo, hi)
        block = t[ys, :]
        # (sy)z = s(yz)
        if not np.array_equal(t[row_s[ys], :], t[s, block]):
            return False
        # (ys)z = y(sz)
        if not np.array_equal(t[col_s[ys], :], t[ys[:, None], row_s[None, :]]):
            return False
        # (yz)s = y(zs)
        if not np.array_equal(col_s[block], t[ys[:, None], col_s[None, :]]):
            return False
    return True


def _prefilter(t: np.ndarray, candidates: np.ndarray, plan: SamplingPlan) -> np.ndarray:
    """Drop candidates failing the associator test on random pairs."""
    n = t.shape[0]
    pairs = plan.rng(2, 5000).integers(0, n, size=(Config.CENTER_PREFILTER_PAIRS, 2), dtype=np.int64)
    y, z = pairs[:, 0][None, :], pairs[:, 1][None, :]
    yz = t[y, z]
    keep = np.ones(len(candidates), dtype=bool)
    step = max(1, plan.chunk_size // len(pairs))
    for lo, hi in chunk_bounds(len(candidates), step):
        s = candidates[lo:hi, None]
        ok = t[t[s, y], z] == t[s, yz]
        ok &= t[t[y, s], z] == t[y, t[s, z]]
        ok &= t[yz, s] == t[y, t[z, s]]
        keep[lo:hi] = ok.all(axis=1)
    return candidates[keep]


def _associating_mask(cayley: CayleyLoop, candidates: np.ndarray, plan: SamplingPlan,
                      prefilter: bool) -> np.ndarray:
    t = cayley.table
    if prefilter and len(candidates):
        before = len(candidates)
        candidates = _prefilter(t, candidates, plan)
        logger.debug(f"{cayley.name}: prefilter kept {len(candidates)} of {before} candidates")
    mask = np.zeros(cayley.order, dtype=bool)
    for s in candidates:
        if _associates(t, int(s), plan.chunk_size):
            mask[s] = True
    return mask


def cayley_center_mask(cayley: CayleyLoop, plan: Optional[SamplingPlan] = None) -> np.ndarray:
    plan = plan or SamplingPlan.from_config()
    t = cayley.table
    commutant = (t == t.T).all(axis=1)
    candidates = np.flatnonzero(commutant)
    logger.debug(f"{cayley.name}: {len(candidates)} elements in the commutant")
    if isinstance(cayley, GroupTable):
        return commutant
    return _associating_mask(cayley, candidates, plan, prefilter=cayley.order > Config.CENTER_FULL_SCAN_CAP)


def central_step_triple(loop: TripleLoop, inside: np.ndarray) -> np.ndarray:
    """Mask of x whose commutators and associators with everything lie in the given set.

    Relies on the certified closed forms: [x,y] = (0, 2aa', ba'−b'a) and
    associators (0,0,·) in all three positions.
    """
    inside = np.asarray(inside, dtype=bool)
    n1, n2, n3 = loop.n1, loop.n2, loop.n3
    m111 = loop.m111
    # (0,0,c) has flat index c
    assoc_ok = (inside[m111].all(axis=(1, 2))
                & inside[m111.transpose(1, 0, 2)].all(axis=(1, 2))
                & inside[m111.transpose(2, 0, 1)].all(axis=(1, 2)))

    comm_ok = np.zeros((n1, n2), dtype=bool)
    # m21[b, a'] indexed (b, a'), the b' term broadcast last
    term1 = loop.m21[:, :, None]
    for a in np.flatnonzero(assoc_ok):
        second = loop.dbl2[loop.m11[a, :]]
        third = loop.add3[term1, loop.neg3[loop.m21[:, a]][None, None, :]]
        flat = second[None, :, None] * n3 + third
        comm_ok[a] = inside[flat].all(axis=(1, 2))

    ok = assoc_ok[:, None] & comm_ok
    return np.broadcast_to(ok[:, :, None], (n1, n2, n3)).ravel().copy()


def center(loop: Loop, plan: Optional[SamplingPlan] = None) -> Subloop:
    """Z(Q): elements that commute and associate with everything."""
    cached = loop.cache.get('center')
    if cached is not None:
        return cached

    if isinstance(loop, TripleLoop) and forms_certified(loop):
        inside = np.zeros(loop.order, dtype=bool)
        inside[0] = True
        result = Subloop.from_mask(loop, central_step_triple(loop, inside), normal=True,
                                   verified_how='parametric')
    else:
        cayley = as_cayley(loop)
        result = Subloop.from_mask(loop, cayley_center_mask(cayley, plan), normal=True,
                                   verified_how='two-phase scan')

    logger.info(f"📊 Z({loop.name}): order {result.order} ({result.verified_how})")
    loop.cache['center'] = result
    return result


def nucleus(loop: Loop, plan: Optional[SamplingPlan] = None) -> Subloop:
    """N(Q): elements associating with all pairs in all three positions."""
    cached = loop.cache.get('nucleus')
    if cached is not None:
        return cached
    plan = plan or SamplingPlan.from_config()

    if isinstance(loop, GroupTable):
        result = Subloop(loop, loop.elements(), normal=True, verified_how='group')
    elif isinstance(loop, TripleLoop) and forms_certified(loop):
        # associators depend on a-components only
        m111 = loop.m111
        a_ok = ((m111 == 0).all(axis=(1, 2))
                & (m111.transpose(1, 0, 2) == 0).all(axis=(1, 2))
                & (m111.transpose(2, 0, 1) == 0).all(axis=(1, 2)))
        mask = np.repeat(a_ok, loop.n2 * loop.n3)
        result = Subloop.from_mask(loop, mask, normal=True, verified_how='parametric')
    elif loop.order <= Config.NUCLEUS_CAYLEY_CAP:
        cayley = as_cayley(loop)
        mask = _associating_mask(cayley, cayley.elements(), plan, prefilter=True)
        result = Subloop.from_mask(loop, mask, normal=True, verified_how='cayley scan')
    else:
        raise SizeGateError(f"nucleus of {loop.name} (order {loop.order}) needs order <= "
                            f"{Config.NUCLEUS_CAYLEY_CAP} or certified closed forms")

    logger.info(f"📊 N({loop.name}): order {result.order} ({result.verified_how})")
    loop.cache['nucleus'] = result
    return result
