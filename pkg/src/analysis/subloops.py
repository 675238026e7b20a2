"""
Subloops: generation, normal closure, derived and associator subloops, quotients.
"""

import logging
from typing import Iterable, Optional

import numpy as np

from config import Config
from loops.base import CayleyLoop, Loop, as_index
from loops.triple import TripleLoop
from suites.plan import SamplingPlan
from utils.errors import NotNormalError, SizeGateError
from utils.parallel import chunk_bounds

logger = logging.getLogger(__name__)


class Subloop:
    """A sorted set of element indices of a parent loop."""

    def __init__(self, parent: Loop, elements: Iterable[int], normal: Optional[bool] = None,
                 verified_how: str = 'closure'):
        self.parent = parent
        self.elements = np.unique(as_index(list(elements) if not isinstance(elements, np.ndarray) else elements))
        self.normal = normal
        self.verified_how = verified_how

    @classmethod
    def from_mask(cls, parent: Loop, mask: np.ndarray, **kwargs) -> 'Subloop':
        return cls(parent, np.flatnonzero(mask), **kwargs)

    @classmethod
    def trivial(cls, parent: Loop) -> 'Subloop':
        return cls(parent, [0], normal=True, verified_how='trivial')

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[self.elements] = True
        return mask

    def __len__(self) -> int:
        return self.order

    def __contains__(self, x) -> bool:
        x = int(x)
        i = np.searchsorted(self.elements, x)
        return i < self.order and int(self.elements[i]) == x

    def issubset(self, other: 'Subloop') -> bool:
        return bool(other.mask[self.elements].all())

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subloop):
            return NotImplemented
        return other.parent is self.parent and np.array_equal(self.elements, other.elements)

    __hash__ = None

    def describe(self, limit: int = Config.REPORT_LIST_LIMIT) -> str:
        shown = [self.parent.describe(int(x)) for x in self.elements[:limit]]
        more = f", ... ({self.order - limit} more)" if self.order > limit else ''
        return '{' + ', '.join(shown) + more + '}'

    def __repr__(self) -> str:
        return f"Subloop({self.parent.name}, order={self.order}, normal={self.normal})"


def subloop_generated(loop: Loop, generators: Iterable[int]) -> Subloop:
    """Breadth-first closure under multiplication and both divisions."""
    known = np.zeros(loop.order, dtype=bool)
    known[0] = True
    seeds = np.unique(as_index(list(generators)))
    if len(seeds):
        known[[loop.check_element(g) for g in seeds]] = True
    frontier = np.flatnonzero(known)

    while len(frontier):
        current = np.flatnonzero(known)
        step = max(1, Config.CHUNK_SIZE // max(1, len(current)))
        produced = []
        for lo, hi in chunk_bounds(len(frontier), step):
            f = frontier[lo:hi, None]
            c = current[None, :]
            for op in (loop.mul, loop.ldiv, loop.rdiv):
                produced.append(op(f, c).ravel())
                produced.append(op(c, f).ravel())
        values = np.unique(np.concatenate(produced))
        frontier = values[~known[values]]
        known[frontier] = True

    return Subloop.from_mask(loop, known, verified_how='closure')


def is_normal(loop: Loop, subloop: Subloop) -> bool:
    """Hφ = H for every inner generator φ."""
    from mappings.inner_group import inner_images

    mask = subloop.mask
    step = max(1, Config.CHUNK_SIZE // max(1, loop.order))
    for lo, hi in chunk_bounds(subloop.order, step):
        if not mask[inner_images(loop, subloop.elements[lo:hi])].all():
            return False
    return True


def normal_closure(loop: Loop, generators: Iterable[int]) -> Subloop:
    """Alternate subloop closure with the images under all inner generators until stable."""
    from mappings.inner_group import inner_images

    current = subloop_generated(loop, generators)
    while True:
        mask = current.mask
        images = np.unique(inner_images(loop, current.elements))
        fresh = images[~mask[images]]
        if not len(fresh):
            break
        current = subloop_generated(loop, np.concatenate([current.elements, fresh]))
    current.normal = True
    current.verified_how = 'normal-closure'
    return current


def _bracket_values(loop: Loop, commutators: bool) -> np.ndarray:
    from analysis.brackets import associator, commutator, forms_certified

    if isinstance(loop, TripleLoop) and forms_certified(loop):
        values = [loop.encode(0, 0, np.unique(loop.m111))]
        if commutators:
            # (0, 2aa', ba' - b'a) over all a, a', b, b'
            bs = np.arange(loop.n2)
            for a in range(loop.n1):
                second = loop.dbl2[loop.m11[a, :]]
                third = loop.add3[loop.m21[bs[:, None, None], np.arange(loop.n1)[None, :, None]],
                                  loop.neg3[loop.m21[bs, a]][None, None, :]]
                values.append(np.unique(loop.encode(0, second[None, :, None], third)))
        return np.unique(np.concatenate(values))

    if loop.order > Config.BRACKET_SCAN_CAP:
        raise SizeGateError(f"{loop.name}: bracket scan needs order <= {Config.BRACKET_SCAN_CAP} "
                            f"or certified closed forms")
    el = loop.elements()
    values = []
    if commutators:
        values.append(np.unique(commutator(loop, el[:, None], el[None, :])))
    for x in el:
        values.append(np.unique(associator(loop, x, el[:, None], el[None, :])))
    return np.unique(np.concatenate(values))


def derived_subloop(loop: Loop) -> Subloop:
    """Q′: the normal closure of all commutators and associators."""
    result = normal_closure(loop, _bracket_values(loop, commutators=True))
    result.verified_how = 'derived'
    return result


def associator_subloop(loop: Loop) -> Subloop:
    """A(Q): the normal closure of all associators."""
    result = normal_closure(loop, _bracket_values(loop, commutators=False))
    result.verified_how = 'associator'
    return result


class QuotientLoop(CayleyLoop):
    """Q/H with cosets numbered by their smallest element."""

    def __init__(self, table, parent: Loop, subloop: Subloop, projection: np.ndarray,
                 representatives: np.ndarray):
        super().__init__(table, name=f"{parent.name}/{subloop.order}", validate=False)
        self.parent = parent
        self.subloop = subloop
        self.projection = projection
        self.representatives = representatives

    @property
    def kind(self) -> str:
        return 'quotient'

    def preimage(self, cosets) -> np.ndarray:
        """Mask of parent elements whose coset lies in the given set."""
        chosen = np.zeros(self.order, dtype=bool)
        chosen[as_index(cosets)] = True
        return chosen[self.projection]


def _cosets(loop: Loop, subloop: Subloop):
    """Left cosets xH, each labelled by its smallest element."""
    n = loop.order
    h = subloop.elements
    label = np.full(n, -1, dtype=np.int64)
    representatives = []
    for x in range(n):
        if label[x] >= 0:
            continue
        coset = loop.mul(x, h)
        if (label[coset] >= 0).any():
            raise NotNormalError(f"cosets of {subloop!r} overlap at {loop.describe(x)}")
        label[coset] = len(representatives)
        representatives.append(x)
    return label, np.asarray(representatives, dtype=np.int64)


def quotient(loop: Loop, subloop: Subloop, assume_normal: bool = False,
             plan: Optional[SamplingPlan] = None) -> QuotientLoop:
    """Coset table of Q/H, verifying that products do not depend on representatives."""
    plan = plan or SamplingPlan.from_config()
    if not assume_normal and subloop.normal is None:
        subloop.normal = is_normal(loop, subloop)
    if not assume_normal and subloop.normal is False:
        raise NotNormalError(f"{subloop!r} is not normal in {loop.name}")

    n = loop.order
    if n % subloop.order:
        raise NotNormalError(f"|H| = {subloop.order} does not divide {n}")
    k = n // subloop.order
    if k > Config.CAYLEY_EXPORT_CAP:
        raise SizeGateError(f"quotient of order {k} is above the Cayley cap {Config.CAYLEY_EXPORT_CAP}")

    label, reps = _cosets(loop, subloop)
    if len(reps) != k:
        raise NotNormalError(f"expected {k} cosets, found {len(reps)}")
    table = label[loop.mul(reps[:, None], reps[None, :])]

    def mismatch(x, y) -> Optional[tuple]:
        bad = np.flatnonzero(label[loop.mul(x, y)] != table[label[x], label[y]])
        return (int(x[bad[0]]), int(y[bad[0]])) if len(bad) else None

    witness = None
    if n <= Config.QUOTIENT_FULL_CHECK_CAP:
        el = loop.elements()
        rows = max(1, plan.chunk_size // n)
        for lo, hi in chunk_bounds(n, rows):
            x = np.repeat(el[lo:hi], n)
            y = np.tile(el, hi - lo)
            witness = mismatch(x, y)
            if witness:
                break
        how = 'all pairs'
    else:
        # a second representative per coset, against the first and against itself
        order = np.lexsort((loop.elements(), label))
        starts = np.searchsorted(label[order], np.arange(k))
        second = order[np.minimum(starts + 1, n - 1)]
        i, j = np.divmod(np.arange(k * k, dtype=np.int64), k)
        for x, y in ((second[i], reps[j]), (reps[i], second[j]), (second[i], second[j])):
            witness = mismatch(x, y)
            if witness:
                break
        if not witness:
            sample = plan.rng(2, 4000).integers(0, n, size=(plan.sample_count, 2), dtype=np.int64)
            witness = mismatch(sample[:, 0], sample[:, 1])
        how = 'second representatives + sampled pairs'

    if witness:
        logger.error(f"❌ Quotient {loop.name}/H depends on representatives at {witness}")
        raise NotNormalError(f"coset product depends on representatives at "
                             f"({loop.describe(witness[0])}, {loop.describe(witness[1])})")

    result = QuotientLoop(table, loop, subloop, label, reps)
    subloop.normal = True
    logger.debug(f"Quotient {result.name}: order {k}, representative independence checked on {how}")
    return result


def pull_back(quotient_loop: QuotientLoop, part: Subloop) -> Subloop:
    """Preimage of a subloop of Q/H in the parent loop."""
    return Subloop.from_mask(quotient_loop.parent, quotient_loop.preimage(part.elements),
                             normal=part.normal, verified_how='preimage')
