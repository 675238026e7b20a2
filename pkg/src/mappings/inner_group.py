"""
The inner mapping group: generators, closure, and the parametric form on triple loops.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from config import Config
from loops.base import Loop, as_cayley
from loops.groups import GroupTable
from loops.triple import TripleLoop
from mappings.mapping import all_orders, apply_s, exponent_of, inner_parameters
from suites.plan import SamplingPlan
from utils.errors import SizeGateError, UsageError
from utils.parallel import chunk_bounds, map_chunks
from utils.suite_report import Status, SuiteItem, SuiteReport

logger = logging.getLogger(__name__)


class HGroup:
    """Pairs (u,v) in X1 × X2 with (u,v)(u',v') = (u+u', v+v'+2uu'), indexed u·|X2| + v."""

    def __init__(self, loop: TripleLoop):
        self.loop = loop
        self.n1 = loop.n1
        self.n2 = loop.n2
        self.order = self.n1 * self.n2
        self._table: Optional[np.ndarray] = None

    def split(self, h):
        return np.divmod(np.asarray(h, dtype=np.int64), self.n2)

    def join(self, u, v) -> np.ndarray:
        return np.asarray(u, dtype=np.int64) * self.n2 + np.asarray(v, dtype=np.int64)

    def mul(self, h, g) -> np.ndarray:
        lp = self.loop
        u, v = self.split(h)
        u2, v2 = self.split(g)
        return self.join(lp.add1[u, u2], lp.add2[lp.add2[v, v2], lp.dbl2[lp.m11[u, u2]]])

    def inv(self, h) -> np.ndarray:
        lp = self.loop
        u, v = self.split(h)
        nu = lp.neg1[u]
        return self.join(nu, lp.neg2[lp.add2[v, lp.dbl2[lp.m11[u, nu]]]])

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def table(self) -> Optional[np.ndarray]:
        """Full product table when it fits the point budget."""
        if self._table is None and self.order ** 2 <= Config.MATERIALIZED_POINT_BUDGET:
            el = self.elements()
            self._table = self.mul(el[:, None], el[None, :]).astype(np.int32)
        return self._table

    def element_orders(self, elements: Optional[np.ndarray] = None) -> np.ndarray:
        elements = self.elements() if elements is None else np.asarray(elements, dtype=np.int64)
        orders = np.zeros(len(elements), dtype=np.int64)
        current = elements.copy()
        k = 1
        while True:
            done = (current == 0) & (orders == 0)
            orders[done] = k
            if (orders > 0).all():
                return orders
            current = self.mul(current, elements)
            k += 1


@dataclass
class InnerGroup:
    loop: Loop
    order: int
    abelian: bool
    exponent: int
    complete: bool
    mode: str
    generator_count: int
    images: Optional[np.ndarray] = None
    params: Optional[np.ndarray] = None
    hgroup: Optional[HGroup] = None
    notes: List[str] = field(default_factory=list)

    def fixed_points(self) -> np.ndarray:
        """Points fixed by every element of the closure."""
        n = self.loop.order
        fixed = np.ones(n, dtype=bool)
        if self.mode == 'materialized':
            fixed &= (self.images == np.arange(n)).all(axis=0)
            return np.flatnonzero(fixed)
        u, v = self.hgroup.split(self.params)
        points = self.loop.elements()
        step = max(1, Config.CHUNK_SIZE // n)
        for lo in range(0, len(self.params), step):
            images = apply_s(self.loop, points[None, :], u[lo:lo + step, None], v[lo:lo + step, None])
            fixed &= (images == points[None, :]).all(axis=0)
        return np.flatnonzero(fixed)

    def to_group_table(self) -> GroupTable:
        """The closure as a group table, elements in lexicographic order of image arrays."""
        if not self.complete:
            raise SizeGateError("cannot export an incomplete inner mapping group")
        if self.mode == 'materialized':
            return _materialized_table(self.images, f"inn-{self.loop.name}")
        return _parametric_table(self.loop, self.hgroup, self.params, f"inn-{self.loop.name}")


def _materialized_table(images: np.ndarray, name: str) -> GroupTable:
    order = np.lexsort(images.T[::-1])
    perms = images[order]
    index: Dict[bytes, int] = {p.tobytes(): i for i, p in enumerate(perms)}
    g = len(perms)
    table = np.empty((g, g), dtype=np.int64)
    for i in range(g):
        # element i followed by element j: p ↦ perms[j][perms[i][p]]
        composed = perms[:, perms[i]]
        for j in range(g):
            table[i, j] = index[composed[j].tobytes()]
    return GroupTable(table, name=name, verified_how='permutation-composition')


def _parametric_table(loop: TripleLoop, hgroup: HGroup, params: np.ndarray, name: str) -> GroupTable:
    u, v = hgroup.split(params)
    points = loop.elements()
    length = min(Config.PROBE_POINTS, loop.order)
    while True:
        prefix = apply_s(loop, points[None, :length], u[:, None], v[:, None])
        if len(np.unique(prefix, axis=0)) == len(params) or length == loop.order:
            break
        length = min(2 * length, loop.order)
    order = np.lexsort(prefix.T[::-1])
    sorted_params = params[order]
    position = np.full(hgroup.order, -1, dtype=np.int64)
    position[sorted_params] = np.arange(len(sorted_params))
    table = position[hgroup.mul(sorted_params[:, None], sorted_params[None, :])]
    return GroupTable(table, name=name, verified_how='permutation-composition')


def generator_images(loop: Loop) -> np.ndarray:
    """Deduplicated images of all T(x), L(x,y), R(x,y), sorted lexicographically."""
    cached = loop.cache.get('inner_generators')
    if cached is not None:
        return cached
    if loop.order > Config.INNER_GENERATOR_CAP:
        raise SizeGateError(f"{loop.name}: order {loop.order} is above the inner generator cap "
                            f"{Config.INNER_GENERATOR_CAP}")
    cayley = as_cayley(loop)
    t = cayley.table.astype(np.int64)
    ld = cayley.ldiv_table.astype(np.int64)
    rd = cayley.rdiv_table.astype(np.int64)
    n = cayley.order
    p = np.arange(n)
    row_bytes = n * np.dtype(np.int64).itemsize
    void = np.dtype((np.void, row_bytes))

    def dedup(block: np.ndarray) -> np.ndarray:
        block = np.ascontiguousarray(block, dtype=np.int64)
        _, keep = np.unique(block.view(void).ravel(), return_index=True)
        return block[np.sort(keep)]

    # T(x): p ↦ x\(px)
    blocks = [dedup(ld[p[:, None], t[p[None, :], p[:, None]]])]
    for x in range(n):
        yx = t[p, x]
        xp = t[x, p]
        left = ld[yx[:, None], t[p[:, None], xp[None, :]]]
        xy = t[x, p]
        right = rd[t[t[p, x][None, :], p[:, None]], xy[:, None]]
        blocks.append(dedup(np.concatenate([left, right])))
    images = dedup(np.concatenate(blocks))
    images = images[np.lexsort(images.T[::-1])]
    loop.cache['inner_generators'] = images
    logger.debug(f"{loop.name}: {len(images)} distinct inner generators")
    return images


def inner_images(loop: Loop, points: np.ndarray) -> np.ndarray:
    """Images of the points under every inner generator, one row per generator."""
    points = np.asarray(points, dtype=np.int64)
    if isinstance(loop, TripleLoop) and inner_form_certified(loop):
        hg = HGroup(loop)
        u, v = hg.split(hg.elements())
        return apply_s(loop, points[None, :], u[:, None], v[:, None])
    return generator_images(loop)[:, points]


def _parametric_generators(loop: TripleLoop, hg: HGroup) -> np.ndarray:
    a = np.arange(loop.n1)
    b = np.arange(loop.n2)
    conj = hg.join(a[:, None], loop.neg2[b][None, :]).ravel()
    lr = hg.join(0, loop.m11.ravel())
    return np.unique(np.concatenate([conj, lr]))


def _closure_parametric(loop: TripleLoop, budget: int) -> InnerGroup:
    hg = HGroup(loop)
    gens = _parametric_generators(loop, hg)
    known = np.zeros(hg.order, dtype=bool)
    known[0] = True
    frontier = np.array([0], dtype=np.int64)
    complete = True
    while len(frontier):
        products = np.unique(hg.mul(frontier[:, None], gens[None, :]).ravel())
        fresh = products[~known[products]]
        known[fresh] = True
        frontier = fresh
        if known.sum() > budget:
            complete = False
            break
    params = np.flatnonzero(known)

    abelian = True
    step = max(1, Config.CHUNK_SIZE // max(1, len(gens)))
    for lo in range(0, len(gens), step):
        rows = gens[lo:lo + step, None]
        if not np.array_equal(hg.mul(rows, gens[None, :]), hg.mul(gens[None, :], rows)):
            abelian = False
            break

    exponent = exponent_of(hg.element_orders(params))
    return InnerGroup(loop, len(params), abelian, exponent, complete, 'parametric',
                      len(gens), params=params, hgroup=hg)


def _closure_materialized(loop: Loop, budget: int) -> InnerGroup:
    gens = generator_images(loop)
    n = loop.order
    identity = np.arange(n, dtype=np.int64)
    known: Dict[bytes, int] = {identity.tobytes(): 0}
    elements = [identity]
    frontier = [identity]
    complete = True
    point_budget = Config.MATERIALIZED_POINT_BUDGET

    while frontier and complete:
        block = np.stack(frontier)
        frontier = []
        for g in gens:
            # element followed by generator
            for image in g[block]:
                key = image.tobytes()
                if key not in known:
                    known[key] = len(elements)
                    elements.append(image)
                    frontier.append(image)
            if len(elements) > budget or len(elements) * n > point_budget:
                complete = False
                break

    images = np.stack(elements)
    abelian = True
    for g in gens:
        if not np.array_equal(gens[:, g], g[gens]):
            abelian = False
            break
    exponent = exponent_of(all_orders(images))
    return InnerGroup(loop, len(images), abelian, exponent, complete, 'materialized',
                      len(gens), images=images)


def inner_group_closure(loop: Loop, generator_policy: str = 'auto',
                        budget: Optional[int] = None) -> InnerGroup:
    """Close the inner generators under composition.

    Policies: 'auto' uses parameter space for certified triple loops, 'parametric'
    requires it, 'materialized' always composes image arrays.
    """
    budget = budget or Config.CLOSURE_BUDGET
    key = f"inner_group:{generator_policy}:{budget}"
    cached = loop.cache.get(key)
    if cached is not None:
        return cached

    if generator_policy not in ('auto', 'parametric', 'materialized'):
        raise UsageError(f"unknown generator policy '{generator_policy}'")

    logger.info(f"🚀 Closing inner mapping group of {loop.name} ({generator_policy})")
    result = None
    if generator_policy != 'materialized' and isinstance(loop, TripleLoop):
        if inner_form_certified(loop):
            result = _closure_parametric(loop, budget)
        else:
            logger.warning(f"⚠️ {loop.name}: inner form not certified, falling back to permutations")
    elif generator_policy == 'parametric':
        raise UsageError("parametric closure needs a triple loop")

    if result is None:
        result = _closure_materialized(loop, budget)
        if isinstance(loop, TripleLoop):
            result.notes.append('materialized fallback')

    if not result.complete:
        logger.warning(f"⚠️ {loop.name}: closure budget {budget} exceeded, result incomplete")
    logger.info(f"📊 Inn({loop.name}): order {result.order}, abelian {result.abelian}, "
                f"exponent {result.exponent}, mode {result.mode}")
    loop.cache[key] = result
    return result


def _item(name: str, failing: List[tuple], failures: int, checked: int, mode: str,
          limit: int, note: str = '') -> SuiteItem:
    return SuiteItem(name, Status.FAIL if failures else Status.PASS, checked=checked, mode=mode,
                     failures=failures, witnesses=failing[:limit], note=note)


def _merge(parts) -> tuple:
    witnesses = [w for chunk_witnesses, _ in parts for w in chunk_witnesses]
    return witnesses, sum(count for _, count in parts)


def certify_inner_form(loop: TripleLoop, plan: Optional[SamplingPlan] = None) -> SuiteReport:
    """Certify that Inn is the S(u,v) family on a triple loop.

    1. T((a',b',c')) = S(a',-b') on all points for all parameters
    2. L(x,y) = R(x,y) = S(0, a'a''): all a-component pairs on all points,
       plus random full pairs on probe points
    3. S(h)S(g) = S(hg) for all h, g in H on probe points
    4. the |X1|·|X2| maps S(u,v) are pairwise distinct
    """
    if not isinstance(loop, TripleLoop):
        raise UsageError("inner-form certification applies to triple loops")
    plan = plan or SamplingPlan.from_config()
    key = f"inner_form:{plan.seed}"
    cached = loop.cache.get(key)
    if cached is not None:
        return cached

    n = loop.order
    limit = plan.witness_limit
    hg = HGroup(loop)
    report = SuiteReport('inner-form', metadata={'loop': loop.name, 'h_order': hg.order})
    logger.info(f"🚀 Certifying inner form of {loop.name}")

    # 1. conjugation, (x, p) over all n^2 pairs
    def conjugation(lo, hi):
        q = np.arange(lo, hi, dtype=np.int64)
        x, p = np.divmod(q, n)
        direct = loop.ldiv(x, loop.mul(p, x))
        a, b, _ = loop.decode(x)
        closed = apply_s(loop, p, a, loop.neg2[b])
        bad = np.flatnonzero(direct != closed)
        return [(int(x[i]), int(p[i])) for i in bad[:limit]], len(bad)

    witnesses, failures = _merge(map_chunks(conjugation, n * n, plan.threads, plan.chunk_size))
    report.add(_item('conjugation', witnesses, failures, n * n, 'exhaustive', limit))

    # 2a. L and R for all a-component pairs on all points
    n1 = loop.n1

    def lr_pairs(lo, hi):
        q = np.arange(lo, hi, dtype=np.int64)
        pair, p = np.divmod(q, n)
        a1, a2 = np.divmod(pair, n1)
        x = loop.encode(a1, 0, 0)
        y = loop.encode(a2, 0, 0)
        closed = apply_s(loop, p, 0, loop.m11[a1, a2])
        left = loop.ldiv(loop.mul(y, x), loop.mul(y, loop.mul(x, p)))
        right = loop.rdiv(loop.mul(loop.mul(p, x), y), loop.mul(x, y))
        bad = np.flatnonzero((left != closed) | (right != closed))
        return [(int(x[i]), int(y[i]), int(p[i])) for i in bad[:limit]], len(bad)

    total = n1 * n1 * n
    witnesses, failures = _merge(map_chunks(lr_pairs, total, plan.threads, plan.chunk_size))
    report.add(_item('left-right-a-pairs', witnesses, failures, total, 'exhaustive', limit))

    # 2b. random full pairs on probe points
    rng = plan.rng(2, 77)
    pairs = rng.integers(0, n, size=(Config.INNER_FULL_PAIR_SAMPLES, 2), dtype=np.int64)
    probes = plan.points(n, Config.PROBE_POINTS)
    x = pairs[:, 0, None]
    y = pairs[:, 1, None]
    p = probes[None, :]
    _, v = inner_parameters(loop, x, y)
    closed = apply_s(loop, p, 0, v)
    left = loop.ldiv(loop.mul(y, x), loop.mul(y, loop.mul(x, p)))
    right = loop.rdiv(loop.mul(loop.mul(p, x), y), loop.mul(x, y))
    bad = np.argwhere((left != closed) | (right != closed))
    witnesses = [(int(pairs[i, 0]), int(pairs[i, 1]), int(probes[j])) for i, j in bad[:limit]]
    report.add(_item('left-right-full-pairs', witnesses, len(bad), pairs.shape[0] * len(probes),
                     'sampled', limit))

    # 3. composition law over H x H, on each probe's fiber {(a_p, *, *)}
    fiber = loop.n2 * loop.n3
    h_all = hg.elements()
    u_all, v_all = hg.split(h_all)
    product_table = hg.table()
    rows_per_chunk = max(1, plan.chunk_size // hg.order)

    def composition(lo, hi):
        found, count = [], 0
        for probe in probes[lo:hi]:
            a_p = int(probe) // fiber
            base = a_p * fiber
            fiber_points = base + np.arange(fiber, dtype=np.int64)
            moves = apply_s(loop, fiber_points[None, :], u_all[:, None], v_all[:, None]) - base
            start = int(probe) - base
            for r_lo, r_hi in chunk_bounds(hg.order, rows_per_chunk):
                rows = h_all[r_lo:r_hi]
                first = moves[rows, start]
                lhs = moves[:, first].T
                if product_table is not None:
                    prod = product_table[r_lo:r_hi]
                else:
                    prod = hg.mul(rows[:, None], h_all[None, :])
                rhs = moves[prod, start]
                bad = np.argwhere(lhs != rhs)
                count += len(bad)
                found.extend((int(rows[i]), int(j), int(probe)) for i, j in bad[:limit])
        return found[:limit], count

    witnesses, failures = _merge(map_chunks(composition, len(probes), plan.threads, 1))
    report.add(_item('composition', witnesses, failures, hg.order ** 2 * len(probes), 'exhaustive', limit,
                     note=f"{len(probes)} probe points"))

    # 4. distinctness through fingerprints, collisions confirmed on all points
    fingerprints = apply_s(loop, probes[None, :], u_all[:, None], v_all[:, None])
    _, first_index, inverse = np.unique(fingerprints, axis=0, return_index=True, return_inverse=True)
    inverse = np.ravel(inverse)
    duplicates = []
    points = loop.elements()
    for h in np.flatnonzero(first_index[inverse] != h_all):
        g = int(first_index[inverse[h]])
        same = np.array_equal(apply_s(loop, points, u_all[h], v_all[h]),
                              apply_s(loop, points, u_all[g], v_all[g]))
        if same:
            duplicates.append((g, int(h)))
    report.add(_item('distinct', duplicates, len(duplicates), hg.order, 'exhaustive', limit,
                     note=f"{len(first_index)} distinct fingerprints"))
    report.metadata['maps'] = hg.order - len(duplicates)

    if report.ok:
        logger.info(f"✅ Inner form certified for {loop.name}: {report.metadata['maps']} maps")
    else:
        logger.error(f"❌ Inner form certification failed for {loop.name}: {report.summary()}")
    loop.cache[key] = report
    return report


def inner_form_certified(loop: TripleLoop) -> bool:
    """Whether some inner-form certification of this loop passed; certifies with defaults if none ran."""
    reports = [value for key, value in loop.cache.items() if key.startswith('inner_form:')]
    if not reports:
        reports = [certify_inner_form(loop)]
    return any(report.ok for report in reports)
