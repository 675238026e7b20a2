"""
Group tables and the Chein double M(G,2).
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from config import Config
from loops.base import CayleyLoop, Loop, as_cayley
from utils.errors import ConstructionRefused

logger = logging.getLogger(__name__)


class GroupTable(CayleyLoop):
    """A Cayley loop verified associative."""

    def __init__(self, table, name: str = 'group', verified_how: str = 'exhaustive', validate: bool = True):
        super().__init__(table, name=name, validate=validate)
        self.verified_how = verified_how
        self.power_associative = True
        self.inverses = self.ldiv_table[np.arange(self.order), 0].astype(np.int64)

    @property
    def kind(self) -> str:
        return 'group'

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]], name: str = 'group') -> 'GroupTable':
        """Table of a permutation group under the right action (pq)[i] = q[p[i]]."""
        perms = [tuple(p) for p in perms]
        index = {p: i for i, p in enumerate(perms)}
        arr = np.asarray(perms, dtype=np.int64)
        table = np.empty((len(perms), len(perms)), dtype=np.int64)
        for i, p in enumerate(arr):
            for j, q in enumerate(arr):
                product = tuple(int(v) for v in q[p])
                if product not in index:
                    raise ConstructionRefused(f"permutations are not closed: {perms[i]}·{perms[j]}")
                table[i, j] = index[product]
        return verify_group(CayleyLoop(table, name=name))


def generating_set(loop: CayleyLoop) -> List[int]:
    """Greedy generators: every element is a left-bracketed product of them."""
    n = loop.order
    reached = np.zeros(n, dtype=bool)
    reached[0] = True
    generators: List[int] = []
    while not reached.all():
        g = int(np.flatnonzero(~reached)[0])
        generators.append(g)
        frontier = np.flatnonzero(reached)
        while len(frontier):
            images = np.unique(loop.table[np.ix_(frontier, generators)].ravel())
            fresh = images[~reached[images]]
            reached[fresh] = True
            frontier = fresh
    return generators


def verify_group(loop: Loop, generators: Optional[Sequence[int]] = None) -> GroupTable:
    """Verify associativity and return the loop as a GroupTable.

    Exhaustive over all triples for small orders; above that, Light's test:
    (xg)y = x(gy) for all x, y and every g in a generating set.
    """
    cayley = as_cayley(loop)
    table = cayley.table.astype(np.int64)
    n = cayley.order

    if generators is None and n <= Config.GROUP_ASSOC_EXHAUSTIVE_CAP:
        how = 'exhaustive'
        middles = range(n)
    else:
        how = 'light'
        middles = list(generators) if generators is not None else generating_set(cayley)
        logger.debug(f"Light's test on {cayley.name} with {len(middles)} generators")

    for g in middles:
        # (x g) y vs x (g y) for all x, y
        left = table[table[:, g], :]
        right = table[:, table[g, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            x, y = (int(v) for v in bad[0])
            raise ConstructionRefused(f"{cayley.name} is not associative: ({x}·{g})·{y} != {x}·({g}·{y})")

    group = GroupTable(cayley.table, name=cayley.name, verified_how=how, validate=False)
    logger.debug(f"{group.name}: associativity verified ({how})")
    return group


def chein_double(group: GroupTable, name: Optional[str] = None) -> CayleyLoop:
    """M(G,2) on G ∪ Gu with index g for g and n+g for gu.

    g·h = gh, g·(hu) = (hg)u, (gu)·h = (gh⁻¹)u, (gu)·(hu) = h⁻¹g
    """
    if not isinstance(group, GroupTable):
        group = verify_group(group)
    t = group.table.astype(np.int64)
    inv = group.inverses
    n = group.order
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    table[:n, :n] = t
    table[:n, n:] = n + t.T
    table[n:, :n] = n + t[:, inv]
    table[n:, n:] = t[inv, :].T
    return CayleyLoop(table, name=name or f"chein-{group.name}")
