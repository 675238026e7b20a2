"""
Shipped test corpus of loops.
"""

import itertools
import logging
from functools import lru_cache
from typing import Callable, Dict

import numpy as np

from algebra.ring import load_ring_preset
from loops.base import CayleyLoop, Loop
from loops.groups import GroupTable, chein_double, verify_group
from loops.triple import build_bruck_loop
from utils.errors import ConstructionRefused, UnknownNameError

logger = logging.getLogger(__name__)

NASSOC5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 3, 4, 0, 1],
    [3, 4, 1, 2, 0],
    [4, 2, 0, 1, 3]
]


def cyclic(n: int, name: str) -> GroupTable:
    i = np.arange(n)
    return GroupTable((i[:, None] + i[None, :]) % n, name=name)


def symmetric3() -> GroupTable:
    return GroupTable.from_permutations(list(itertools.permutations(range(3))), name='s3')


def dihedral8() -> GroupTable:
    """(i,j)(k,l) = (i + (-1)^j k mod 4, j + l mod 2) at index 2i + j."""
    idx = np.arange(8)
    i, j = np.divmod(idx, 2)
    sign = np.where(j == 1, -1, 1)
    first = (i[:, None] + sign[:, None] * i[None, :]) % 4
    second = (j[:, None] + j[None, :]) % 2
    return verify_group(CayleyLoop(2 * first + second, name='d4'))


def heisenberg27() -> GroupTable:
    """Upper unitriangular 3x3 matrices over Z_3: (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')."""
    idx = np.arange(27)
    x, rest = np.divmod(idx, 9)
    y, z = np.divmod(rest, 3)
    nx = (x[:, None] + x[None, :]) % 3
    ny = (y[:, None] + y[None, :]) % 3
    nz = (z[:, None] + z[None, :] + x[:, None] * y[None, :]) % 3
    return verify_group(CayleyLoop(9 * nx + 3 * ny + nz, name='heis27'))


def commutative_moufang81() -> CayleyLoop:
    """Z_3^4 with x∘y = x + y + (0, 0, 0, (x1 - y1)(x2 y3 - x3 y2))."""
    idx = np.arange(81)
    digits = np.stack(np.unravel_index(idx, (3, 3, 3, 3)), axis=1)
    x = digits[:, None, :]
    y = digits[None, :, :]
    s = (x + y) % 3
    extra = (x[..., 0] - y[..., 0]) * (x[..., 1] * y[..., 2] - x[..., 2] * y[..., 1])
    s[..., 3] = (s[..., 3] + extra) % 3
    table = ((s[..., 0] * 3 + s[..., 1]) * 3 + s[..., 2]) * 3 + s[..., 3]
    loop = CayleyLoop(table, name='cml81')
    _verify_cml(loop)
    return loop


def _verify_cml(loop: CayleyLoop):
    """Commutative, Moufang and nonassociative, checked exhaustively."""
    t = loop.table.astype(np.int64)
    if not loop.is_commutative():
        raise ConstructionRefused("cml81 table is not commutative")
    idx = np.arange(loop.order)
    x, y, z = idx[:, None, None], idx[None, :, None], idx[None, None, :]
    if not np.array_equal(t[x, t[y, t[x, z]]], t[t[t[x, y], x], z]):
        raise ConstructionRefused("cml81 table is not Moufang")
    if np.array_equal(t[t[x, y], z], t[x, t[y, z]]):
        raise ConstructionRefused("cml81 table is associative")


BUILDERS: Dict[str, Callable[[], Loop]] = {
    'paper-z4': lambda: build_bruck_loop(load_ring_preset('paper-z4')),
    'paper-z3': lambda: build_bruck_loop(load_ring_preset('paper-z3')),
    'c3': lambda: cyclic(3, 'c3'),
    'c4': lambda: cyclic(4, 'c4'),
    's3': symmetric3,
    'd4': dihedral8,
    'heis27': heisenberg27,
    'cml81': commutative_moufang81,
    'nassoc5': lambda: CayleyLoop(NASSOC5, name='nassoc5'),
    'chein-s3': lambda: chein_double(symmetric3(), name='chein-s3')
}

PRESET_NAMES = tuple(BUILDERS)


@lru_cache(maxsize=None)
def preset(name: str) -> Loop:
    """Build a shipped loop by name; instances are shared per process."""
    builder = BUILDERS.get(name)
    if builder is None:
        raise UnknownNameError(f"unknown preset '{name}' (known: {', '.join(PRESET_NAMES)})")
    loop = builder()
    logger.debug(f"Preset {name}: order {loop.order}")
    return loop
