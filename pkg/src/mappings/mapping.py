"""
Bijections of a loop's index set, under the right-action convention p(φψ) = (pφ)ψ.
"""

import logging
from math import lcm
from typing import Callable, Optional, Tuple

import numpy as np

from config import Config
from loops.base import Loop, as_index
from loops.triple import TripleLoop
from utils.errors import UnknownNameError, UsageError

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]

KIND_ALIASES = {'T': 'T', 'L': 'L', 'Lmap': 'L', 'R': 'R', 'Rmap': 'R'}


class Mapping:
    """A permutation of [0, n), materialized or evaluated on demand."""

    def __init__(self, loop: Loop, kind: str, params: Tuple = (),
                 images: Optional[np.ndarray] = None, evaluator: Optional[Evaluator] = None):
        if images is None and evaluator is None:
            raise UsageError("a mapping needs images or an evaluator")
        self.loop = loop
        self.kind = kind
        self.params = tuple(int(p) for p in params)
        self._images = None if images is None else as_index(images)
        self._evaluator = evaluator

    @property
    def materialized(self) -> bool:
        return self._images is not None

    def apply(self, points) -> np.ndarray:
        points = as_index(points)
        if self._images is not None:
            return self._images[points]
        return as_index(self._evaluator(points))

    __call__ = apply

    @property
    def images(self) -> np.ndarray:
        if self._images is None:
            self._images = self.apply(self.loop.elements())
        return self._images

    def then(self, other: 'Mapping') -> 'Mapping':
        """self followed by other"""
        first, second = self, other
        return Mapping(self.loop, 'composite', (),
                       evaluator=lambda p: second.apply(first.apply(p)))

    __mul__ = then

    def inverse(self) -> 'Mapping':
        images = self.images
        inverse = np.empty_like(images)
        inverse[images] = np.arange(len(images))
        return Mapping(self.loop, 'inverse', (), images=inverse)

    def fingerprint(self, probes: Optional[np.ndarray] = None) -> bytes:
        if probes is None:
            probes = probe_points(self.loop)
        return self.apply(probes).tobytes()

    def is_bijection(self) -> bool:
        images = self.images
        return len(images) == self.loop.order and len(np.unique(images)) == self.loop.order

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, self.loop.elements()))

    def order(self) -> int:
        return permutation_order(self.images)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mapping) or other.loop is not self.loop:
            return NotImplemented
        if self.fingerprint() != other.fingerprint():
            return False
        return bool(np.array_equal(self.images, other.images))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Mapping({self.kind}{self.params}, n={self.loop.order})"


def probe_points(loop: Loop, count: int = Config.PROBE_POINTS) -> np.ndarray:
    """Fixed, evenly spread probe points."""
    count = min(count, loop.order)
    return np.unique(np.linspace(0, loop.order - 1, count).astype(np.int64))


def permutation_order(images: np.ndarray) -> int:
    """lcm of the cycle lengths"""
    images = as_index(images)
    seen = np.zeros(len(images), dtype=bool)
    order = 1
    for start in range(len(images)):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = True
            p = int(images[p])
            length += 1
        order = lcm(order, length)
    return order


def identity_mapping(loop: Loop) -> Mapping:
    return Mapping(loop, 'identity', (), images=loop.elements())


def translation(loop: Loop, x: int, side: str = 'left') -> Mapping:
    """L_x: p ↦ xp, or R_x: p ↦ px"""
    x = loop.check_element(x)
    if side == 'left':
        return Mapping(loop, 'Lx', (x,), evaluator=lambda p: loop.mul(x, p))
    if side == 'right':
        return Mapping(loop, 'Rx', (x,), evaluator=lambda p: loop.mul(p, x))
    raise UsageError(f"translation side must be 'left' or 'right', got {side!r}")


def inner_generator(loop: Loop, kind: str, x: int, y: Optional[int] = None) -> Mapping:
    """T(x), L(x,y) or R(x,y).

    T(x):   p ↦ x\\(px)
    L(x,y): p ↦ (yx)\\(y(xp))
    R(x,y): p ↦ ((px)y)/(xy)
    """
    canonical = KIND_ALIASES.get(kind)
    if canonical is None:
        raise UnknownNameError(f"unknown inner mapping kind '{kind}' (use T, Lmap or Rmap)")
    x = loop.check_element(x)
    if canonical == 'T':
        return Mapping(loop, 'T', (x,), evaluator=lambda p: loop.ldiv(x, loop.mul(p, x)))

    if y is None:
        raise UsageError(f"{kind} needs two elements")
    y = loop.check_element(y)
    if canonical == 'L':
        yx = loop.multiply(y, x)
        return Mapping(loop, 'L', (x, y), evaluator=lambda p: loop.ldiv(yx, loop.mul(y, loop.mul(x, p))))
    xy = loop.multiply(x, y)
    return Mapping(loop, 'R', (x, y), evaluator=lambda p: loop.rdiv(loop.mul(loop.mul(p, x), y), xy))


def apply_s(loop: TripleLoop, points, u, v) -> np.ndarray:
    """(a,b,c)S(u,v) = (a, b+2au, c+av+bu) with u, v given as X1 and X2 indices."""
    a, b, c = loop.decode(points)
    u = as_index(u)
    v = as_index(v)
    new_b = loop.add2[b, loop.dbl2[loop.m11[a, u]]]
    new_c = loop.add3[c, loop.add3[loop.m12[a, v], loop.m21[b, u]]]
    return loop.encode(a, new_b, new_c)


def s_mapping(loop: TripleLoop, u: int, v: int) -> Mapping:
    if not isinstance(loop, TripleLoop):
        raise UsageError("S(u,v) is defined on triple loops only")
    if not (0 <= u < loop.n1 and 0 <= v < loop.n2):
        raise UsageError(f"S parameters ({u}, {v}) out of range")
    return Mapping(loop, 'S', (u, v), evaluator=lambda p: apply_s(loop, p, u, v))


def conjugation_parameters(loop: TripleLoop, x) -> Tuple[np.ndarray, np.ndarray]:
    """H parameters of T(x): T((a',b',c')) = S(a', -b')."""
    a, b, _ = loop.decode(x)
    return a, loop.neg2[b]


def inner_parameters(loop: TripleLoop, x, y) -> Tuple[np.ndarray, np.ndarray]:
    """H parameters of L(x,y) = R(x,y) = S(0, a'a'')."""
    a1, _, _ = loop.decode(x)
    a2, _, _ = loop.decode(y)
    return np.zeros_like(a1), loop.m11[a1, a2]


def all_orders(perms: np.ndarray) -> np.ndarray:
    """Orders of a stack of permutations (rows), by repeated composition."""
    perms = as_index(perms)
    identity = np.arange(perms.shape[1])
    orders = np.zeros(len(perms), dtype=np.int64)
    current = perms.copy()
    k = 1
    while True:
        done = (current == identity).all(axis=1) & (orders == 0)
        orders[done] = k
        if (orders > 0).all():
            return orders
        current = np.take_along_axis(perms, current, axis=1)
        k += 1


def exponent_of(orders: np.ndarray) -> int:
    result = 1
    for value in np.unique(orders).tolist():
        result = lcm(result, int(value))
    return result
