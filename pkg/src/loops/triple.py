"""
Loops on X1 × X2 × X3 built from a structure-constant ring.

Elements are flat indices (a·|X2| + b)·|X3| + c over the graded-part
enumerations, and every operation runs in index space through tables.
"""

import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from algebra.ring import (GradedParts, RingSpec, check_ring_axioms, format_vector, graded_parts,
                          resolve_ring, ring_mul_many)
from loops.base import Loop, as_index
from utils.errors import ConstructionRefused, RingValidationError

logger = logging.getLogger(__name__)


def _addition_tables(part) -> Tuple[np.ndarray, np.ndarray]:
    el = part.elements
    sums = (el[:, None, :] + el[None, :, :]).reshape(-1, el.shape[1])
    add = part.index_of(sums).reshape(len(el), len(el))
    neg = part.index_of(-el)
    return add, neg


def _product_table(spec: RingSpec, left, right, target) -> np.ndarray:
    products = ring_mul_many(spec, left.elements[:, None, :], right.elements[None, :, :])
    try:
        return target.index_of(products.reshape(-1, spec.dim)).reshape(len(left), len(right))
    except RingValidationError as e:
        raise ConstructionRefused(f"{left.name}·{right.name} is not contained in {target.name}: {e}")


class TripleLoop(Loop):
    """(a,b,c)(a',b',c') = (a+a', b+b'+aa', c+c'+ba')"""

    def __init__(self, spec: RingSpec, parts: GradedParts, name: Optional[str] = None):
        self.spec = spec
        self.parts = parts
        self.n1, self.n2, self.n3 = parts.sizes
        super().__init__(self.n1 * self.n2 * self.n3, name or spec.name)

        self.add1, self.neg1 = _addition_tables(parts.x1)
        self.add2, self.neg2 = _addition_tables(parts.x2)
        self.add3, self.neg3 = _addition_tables(parts.x3)
        self.m11 = _product_table(spec, parts.x1, parts.x1, parts.x2)
        self.m21 = _product_table(spec, parts.x2, parts.x1, parts.x3)
        self.m12 = _product_table(spec, parts.x1, parts.x2, parts.x3)
        self.dbl2 = self.add2[np.arange(self.n2), np.arange(self.n2)]
        self.dbl3 = self.add3[np.arange(self.n3), np.arange(self.n3)]
        # m111[a, a', a''] = (a a') a''
        self.m111 = self.m21[self.m11, :]

    @property
    def kind(self) -> str:
        return 'triple'

    def decode(self, x) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = as_index(x)
        ab, c = np.divmod(x, self.n3)
        a, b = np.divmod(ab, self.n2)
        return a, b, c

    def encode(self, a, b, c) -> np.ndarray:
        return (as_index(a) * self.n2 + as_index(b)) * self.n3 + as_index(c)

    def mul(self, x, y) -> np.ndarray:
        a, b, c = self.decode(x)
        a2, b2, c2 = self.decode(y)
        return self.encode(self.add1[a, a2],
                           self.add2[self.add2[b, b2], self.m11[a, a2]],
                           self.add3[self.add3[c, c2], self.m21[b, a2]])

    def ldiv(self, x, z) -> np.ndarray:
        a, b, c = self.decode(x)
        a2, b2, c2 = self.decode(z)
        a1 = self.add1[a2, self.neg1[a]]
        b1 = self.add2[self.add2[b2, self.neg2[b]], self.neg2[self.m11[a, a1]]]
        c1 = self.add3[self.add3[c2, self.neg3[c]], self.neg3[self.m21[b, a1]]]
        return self.encode(a1, b1, c1)

    def rdiv(self, z, y) -> np.ndarray:
        a2, b2, c2 = self.decode(z)
        a1, b1, c1 = self.decode(y)
        a = self.add1[a2, self.neg1[a1]]
        b = self.add2[self.add2[b2, self.neg2[b1]], self.neg2[self.m11[a, a1]]]
        c = self.add3[self.add3[c2, self.neg3[c1]], self.neg3[self.m21[b, a1]]]
        return self.encode(a, b, c)

    def inv(self, x) -> np.ndarray:
        a, b, c = self.decode(x)
        return self.encode(self.neg1[a], self.neg2[b], self.add3[self.neg3[c], self.m21[b, a]])

    def element(self, a: Union[str, Sequence[int], int] = 0, b: Union[str, Sequence[int], int] = 0,
                c: Union[str, Sequence[int], int] = 0) -> int:
        """Flat index of (a, b, c) given as ring vectors, 'e1+2e4' strings, or 0."""
        vectors = [self._vector(v) for v in (a, b, c)]
        ia = int(self.parts.x1.index_of(vectors[0][None, :])[0])
        ib = int(self.parts.x2.index_of(vectors[1][None, :])[0])
        ic = int(self.parts.x3.index_of(vectors[2][None, :])[0])
        return int(self.encode(ia, ib, ic))

    def _vector(self, value) -> np.ndarray:
        if isinstance(value, str):
            return parse_vector(value, self.spec.dim, self.spec.modulus)
        if isinstance(value, (int, np.integer)) and int(value) == 0:
            return np.zeros(self.spec.dim, dtype=np.int64)
        vector = np.asarray(value, dtype=np.int64)
        if vector.shape != (self.spec.dim,):
            raise RingValidationError(f"expected {self.spec.dim} coordinates, got shape {vector.shape}")
        return vector % self.spec.modulus

    def components(self, x: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        a, b, c = self.decode(self.check_element(x))
        return (self.parts.x1.elements[int(a)], self.parts.x2.elements[int(b)],
                self.parts.x3.elements[int(c)])

    def describe(self, x: int) -> str:
        a, b, c = self.components(x)
        return f"({format_vector(a)}, {format_vector(b)}, {format_vector(c)})"

    def a_elements(self) -> np.ndarray:
        """Flat indices of the elements (a, 0, 0)."""
        return self.encode(np.arange(self.n1), 0, 0)


def parse_vector(text: str, dim: int, modulus: int) -> np.ndarray:
    """'e1+2e4' -> coordinate vector"""
    vector = np.zeros(dim, dtype=np.int64)
    text = text.replace(' ', '')
    if text in ('', '0'):
        return vector
    for term in text.replace('-', '+-').split('+'):
        if not term:
            continue
        sign = -1 if term.startswith('-') else 1
        term = term.lstrip('-')
        coef, _, index = term.partition('e')
        if not index.isdigit():
            raise RingValidationError(f"cannot parse ring term {term!r}")
        i = int(index)
        if not 1 <= i <= dim:
            raise RingValidationError(f"basis index {i} out of range [1,{dim}]")
        vector[i - 1] += sign * (int(coef) if coef else 1)
    return vector % modulus


def build_bruck_loop(spec: Union[RingSpec, str], name: Optional[str] = None) -> TripleLoop:
    """Build the triple loop of a ring, refusing rings that fail the axiom check."""
    spec = resolve_ring(spec)
    logger.info(f"🚀 Building triple loop from ring {spec.name}")
    axioms = check_ring_axioms(spec)
    if not axioms.ok:
        failure = axioms.first_witness()
        raise ConstructionRefused(f"ring {spec.name} fails its axioms"
                                  + (f": {failure[0]} at {failure[1]}" if failure else ''))
    parts = graded_parts(spec)
    loop = TripleLoop(spec, parts, name)
    loop.cache['ring_axioms'] = axioms
    logger.info(f"✅ Built {loop.name} of order {loop.order}")
    return loop
