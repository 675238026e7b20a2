"""
Structure-constant rings over Z_m with a designated alternating submodule X1.

Basis indices are 1-based in documents and reports, 0-based in arrays.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import Config
from utils.errors import RingValidationError, SpecParseError, UnknownNameError
from utils.suite_report import Status, SuiteItem, SuiteReport

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).parent / 'presets'

Products = Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]]


@dataclass(frozen=True)
class RingElement:
    coords: Tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if any(not 0 <= c < self.modulus for c in self.coords):
            raise RingValidationError(f"coordinates {self.coords} not reduced mod {self.modulus}")

    @classmethod
    def from_vector(cls, vector: Sequence[int], modulus: int) -> 'RingElement':
        return cls(tuple(int(c) % modulus for c in vector), modulus)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: 'RingElement'):
        if other.modulus != self.modulus or other.dim != self.dim:
            raise RingValidationError(f"incompatible ring elements: dim {self.dim} mod {self.modulus} "
                                      f"vs dim {other.dim} mod {other.modulus}")

    def __add__(self, other: 'RingElement') -> 'RingElement':
        self._check(other)
        return RingElement.from_vector(np.add(self.coords, other.coords), self.modulus)

    def __sub__(self, other: 'RingElement') -> 'RingElement':
        self._check(other)
        return RingElement.from_vector(np.subtract(self.coords, other.coords), self.modulus)

    def __neg__(self) -> 'RingElement':
        return RingElement.from_vector(np.negative(self.coords), self.modulus)

    def __rmul__(self, scalar: int) -> 'RingElement':
        return RingElement.from_vector(np.multiply(self.coords, int(scalar)), self.modulus)

    def __str__(self) -> str:
        return format_vector(self.coords)


def format_vector(coords: Sequence[int]) -> str:
    """'e1+e2', '2e7', '0'"""
    terms = []
    for i, c in enumerate(coords, start=1):
        c = int(c)
        if c == 1:
            terms.append(f"e{i}")
        elif c:
            terms.append(f"{c}e{i}")
    return '+'.join(terms) if terms else '0'


@dataclass(frozen=True)
class RingSpec:
    modulus: int
    dim: int
    products: Products = field(default_factory=dict)
    x1_basis: Tuple[int, ...] = ()
    name: str = 'ring'

    def __post_init__(self):
        if self.modulus < 2:
            raise RingValidationError(f"modulus must be at least 2, got {self.modulus}")
        if self.dim < 1:
            raise RingValidationError(f"dim must be at least 1, got {self.dim}")
        for i in self.x1_basis:
            self._check_index(i, 'x1 basis')
        for (i, j), terms in self.products.items():
            self._check_index(i, 'product')
            self._check_index(j, 'product')
            for k, coef in terms:
                self._check_index(k, 'product target')
                if not 0 <= coef < self.modulus:
                    raise RingValidationError(f"coefficient {coef} of e{i}e{j} not in [0,{self.modulus})")

    def _check_index(self, index: int, what: str):
        if not 1 <= index <= self.dim:
            raise RingValidationError(f"{what} index {index} out of range [1,{self.dim}]")

    @cached_property
    def structure(self) -> np.ndarray:
        """Structure tensor s[i,j,k]: coefficient of e_k in e_i e_j (0-based)."""
        tensor = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for (i, j), terms in self.products.items():
            for k, coef in terms:
                tensor[i - 1, j - 1, k - 1] = coef
        return tensor

    def element(self, vector: Sequence[int]) -> RingElement:
        if len(vector) != self.dim:
            raise RingValidationError(f"expected {self.dim} coordinates, got {len(vector)}")
        return RingElement.from_vector(vector, self.modulus)

    def basis(self, index: int) -> RingElement:
        self._check_index(index, 'basis')
        coords = [0] * self.dim
        coords[index - 1] = 1
        return RingElement(tuple(coords), self.modulus)

    def zero(self) -> RingElement:
        return RingElement((0,) * self.dim, self.modulus)

    def product_terms(self, i: int, j: int) -> List[Tuple[int, int]]:
        return list(self.products.get((i, j), ()))

    def without_product(self, i: int, j: int) -> 'RingSpec':
        """Copy of the ring with the product e_i e_j set to zero."""
        products = {key: terms for key, terms in self.products.items() if key != (i, j)}
        return RingSpec(self.modulus, self.dim, products, self.x1_basis, f"{self.name}-without-{i}.{j}")


def parse_ring_spec(text: str, name: str = 'ring') -> RingSpec:
    """Parse a ring-spec document.

    Grammar: a `ring` header, then `modulus m`, `dim d`, `x1 i ...` and any
    number of `prod i j k c` lines. `#` starts a comment.
    """
    header_seen = False
    modulus: Optional[int] = None
    dim: Optional[int] = None
    x1: Tuple[int, ...] = ()
    raw_products: List[Tuple[int, Tuple[int, int, int, int]]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        words = line.split()
        keyword, args = words[0], words[1:]

        if not header_seen:
            if keyword != 'ring' or args:
                raise SpecParseError(f"expected 'ring' header, got {line!r}", line_no)
            header_seen = True
            continue

        try:
            numbers = [int(a) for a in args]
        except ValueError:
            raise SpecParseError(f"non-integer argument in {line!r}", line_no)

        if keyword == 'modulus':
            if len(numbers) != 1 or modulus is not None:
                raise SpecParseError("'modulus' takes one value and appears once", line_no)
            modulus = numbers[0]
        elif keyword == 'dim':
            if len(numbers) != 1 or dim is not None:
                raise SpecParseError("'dim' takes one value and appears once", line_no)
            dim = numbers[0]
        elif keyword == 'x1':
            if not numbers:
                raise SpecParseError("'x1' needs at least one basis index", line_no)
            x1 = x1 + tuple(numbers)
        elif keyword == 'prod':
            if len(numbers) != 4:
                raise SpecParseError("'prod' takes four values: i j k c", line_no)
            raw_products.append((line_no, tuple(numbers)))
        else:
            raise SpecParseError(f"unknown keyword {keyword!r}", line_no)

    if not header_seen:
        raise SpecParseError("missing 'ring' header", 1)
    if modulus is None or dim is None:
        raise SpecParseError("'modulus' and 'dim' are required", max(1, len(text.splitlines())))
    if modulus < 2 or dim < 1:
        raise RingValidationError(f"need modulus >= 2 and dim >= 1, got {modulus} and {dim}")

    accumulated: Dict[Tuple[int, int], Dict[int, int]] = {}
    for line_no, (i, j, k, c) in raw_products:
        for index in (i, j, k):
            if not 1 <= index <= dim:
                raise RingValidationError(f"line {line_no}: index {index} out of range [1,{dim}]")
        terms = accumulated.setdefault((i, j), {})
        terms[k] = (terms.get(k, 0) + c) % modulus

    products: Products = {}
    for key, terms in accumulated.items():
        kept = tuple(sorted((k, c) for k, c in terms.items() if c))
        if kept:
            products[key] = kept

    spec = RingSpec(modulus, dim, products, tuple(sorted(set(x1))), name)
    logger.debug(f"Parsed ring {name}: modulus {modulus}, dim {dim}, {len(products)} products")
    return spec


def load_ring_preset(name: str) -> RingSpec:
    path = PRESET_DIR / f"{name}.ring"
    if not path.is_file():
        known = ', '.join(sorted(p.stem for p in PRESET_DIR.glob('*.ring')))
        raise UnknownNameError(f"unknown ring preset '{name}' (known: {known})")
    return parse_ring_spec(path.read_text(encoding='utf-8'), name)


def resolve_ring(source: Union[str, Path, RingSpec]) -> RingSpec:
    """A RingSpec, a preset name, or a path to a ring-spec file."""
    if isinstance(source, RingSpec):
        return source
    path = Path(source)
    if path.is_file():
        return parse_ring_spec(path.read_text(encoding='utf-8'), path.stem)
    return load_ring_preset(str(source))


def _as_vectors(spec: RingSpec, x) -> np.ndarray:
    if isinstance(x, RingElement):
        x = x.coords
    arr = np.asarray(x, dtype=np.int64)
    if arr.shape[-1] != spec.dim:
        raise RingValidationError(f"dimension mismatch: expected {spec.dim} coordinates, got {arr.shape[-1]}")
    return arr


def ring_mul_many(spec: RingSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise products of coordinate arrays of shape (..., d)."""
    xs = _as_vectors(spec, x)
    ys = _as_vectors(spec, y)
    return np.einsum('...i,...j,ijk->...k', xs, ys, spec.structure) % spec.modulus


def ring_mul(spec: RingSpec, x: RingElement, y: RingElement) -> RingElement:
    if isinstance(x, RingElement) and x.modulus != spec.modulus:
        raise RingValidationError(f"element modulus {x.modulus} differs from ring modulus {spec.modulus}")
    if isinstance(y, RingElement) and y.modulus != spec.modulus:
        raise RingValidationError(f"element modulus {y.modulus} differs from ring modulus {spec.modulus}")
    return RingElement.from_vector(ring_mul_many(spec, x, y), spec.modulus)


def _keys(vectors: np.ndarray, modulus: int) -> np.ndarray:
    """Base-m integer keys, first coordinate most significant."""
    dim = vectors.shape[-1]
    weights = modulus ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    return vectors @ weights


def additive_closure(generators: np.ndarray, modulus: int, dim: int) -> np.ndarray:
    """Breadth-first additive closure of a set of vectors; sorted lexicographically."""
    zero = np.zeros((1, dim), dtype=np.int64)
    gens = np.unique(np.asarray(generators, dtype=np.int64).reshape(-1, dim) % modulus, axis=0)
    gens = gens[gens.any(axis=1)]

    elements = zero
    seen = set(_keys(zero, modulus).tolist())
    frontier = zero
    while len(frontier) and len(gens):
        candidates = ((frontier[:, None, :] + gens[None, :, :]) % modulus).reshape(-1, dim)
        candidates = np.unique(candidates, axis=0)
        keys = _keys(candidates, modulus)
        fresh = np.array([k not in seen for k in keys.tolist()], dtype=bool)
        frontier = candidates[fresh]
        seen.update(keys[fresh].tolist())
        elements = np.concatenate([elements, frontier])

    order = np.argsort(_keys(elements, modulus), kind='stable')
    return elements[order]


@dataclass
class GradedPart:
    name: str
    elements: np.ndarray
    modulus: int

    def __post_init__(self):
        self.keys = _keys(self.elements, self.modulus)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, vectors: np.ndarray) -> np.ndarray:
        """Positions of the given vectors in the enumeration."""
        vectors = np.asarray(vectors, dtype=np.int64) % self.modulus
        keys = _keys(vectors, self.modulus)
        pos = np.searchsorted(self.keys, keys)
        pos_clipped = np.minimum(pos, len(self.keys) - 1)
        found = self.keys[pos_clipped] == keys
        if not np.all(found):
            missing = vectors.reshape(-1, vectors.shape[-1])[np.flatnonzero(~np.ravel(found))[0]]
            raise RingValidationError(f"{format_vector(missing)} is not in {self.name}")
        return pos_clipped

    def contains(self, vectors: np.ndarray) -> np.ndarray:
        vectors = np.asarray(vectors, dtype=np.int64) % self.modulus
        keys = _keys(vectors, self.modulus)
        pos = np.minimum(np.searchsorted(self.keys, keys), len(self.keys) - 1)
        return self.keys[pos] == keys

    def describe(self, index: int) -> str:
        return format_vector(self.elements[int(index)])


@dataclass
class GradedParts:
    spec: RingSpec
    x1: GradedPart
    x2: GradedPart
    x3: GradedPart
    overlaps: Dict[str, int] = field(default_factory=dict)

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return len(self.x1), len(self.x2), len(self.x3)


def graded_parts(spec: RingSpec) -> GradedParts:
    """X1 from the declared basis, X2 and X3 from 2- and 3-fold X1 products."""
    m, d = spec.modulus, spec.dim
    basis = np.zeros((len(spec.x1_basis), d), dtype=np.int64)
    for row, index in enumerate(spec.x1_basis):
        basis[row, index - 1] = 1
    x1 = additive_closure(basis, m, d)

    pairs = ring_mul_many(spec, x1[:, None, :], x1[None, :, :]).reshape(-1, d)
    pair_products = np.unique(pairs, axis=0)
    x2 = additive_closure(pair_products, m, d)

    triples = ring_mul_many(spec, pair_products[:, None, :], x1[None, :, :]).reshape(-1, d)
    x3 = additive_closure(np.unique(triples, axis=0), m, d)

    parts = GradedParts(spec, GradedPart('X1', x1, m), GradedPart('X2', x2, m), GradedPart('X3', x3, m))
    parts.overlaps = {
        'x1_x2': int(parts.x2.contains(x1).sum()) - 1,
        'x2_x3': int(parts.x3.contains(x2).sum()) - 1
    }
    for key, count in parts.overlaps.items():
        if count:
            logger.warning(f"⚠️ {spec.name}: graded overlap {key} has {count} nonzero elements")

    logger.info(f"📊 {spec.name}: |X1| = {len(x1)}, |X2| = {len(x2)}, |X3| = {len(x3)}")
    return parts


def check_ring_axioms(spec: RingSpec, witness_limit: Optional[int] = None) -> SuiteReport:
    """Associativity on basis triples, the alternating law on X1, and m·X = 0."""
    limit = witness_limit or Config.WITNESS_LIMIT
    report = SuiteReport('ring-axioms', metadata={'ring': spec.name})
    s = spec.structure
    m, d = spec.modulus, spec.dim

    # (e_i e_j) e_k vs e_i (e_j e_k), as d^3 x d coordinate arrays
    left = np.einsum('ijl,lkq->ijkq', s, s) % m
    right = np.einsum('jkl,ilq->ijkq', s, s) % m
    bad = np.argwhere((left != right).any(axis=3))
    report.add(SuiteItem('associativity', Status.FAIL if len(bad) else Status.PASS,
                         checked=d ** 3, failures=len(bad),
                         witnesses=[tuple(f"e{i + 1}" for i in triple) for triple in bad[:limit]]))

    basis = np.zeros((len(spec.x1_basis), d), dtype=np.int64)
    for row, index in enumerate(spec.x1_basis):
        basis[row, index - 1] = 1
    x1 = additive_closure(basis, m, d)
    uv = ring_mul_many(spec, x1[:, None, :], x1[None, :, :])
    vu = np.swapaxes(uv, 0, 1)
    square_bad = uv[np.arange(len(x1)), np.arange(len(x1))].any(axis=1)
    sum_bad = ((uv + vu) % m).any(axis=2)
    sum_bad[np.arange(len(x1)), np.arange(len(x1))] |= square_bad
    failing = np.argwhere(sum_bad)
    report.add(SuiteItem('alternating-x1', Status.FAIL if len(failing) else Status.PASS,
                         checked=len(x1) ** 2, failures=len(failing),
                         witnesses=[(format_vector(x1[i]), format_vector(x1[j])) for i, j in failing[:limit]]))

    # Coordinates are residues, so m·X = 0 holds by construction
    report.add(SuiteItem('modulus', Status.PASS, checked=d, note=f"residues mod {m}"))
    report.metadata['triples_checked'] = d ** 3
    report.metadata['pairs_checked'] = len(x1) ** 2

    if report.ok:
        logger.info(f"✅ Ring axioms hold for {spec.name}")
    else:
        logger.error(f"❌ Ring axioms fail for {spec.name}: {report.summary()}")
    return report
