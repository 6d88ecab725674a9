"""
Exhaustive structural analysis of finite carriers.

Every scan walks the carrier in enumeration order: lexicographic over the family's coordinates with `re` most
significant. Pair scans are vectorized with numpy: the products x*y for one x and every y are a single
matrix product against the carrier's structure constants.
"""

import functools
import logging
import math
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, NamedTuple

import numpy as np
import sympy

from .carriers import (
    CarrierDesc,
    Family,
    MixedCarrierError,
    NCAlgebraError,
    NCElement,
    UnsupportedCarrierError,
    add,
    carrier_to_json,
    mul,
    neg,
    one,
    power,
    render,
    structure_constants,
    try_inverse,
    zero,
)
from .config import MAX_SCAN_ORDER, MAX_SCAN_PRODUCTS, MAX_TABLE_ORDER

logger = logging.getLogger(__name__)


class InfiniteCarrierError(NCAlgebraError):
    """Raised when an exhaustive operation is asked of the infinite exact carrier."""


class BudgetExceededError(NCAlgebraError):
    """Raised when a scan would exceed its configured element or product budget. Nothing is truncated."""


class NotPrimeError(NCAlgebraError):
    """Raised when an operation defined for primes receives a composite number."""


def require_finite(carrier: CarrierDesc) -> int:
    if carrier.modulus is None:
        raise InfiniteCarrierError(f"{carrier} is infinite and cannot be enumerated")
    return carrier.modulus


def check_budget(
    carrier: CarrierDesc,
    max_order: int = MAX_SCAN_ORDER,
    max_products: int | None = None,
) -> int:
    """Return the carrier order after checking it (and, if given, its pair count) against the budgets."""
    require_finite(carrier)
    order = carrier.order
    assert order is not None
    if order > max_order:
        raise BudgetExceededError(f"{carrier} has {order} elements, over the element budget of {max_order}")
    if max_products is not None and order * order > max_products:
        raise BudgetExceededError(
            f"A pair scan of {carrier} needs {order * order} products, over the product budget of {max_products}"
        )
    return order


def element_array(carrier: CarrierDesc) -> np.ndarray:
    """(order, k) array of family coordinates in enumeration order."""
    n = require_finite(carrier)
    k = len(carrier.coords)
    return np.indices((n,) * k).reshape(k, -1).T.astype(np.int64)


def _weights(carrier: CarrierDesc) -> np.ndarray:
    n = require_finite(carrier)
    k = len(carrier.coords)
    return np.array([n ** (k - 1 - j) for j in range(k)], dtype=np.int64)


def element_index(x: NCElement) -> int:
    """Position of `x` in enumeration order."""
    n = require_finite(x.carrier)
    index = 0
    for value in x.family_coords:
        index = index * n + int(value)
    return index


def element_from_coords(carrier: CarrierDesc, row: Sequence[int]) -> NCElement:
    values = [0, 0, 0, 0]
    for idx, value in zip(carrier.coords, row, strict=True):
        values[idx] = int(value)
    return NCElement(carrier, *values)


def enumerate_elements(carrier: CarrierDesc, max_order: int = MAX_SCAN_ORDER) -> list[NCElement]:
    check_budget(carrier, max_order=max_order)
    return [element_from_coords(carrier, row) for row in element_array(carrier)]


class _Products:
    """Vectorized product rows x*Y for a fixed carrier."""

    def __init__(self, carrier: CarrierDesc) -> None:
        self.carrier = carrier
        self.n = require_finite(carrier)
        self.elements = element_array(carrier)
        self.tensor = structure_constants(carrier)
        self.weights = _weights(carrier)

    # Reduce after every contraction so int64 never overflows for large moduli.
    def coords_row(self, i: int) -> np.ndarray:
        left = np.tensordot(self.elements[i], self.tensor, axes=(0, 0)) % self.n
        return (self.elements @ left) % self.n

    def index_row(self, i: int) -> np.ndarray:
        return self.coords_row(i) @ self.weights

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Row-by-row products of two coordinate arrays of equal length."""
        left = np.einsum("ni,ijm->njm", a, self.tensor) % self.n
        return np.einsum("nj,njm->nm", b, left) % self.n

    def indices(self, coords: np.ndarray) -> np.ndarray:
        return coords @ self.weights


def _chunks(total: int, jobs: int) -> list[tuple[int, int]]:
    pieces = max(1, jobs * 4)
    size = max(1, math.ceil(total / pieces))
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _map_chunks[T](
    func: Callable[[tuple[CarrierDesc, int, int]], list[T]], carrier: CarrierDesc, total: int, jobs: int
) -> list[T]:
    """Apply `func` to contiguous index ranges; results are concatenated in range order whatever `jobs` is."""
    tasks = [(carrier, start, stop) for start, stop in _chunks(total, jobs)]
    if jobs <= 1:
        parts: Iterable[list[T]] = map(func, tasks)
        return [item for part in parts for item in part]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return [item for part in executor.map(func, tasks) for item in part]


def _zero_divisor_chunk(task: tuple[CarrierDesc, int, int]) -> list[tuple[int, int]]:
    carrier, start, stop = task
    products = _Products(carrier)
    pairs: list[tuple[int, int]] = []
    for i in range(max(start, 1), stop):
        hits = np.flatnonzero(products.index_row(i) == 0)
        pairs.extend((i, int(j)) for j in hits if j != 0)
    return pairs


def _unit_chunk(task: tuple[CarrierDesc, int, int]) -> list[int]:
    carrier, start, stop = task
    products = _Products(carrier)
    one_index = int(products.weights[0])
    return [i for i in range(start, stop) if np.any(products.index_row(i) == one_index)]


def find_zero_divisors(
    carrier: CarrierDesc,
    max_order: int = MAX_SCAN_ORDER,
    max_products: int = MAX_SCAN_PRODUCTS,
    jobs: int = 1,
) -> list[tuple[NCElement, NCElement]]:
    """All ordered pairs (x, y) of nonzero elements with x*y = 0, in enumeration order."""
    order = check_budget(carrier, max_order=max_order, max_products=max_products)
    elements = enumerate_elements(carrier, max_order=max_order)
    pairs = _map_chunks(_zero_divisor_chunk, carrier, order, jobs)
    return [(elements[i], elements[j]) for i, j in pairs]


def first_zero_divisor(carrier: CarrierDesc, max_order: int = MAX_SCAN_ORDER) -> tuple[NCElement, NCElement] | None:
    """First zero-divisor pair in enumeration order, stopping early."""
    order = check_budget(carrier, max_order=max_order)
    products = _Products(carrier)
    for i in range(1, order):
        hits = np.flatnonzero(products.index_row(i)[1:] == 0)
        if hits.size:
            x = element_from_coords(carrier, products.elements[i])
            return x, element_from_coords(carrier, products.elements[hits[0] + 1])
    return None


def find_units(
    carrier: CarrierDesc,
    max_order: int = MAX_SCAN_ORDER,
    max_products: int = MAX_SCAN_PRODUCTS,
    jobs: int = 1,
) -> list[NCElement]:
    order = check_budget(carrier, max_order=max_order, max_products=max_products)
    elements = enumerate_elements(carrier, max_order=max_order)
    return [elements[i] for i in _map_chunks(_unit_chunk, carrier, order, jobs)]


def find_idempotents(carrier: CarrierDesc, max_order: int = MAX_SCAN_ORDER) -> list[NCElement]:
    """Nonzero idempotents e = e*e."""
    check_budget(carrier, max_order=max_order)
    products = _Products(carrier)
    squares = products.indices(products.pairwise(products.elements, products.elements))
    hits = np.flatnonzero(squares == np.arange(len(squares)))
    return [element_from_coords(carrier, products.elements[i]) for i in hits if i != 0]


def find_nilpotents(carrier: CarrierDesc, max_order: int = MAX_SCAN_ORDER) -> list[tuple[NCElement, int]]:
    """
    Nonzero nilpotents with their index, the least k >= 1 with x^k = 0.
    In a ring of order N the ideals xR > x^2R > ... strictly shrink, so k <= log2(N) + 1.
    """
    order = check_budget(carrier, max_order=max_order)
    products = _Products(carrier)
    base = products.elements
    current = base.copy()
    index = np.zeros(order, dtype=np.int64)
    for k in range(1, int(math.log2(order)) + 2):
        newly_zero = (products.indices(current) == 0) & (index == 0)
        index[newly_zero] = k
        current = products.pairwise(current, base)
    return [(element_from_coords(carrier, base[i]), int(index[i])) for i in range(1, order) if index[i] > 1]


class FieldVerdict(NamedTuple):
    is_field: bool
    witness: tuple[NCElement, NCElement] | None
    method: str


def _neutro_witness(carrier: CarrierDesc) -> tuple[NCElement, NCElement]:
    indeterminate = NCElement(carrier, neut=1)
    return indeterminate, add(one(carrier), neg(indeterminate))


def sum_two_squares_witness(p: int) -> tuple[int, int] | None:
    """Least (a, b) in [1, p-1]^2 with a^2 + b^2 = 0 mod p, or `None`."""
    if not sympy.isprime(p):
        raise NotPrimeError(f"{p} is not prime")
    least_root: dict[int, int] = {}
    for b in range(1, p):
        least_root.setdefault(b * b % p, b)
    for a in range(1, p):
        b = least_root.get(-a * a % p)
        if b is not None:
            return a, b
    return None


def is_field_brute_force(carrier: CarrierDesc, max_order: int = MAX_SCAN_ORDER) -> FieldVerdict:
    witness = first_zero_divisor(carrier, max_order=max_order)
    return FieldVerdict(witness is None, witness, "brute-force")


def is_field(carrier: CarrierDesc, max_order: int = MAX_SCAN_ORDER) -> FieldVerdict:
    """
    Field test. Neutrosophic families (and the exact carrier) are never fields: I*(1 - I) = 0.
    C(Z_p) for prime p is not a field iff a^2 + b^2 = 0 mod p for some nonzero a, b; the witness is then
    (a + b iF)(b + a iF) = 0. Every other modular carrier is decided by brute force.
    """
    if carrier.family in (Family.MOD_NEUTRO, Family.MOD_NEUTRO_COMPLEX, Family.EXACT):
        return FieldVerdict(False, _neutro_witness(carrier), "indeterminate-idempotent")
    n = require_finite(carrier)
    if sympy.isprime(n):
        if carrier.family == Family.MOD_PLAIN:
            return FieldVerdict(True, None, "prime-modulus")
        squares = sum_two_squares_witness(n)
        if squares is None:
            return FieldVerdict(True, None, "sum-of-two-squares")
        a, b = squares
        return FieldVerdict(False, (NCElement(carrier, a, b), NCElement(carrier, b, a)), "sum-of-two-squares")
    return is_field_brute_force(carrier, max_order=max_order)


@functools.cache
def is_field_carrier(carrier: CarrierDesc) -> bool:
    return carrier.is_modular and is_field(carrier).is_field


def require_field_carrier(carrier: CarrierDesc) -> None:
    if not is_field_carrier(carrier):
        raise UnsupportedCarrierError(f"{carrier} is not a field; elimination needs unit pivots")


def additive_order(x: NCElement) -> int:
    """Least k >= 1 with k*x = 0."""
    n = require_finite(x.carrier)
    return n // math.gcd(n, *(int(v) for v in x.coords))


def multiplicative_order(x: NCElement) -> int | None:
    """Least k >= 1 with x^k = 1, `None` when x is not a unit."""
    n = require_finite(x.carrier)
    order = n ** len(x.carrier.coords)
    if try_inverse(x) is None:
        return None
    identity = one(x.carrier)
    current = x
    for k in range(1, order + 1):
        if current == identity:
            return k
        current = mul(current, x)
    raise RuntimeError(f"{x!r} is a unit without finite order")


class Side(StrEnum):
    LEFT = "left"
    RIGHT = "right"
    TWO_SIDED = "two-sided"


class ClosureCheck(NamedTuple):
    holds: bool
    counterexample: tuple[NCElement, ...] | None
    reason: str


def _check_members(subset: Iterable[NCElement], carrier: CarrierDesc) -> list[NCElement]:
    members = list(subset)
    for x in members:
        if x.carrier != carrier:
            raise MixedCarrierError(f"{x!r} is not an element of {carrier}")
    return members


def _additive_subgroup(members: list[NCElement], carrier: CarrierDesc) -> ClosureCheck | None:
    """Failure of the additive subgroup test, or `None` when `members` is one."""
    member_set = set(members)
    if zero(carrier) not in member_set:
        return ClosureCheck(False, (zero(carrier),), "does not contain 0")
    for a in members:
        for b in members:
            if (total := add(a, b)) not in member_set:
                return ClosureCheck(False, (a, b, total), "not closed under addition")
    return None


def check_ideal(
    subset: Iterable[NCElement],
    carrier: CarrierDesc,
    side: Side | str = Side.TWO_SIDED,
    max_order: int = MAX_SCAN_ORDER,
) -> ClosureCheck:
    """
    Ideal test: an additive subgroup absorbing multiplication on the stated side(s).
    A failing absorption reports (r, s, product) with product = r*s (left) or s*r (right).
    """
    side = Side(side)
    members = _check_members(subset, carrier)
    if (failure := _additive_subgroup(members, carrier)) is not None:
        return failure
    member_set = set(members)
    for r in enumerate_elements(carrier, max_order=max_order):
        for s in members:
            if side in (Side.LEFT, Side.TWO_SIDED) and (prod := mul(r, s)) not in member_set:
                return ClosureCheck(False, (r, s, prod), "does not absorb left multiplication")
            if side in (Side.RIGHT, Side.TWO_SIDED) and (prod := mul(s, r)) not in member_set:
                return ClosureCheck(False, (r, s, prod), "does not absorb right multiplication")
    return ClosureCheck(True, None, f"{side} ideal")


def check_subring(subset: Iterable[NCElement], carrier: CarrierDesc) -> ClosureCheck:
    members = _check_members(subset, carrier)
    if (failure := _additive_subgroup(members, carrier)) is not None:
        return failure
    member_set = set(members)
    for a in members:
        for b in members:
            if (prod := mul(a, b)) not in member_set:
                return ClosureCheck(False, (a, b, prod), "not closed under multiplication")
    return ClosureCheck(True, None, "subring")


def _local_unit_group(products: _Products, e_index: int) -> list[int]:
    """Units of e*R: x with x*e = x and some y with y*e = y and x*y = e."""
    fixed = np.flatnonzero(products.index_row(e_index) == np.arange(len(products.elements)))
    fixed_mask = np.zeros(len(products.elements), dtype=bool)
    fixed_mask[fixed] = True
    return [int(x) for x in fixed if np.any((products.index_row(int(x)) == e_index) & fixed_mask)]


def is_smarandache_semigroup(
    carrier: CarrierDesc,
    max_order: int = MAX_SCAN_ORDER,
    max_products: int = MAX_SCAN_PRODUCTS,
) -> tuple[bool, list[NCElement]]:
    """
    Whether (carrier, *) holds a proper subset that is a group. The witness is the largest group among the unit
    group and the unit groups e*U_e of the other nonzero idempotents; the unit group wins ties.
    """
    order = check_budget(carrier, max_order=max_order, max_products=max_products)
    products = _Products(carrier)
    one_index = element_index(one(carrier))
    best = _local_unit_group(products, one_index)
    for e in find_idempotents(carrier, max_order=max_order):
        e_index = element_index(e)
        if e_index == one_index:
            continue
        group = _local_unit_group(products, e_index)
        if len(group) > len(best):
            best = group
    holds = 0 < len(best) < order
    return holds, [element_from_coords(carrier, products.elements[i]) for i in best]


def cayley_table(carrier: CarrierDesc, op: str, max_order: int = MAX_SCAN_ORDER) -> np.ndarray:
    """(order, order) table of element indices for `op` in {"add", "mul"}."""
    order = check_budget(carrier, max_order=max_order)
    products = _Products(carrier)
    table = np.empty((order, order), dtype=np.int64)
    for i in range(order):
        if op == "add":
            table[i] = products.indices((products.elements[i] + products.elements) % products.n)
        elif op == "mul":
            table[i] = products.index_row(i)
        else:
            raise ValueError(f"Unsupported table operation: {op}")
    return table


def cayley_grid(carrier: CarrierDesc, op: str, max_order: int = MAX_TABLE_ORDER) -> list[list[str]]:
    """(N+1) x (N+1) grid of canonical strings; the corner cell is "*"."""
    check_budget(carrier, max_order=max_order)
    labels = [render(x) for x in enumerate_elements(carrier)]
    table = cayley_table(carrier, op)
    grid = [["*", *labels]]
    for i, label in enumerate(labels):
        grid.append([label, *(labels[j] for j in table[i])])
    return grid


def _generated_subring(seed: Sequence[int], add_table: np.ndarray, mul_table: np.ndarray, cap: int) -> set[int] | None:
    """Closure of `seed` under + and *, or `None` once it grows past `cap` elements."""
    members = {0, *seed}
    frontier = list(members)
    while frontier:
        new: list[int] = []
        snapshot = list(members)
        for a in frontier:
            for b in snapshot:
                for c in (int(add_table[a, b]), int(mul_table[a, b])):
                    if c not in members:
                        members.add(c)
                        new.append(c)
                        if len(members) > cap:
                            return None
        frontier = new
    return members


def _is_field_with_identity(members: set[int], e: int, mul_table: np.ndarray) -> bool:
    if len(members) < 2:
        return False
    nonzero = [s for s in members if s != 0]
    for s in members:
        if mul_table[e, s] != s:
            return False
    return all(any(mul_table[s, t] == e for t in nonzero) for s in nonzero)


def find_subfields(
    carrier: CarrierDesc,
    size_cap: int,
    max_order: int = MAX_SCAN_ORDER,
    max_products: int = MAX_SCAN_PRODUCTS,
) -> list[list[NCElement]]:
    """
    Fields inside the carrier generated by a nonzero idempotent e (their identity) and one element x with x*e = x,
    with at most `size_cap` elements. Deduplicated, in order of discovery.
    """
    check_budget(carrier, max_order=max_order, max_products=max_products)
    if size_cap < 2:
        return []
    elements = enumerate_elements(carrier, max_order=max_order)
    add_table = cayley_table(carrier, "add", max_order=max_order)
    mul_table = cayley_table(carrier, "mul", max_order=max_order)
    found: list[frozenset[int]] = []
    for e in find_idempotents(carrier, max_order=max_order):
        e_index = element_index(e)
        for x_index in range(len(elements)):
            if mul_table[x_index, e_index] != x_index:
                continue
            members = _generated_subring((e_index, x_index), add_table, mul_table, size_cap)
            if members is None or not _is_field_with_identity(members, e_index, mul_table):
                continue
            key = frozenset(members)
            if key not in found:
                found.append(key)
    return [[elements[i] for i in sorted(key)] for key in found]


def is_smarandache_ring(carrier: CarrierDesc, max_order: int = MAX_SCAN_ORDER) -> tuple[bool, list[NCElement]]:
    """Whether the carrier holds a proper subset that is a field; the witness is the first one found."""
    order = check_budget(carrier, max_order=max_order)
    fields = find_subfields(carrier, size_cap=order - 1, max_order=max_order)
    return (True, fields[0]) if fields else (False, [])


def additive_sylow_orders(carrier: CarrierDesc) -> dict[int, int]:
    """Order of each p-Sylow subgroup of the additive group (Z_n)^k: p^(e*k) for p^e exactly dividing n."""
    n = require_finite(carrier)
    k = len(carrier.coords)
    return {int(p): int(p) ** (e * k) for p, e in sorted(sympy.factorint(n).items())}


@dataclass(frozen=True)
class ScanReport:
    carrier: CarrierDesc
    order: int
    zero_divisor_pairs: list[tuple[NCElement, NCElement]]
    units: list[NCElement]
    idempotents: list[NCElement]
    nilpotents: list[tuple[NCElement, int]]
    is_field: bool
    is_integral_domain: bool
    witnesses: dict[str, tuple[NCElement, ...]] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "carrier": carrier_to_json(self.carrier),
            "order": self.order,
            "is_field": self.is_field,
            "is_integral_domain": self.is_integral_domain,
            "zero_divisors": [[render(x), render(y)] for x, y in self.zero_divisor_pairs],
            "units": [render(x) for x in self.units],
            "idempotents": [render(x) for x in self.idempotents],
            "nilpotents": [{"element": render(x), "index": k} for x, k in self.nilpotents],
            "witnesses": {name: [render(x) for x in values] for name, values in self.witnesses.items()},
        }


def scan(
    carrier: CarrierDesc,
    max_order: int = MAX_SCAN_ORDER,
    max_products: int = MAX_SCAN_PRODUCTS,
    jobs: int = 1,
) -> ScanReport:
    order = check_budget(carrier, max_order=max_order, max_products=max_products)
    logger.info(f"Scanning {carrier} ({order} elements) with {jobs} job(s)")
    start_time = time.perf_counter()
    zero_divisors = find_zero_divisors(carrier, max_order=max_order, max_products=max_products, jobs=jobs)
    units = find_units(carrier, max_order=max_order, max_products=max_products, jobs=jobs)
    idempotents = find_idempotents(carrier, max_order=max_order)
    nilpotents = find_nilpotents(carrier, max_order=max_order)
    verdict = is_field(carrier, max_order=max_order)

    witnesses: dict[str, tuple[NCElement, ...]] = {}
    if zero_divisors:
        witnesses["zero_divisor"] = zero_divisors[0]
    if verdict.witness is not None:
        witnesses["not_field"] = verdict.witness
    non_trivial_units = [u for u in units if u != one(carrier)]
    if non_trivial_units:
        unit = non_trivial_units[0]
        inverse = try_inverse(unit)
        assert inverse is not None
        witnesses["unit"] = (unit, inverse)
    if idempotents:
        witnesses["idempotent"] = (idempotents[0],)
    if nilpotents:
        x, k = nilpotents[0]
        witnesses["nilpotent"] = (x, power(x, k - 1))

    report = ScanReport(
        carrier=carrier,
        order=order,
        zero_divisor_pairs=zero_divisors,
        units=units,
        idempotents=idempotents,
        nilpotents=nilpotents,
        is_field=verdict.is_field,
        is_integral_domain=not zero_divisors,
        witnesses=witnesses,
    )
    elapsed = time.perf_counter() - start_time
    logger.info(f"Scanned {carrier} ({order} elements) in {elapsed:.3f} seconds")
    return report
