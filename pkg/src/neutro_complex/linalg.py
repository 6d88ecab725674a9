"""
Linear algebra over field carriers, and dimension accounting for carrier-valued spaces over smaller base fields.

Vectors are column matrices. A space of `rows x cols` matrices over an element carrier is viewed as a vector space
over a base carrier whose coordinates are a subset of the element carrier's; every element splits uniquely as
``sum(beta_t * e_t)`` over the extension basis ``e_t`` (basis symbols sharing no factor with the base) with
``beta_t`` in the base.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, NamedTuple

import numpy as np

from .carriers import (
    CarrierDesc,
    Family,
    InvalidCarrierError,
    MixedCarrierError,
    NCElement,
    UnsupportedCarrierError,
    add,
    basis_element,
    embed,
    make_element,
    mul,
    neg,
    one,
    render,
    structure_constants,
    sub,
    try_inverse,
    zero,
)
from .config import MAX_CHAR_POLY_SIZE, MAX_EIGEN_VECTORS
from .matrices import (
    Matrix,
    MatrixShapeError,
    SizeBudgetError,
    identity,
    laplace_det,
    mat_add,
    mat_embed,
    mat_mul,
    mat_scale,
    mat_sub,
    matrix_from_entries,
    matrix_from_rows,
    unit_matrix,
    zero_matrix,
)
from .polynomials import Poly, constant, make_poly, poly_add, poly_mul, poly_neg
from .scan import (
    BudgetExceededError,
    check_budget,
    element_array,
    element_from_coords,
    enumerate_elements,
    is_field_carrier,
    require_field_carrier,
    require_finite,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class SpaceSpec:
    """`rows x cols` matrices over `element_carrier`, with scalars from `base`."""

    element_carrier: CarrierDesc
    rows: int
    cols: int = 1
    base: CarrierDesc | None = None

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise MatrixShapeError(f"Space shape must be positive, got {self.rows}x{self.cols}")
        base = self.scalars
        if base.modulus != self.element_carrier.modulus or not set(base.coords) <= set(self.element_carrier.coords):
            raise InvalidCarrierError(f"{base} does not embed in {self.element_carrier}")

    @property
    def scalars(self) -> CarrierDesc:
        return self.base if self.base is not None else self.element_carrier

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def extension_basis(self) -> tuple[int, ...]:
        """Basis symbols of the element carrier over the base, as basis indices."""
        mask = 0
        for idx in self.scalars.coords:
            mask |= idx
        return tuple(t for t in self.element_carrier.coords if not t & mask)


def vector_space(carrier: CarrierDesc, length: int, base: CarrierDesc | None = None) -> SpaceSpec:
    return SpaceSpec(carrier, length, 1, base)


def space_of(v: Matrix, base: CarrierDesc | None = None) -> SpaceSpec:
    return SpaceSpec(v.carrier, v.rows, v.cols, base)


def column(carrier: CarrierDesc, values: Sequence[NCElement]) -> Matrix:
    return matrix_from_entries(carrier, len(values), 1, values)


def _pivot_inverse(x: NCElement) -> NCElement:
    inverse = try_inverse(x)
    if inverse is None:
        raise RuntimeError(f"Nonzero pivot {render(x)} has no inverse in a field carrier")
    return inverse


def rref(a: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form over a field carrier, with the pivot columns."""
    require_field_carrier(a.carrier)
    work = a.grid()
    pivots: list[int] = []
    r = 0
    for c in range(a.cols):
        if r == a.rows:
            break
        pivot_row = next((i for i in range(r, a.rows) if not work[i][c].is_zero()), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inverse = _pivot_inverse(work[r][c])
        work[r] = [mul(inverse, x) for x in work[r]]
        for i in range(a.rows):
            if i != r and not work[i][c].is_zero():
                factor = work[i][c]
                work[i] = [sub(x, mul(factor, y)) for x, y in zip(work[i], work[r], strict=True)]
        pivots.append(c)
        r += 1
    return matrix_from_rows(a.carrier, work), tuple(pivots)


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def nullspace_basis(a: Matrix) -> list[Matrix]:
    """One column vector per free variable; empty when the columns are independent."""
    reduced, pivots = rref(a)
    carrier = a.carrier
    basis = []
    for free in range(a.cols):
        if free in pivots:
            continue
        values = [zero(carrier)] * a.cols
        values[free] = one(carrier)
        for i, p in enumerate(pivots):
            values[p] = neg(reduced[i, free])
        basis.append(column(carrier, values))
    return basis


def gauss_solve(a: Matrix, b: Matrix) -> Matrix | None:
    """A solution x of A*x = b with free variables set to 0; `None` when the system is inconsistent."""
    if b.cols != 1 or b.rows != a.rows:
        raise MatrixShapeError(f"Right-hand side must be a {a.rows}x1 column, got {b.rows}x{b.cols}")
    if a.carrier != b.carrier:
        raise MixedCarrierError(f"Cannot solve over {a.carrier} with a right-hand side over {b.carrier}")
    augmented = matrix_from_rows(a.carrier, [list(a.row(i)) + [b[i, 0]] for i in range(a.rows)])
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == a.cols:
        return None
    values = [zero(a.carrier)] * a.cols
    for i, p in enumerate(pivots):
        values[p] = reduced[i, a.cols]
    x = column(a.carrier, values)
    if mat_mul(a, x) != b:
        raise RuntimeError("Back substitution does not satisfy the system")
    return x


def coordinates_over_base(v: Matrix, base: CarrierDesc | None = None) -> tuple[NCElement, ...]:
    """Coordinates of `v` in the standard basis over `base`, position-major then basis-symbol order."""
    spec = space_of(v, base)
    scalars = spec.scalars
    out = []
    for x in v.entries:
        for t in spec.extension_basis:
            values = [0, 0, 0, 0]
            for b in scalars.coords:
                values[b] = x.coords[t | b]
            out.append(make_element(scalars, *values))
    return tuple(out)


def from_coordinates_over_base(values: Sequence[NCElement], spec: SpaceSpec) -> Matrix:
    """Inverse of `coordinates_over_base`."""
    basis = standard_basis(spec)
    if len(values) != len(basis):
        raise MatrixShapeError(f"Expected {len(basis)} coordinates, got {len(values)}")
    carrier = spec.element_carrier
    total = zero_matrix(carrier, spec.rows, spec.cols)
    for c, e in zip(values, basis, strict=True):
        total = mat_add(total, mat_scale(embed(c, carrier), e))
    return total


def dim_over_base(spec: SpaceSpec) -> int:
    return spec.rows * spec.cols * len(spec.extension_basis)


def standard_basis(spec: SpaceSpec) -> list[Matrix]:
    carrier = spec.element_carrier
    return [
        unit_matrix(carrier, spec.rows, spec.cols, i, j, basis_element(carrier, t))
        for i in range(spec.rows)
        for j in range(spec.cols)
        for t in spec.extension_basis
    ]


def _coordinate_matrix(vectors: Sequence[Matrix], spec: SpaceSpec) -> Matrix:
    """Base-coordinate vectors of `vectors`, as columns."""
    for v in vectors:
        if v.shape != spec.shape or v.carrier != spec.element_carrier:
            raise MatrixShapeError(f"Vector {v} does not belong to the {spec.rows}x{spec.cols} space")
    columns = [coordinates_over_base(v, spec.base) for v in vectors]
    return matrix_from_rows(spec.scalars, [list(row) for row in zip(*columns, strict=True)])


def in_span(v: Matrix, basis: Sequence[Matrix], base: CarrierDesc | None = None) -> tuple[NCElement, ...] | None:
    """Base coefficients expressing `v` over `basis`, or `None` when `v` is outside their span."""
    spec = space_of(v, base)
    require_field_carrier(spec.scalars)
    if not basis:
        return () if all(x.is_zero() for x in v.entries) else None
    solution = gauss_solve(_coordinate_matrix(basis, spec), column(spec.scalars, coordinates_over_base(v, base)))
    return None if solution is None else solution.entries


def char_poly(a: Matrix, max_size: int = MAX_CHAR_POLY_SIZE) -> Poly:
    """det(x*I - A) by cofactor expansion with polynomial entries."""
    if a.rows != a.cols:
        raise MatrixShapeError(f"Characteristic polynomial needs a square matrix, got {a.rows}x{a.cols}")
    if a.rows > max_size:
        raise SizeBudgetError(f"Characteristic polynomials are limited to {max_size}x{max_size}, got {a.rows}")
    require_field_carrier(a.carrier)
    carrier = a.carrier
    grid = [
        [make_poly(carrier, [neg(a[i, j]), one(carrier)]) if i == j else constant(neg(a[i, j])) for j in range(a.cols)]
        for i in range(a.rows)
    ]
    return laplace_det(grid, poly_add, poly_mul, poly_neg, Poly(carrier))


def _ring_nullspace(a: Matrix, max_vectors: int) -> list[Matrix]:
    """
    Generators of {v : A*v = 0} over a finite carrier that need not be a field. Null vectors are taken in
    enumeration order, first entry most significant, and each is kept only when it lies outside the span of the
    ones kept before it.
    """
    carrier = a.carrier
    n = require_finite(carrier)
    order = check_budget(carrier)
    if order**a.cols > max_vectors:
        raise BudgetExceededError(
            f"Eigen search over {carrier} walks {order}^{a.cols} vectors, over the vector budget of {max_vectors}"
        )
    m = len(carrier.coords)
    tensor = structure_constants(carrier)
    grid = np.array([[x.family_coords for x in a.row(i)] for i in range(a.rows)], dtype=np.int64)
    vectors = np.indices((n,) * (a.cols * m)).reshape(a.cols * m, -1).T.reshape(-1, a.cols, m).astype(np.int64)
    weights = n ** np.arange(a.cols * m - 1, -1, -1, dtype=np.int64)

    left = np.einsum("ija,abk->ijbk", grid, tensor) % n
    images = np.einsum("vjb,ijbk->vik", vectors, left) % n
    null = np.flatnonzero(~images.reshape(len(vectors), -1).any(axis=1))

    scalars = element_array(carrier)
    span_coords = np.zeros((1, a.cols, m), dtype=np.int64)
    span = {0}
    generators = []
    for index in null.tolist():
        if index in span:
            continue
        g = vectors[index]
        multiples = np.einsum("ra,jb,abk->rjk", scalars, g, tensor) % n
        span_coords = (span_coords[:, None] + multiples[None]).reshape(-1, a.cols, m) % n
        flat, first = np.unique(span_coords.reshape(len(span_coords), -1) @ weights, return_index=True)
        span_coords = span_coords[first]
        span = set(flat.tolist())
        generators.append(column(carrier, [element_from_coords(carrier, g[j]) for j in range(a.cols)]))
    return generators


class Eigenpair(NamedTuple):
    value: NCElement
    eigenbasis: list[Matrix]


def eigen_search(a: Matrix, search_carrier: CarrierDesc, max_vectors: int = MAX_EIGEN_VECTORS) -> list[Eigenpair]:
    """
    Every scalar c of `search_carrier` for which A - c*I has a nontrivial nullspace, in enumeration order, with
    a basis of that nullspace. `a` is embedded into the search carrier first, so values outside the matrix's own
    carrier are found.

    Over a field the basis comes from elimination. Over a carrier with zero divisors every vector of the search
    space is tried, c is reported whenever some nonzero v has (A - c*I)*v = 0, and the eigenbasis is a generating
    set of those v; `max_vectors` bounds that walk.
    """
    if a.rows != a.cols:
        raise MatrixShapeError(f"Eigen search needs a square matrix, got {a.rows}x{a.cols}")
    require_finite(search_carrier)
    embedded = mat_embed(a, search_carrier)
    ident = identity(search_carrier, a.rows)
    field = is_field_carrier(search_carrier)
    found = []
    for c in enumerate_elements(search_carrier):
        shifted = mat_sub(embedded, mat_scale(c, ident))
        basis = nullspace_basis(shifted) if field else _ring_nullspace(shifted, max_vectors)
        if basis:
            found.append(Eigenpair(c, basis))
    logger.debug(f"Eigen search over {search_carrier} found {len(found)} values")
    return found


def eigen_to_json(pairs: Sequence[Eigenpair]) -> dict[str, Any]:
    return {
        "values": [
            {"value": render(p.value), "eigenbasis": [[render(x) for x in v.entries] for v in p.eigenbasis]}
            for p in pairs
        ]
    }


def linear_functional_real_sum(v: Matrix, base: CarrierDesc) -> NCElement:
    """Sum of the real coordinates of all entries, as an element of the plain base ring."""
    if base.family != Family.MOD_PLAIN:
        raise UnsupportedCarrierError(f"The real-part functional takes values in a plain ring, not {base}")
    if base.modulus != v.carrier.modulus:
        raise MixedCarrierError(f"Cannot evaluate over {base} a matrix with entries in {v.carrier}")
    return make_element(base, sum(int(x.re) for x in v.entries))


class Closure(StrEnum):
    SCALAR = "scalar"
    ADD = "add"
    MUL = "mul"


type Member = NCElement | Matrix


@dataclass(frozen=True, slots=True)
class ClosureVerdict:
    """Outcome per requested closure; `None` for closures that were not requested."""

    is_scalar_closed: bool | None
    is_add_closed: bool | None
    is_mul_closed: bool | None
    scalar_violation: tuple[NCElement, Member] | None = None
    add_violation: tuple[Member, Member] | None = None
    mul_violation: tuple[Member, Member] | None = None

    @property
    def first_violation(self) -> tuple[Any, Any] | None:
        return self.scalar_violation or self.add_violation or self.mul_violation

    @property
    def classification(self) -> str:
        if not self.is_scalar_closed:
            return "none"
        if not self.is_add_closed:
            return "set vector space"
        if not self.is_mul_closed:
            return "set linear algebra"
        return "strong linear algebra"

    def to_json(self) -> dict[str, Any]:
        def pair(p: tuple[Any, Any] | None) -> list[str] | None:
            return None if p is None else [_render_member(m) for m in p]

        return {
            "scalar_closed": self.is_scalar_closed,
            "add_closed": self.is_add_closed,
            "mul_closed": self.is_mul_closed,
            "classification": self.classification,
            "scalar_violation": pair(self.scalar_violation),
            "add_violation": pair(self.add_violation),
            "mul_violation": pair(self.mul_violation),
        }


def _render_member(m: Member) -> str:
    return render(m) if isinstance(m, NCElement) else str(m)


def _scale(s: NCElement, v: Member) -> Member:
    if isinstance(v, Matrix):
        return mat_scale(embed(s, v.carrier), v)
    return mul(embed(s, v.carrier), v)


def _add(v: Member, w: Member) -> Member:
    if isinstance(v, Matrix) and isinstance(w, Matrix):
        return mat_add(v, w)
    if isinstance(v, NCElement) and isinstance(w, NCElement):
        return add(v, w)
    raise MixedCarrierError("Cannot mix elements and matrices in one set")


def _mul(v: Member, w: Member) -> Member:
    if isinstance(v, Matrix) and isinstance(w, Matrix):
        return mat_mul(v, w)
    if isinstance(v, NCElement) and isinstance(w, NCElement):
        return mul(v, w)
    raise MixedCarrierError("Cannot mix elements and matrices in one set")


def closure_check(
    members: Sequence[Member],
    scalars: Sequence[NCElement],
    flags: Iterable[Closure | str] = tuple(Closure),
) -> ClosureVerdict:
    """
    Exhaustive closure of a finite set under the scalar action, addition and internal multiplication.
    Violations are the first offending pair in the given order.
    """
    requested = {Closure(f) for f in flags}
    present = set(members)

    scalar_violation = None
    if Closure.SCALAR in requested:
        scalar_violation = next(((s, v) for s in scalars for v in members if _scale(s, v) not in present), None)
    add_violation = None
    if Closure.ADD in requested:
        add_violation = next(((v, w) for v in members for w in members if _add(v, w) not in present), None)
    mul_violation = None
    if Closure.MUL in requested:
        mul_violation = next(((v, w) for v in members for w in members if _mul(v, w) not in present), None)

    def verdict(flag: Closure, violation: tuple[Any, Any] | None) -> bool | None:
        return violation is None if flag in requested else None

    return ClosureVerdict(
        verdict(Closure.SCALAR, scalar_violation),
        verdict(Closure.ADD, add_violation),
        verdict(Closure.MUL, mul_violation),
        scalar_violation,
        add_violation,
        mul_violation,
    )


class SumKind(StrEnum):
    DIRECT = "direct"
    PSEUDO_DIRECT = "pseudo_direct"
    NEITHER = "neither"


class DirectSumVerdict(NamedTuple):
    kind: SumKind
    span_rank: int
    dimension: int
    intersection: tuple[int, int, Matrix] | None


def _intersection_witness(u: Sequence[Matrix], w: Sequence[Matrix], spec: SpaceSpec) -> Matrix | None:
    """A nonzero vector in span(u) and span(w), from the nullspace of [U | W]."""
    if not u or not w:
        return None
    joint = _coordinate_matrix([*u, *w], spec)
    for null in nullspace_basis(joint):
        alpha = null.entries[: len(u)]
        candidate = from_coordinates_over_base(
            mat_mul(_coordinate_matrix(u, spec), column(spec.scalars, alpha)).entries, spec
        )
        if any(not x.is_zero() for x in candidate.entries):
            return candidate
    return None


def check_direct_sum(bases: Sequence[Sequence[Matrix]], spec: SpaceSpec) -> DirectSumVerdict:
    """
    direct: the subspaces span the ambient space and meet pairwise in {0}.
    pseudo_direct: they span but some pair meets nontrivially. neither: they do not span.
    """
    require_field_carrier(spec.scalars)
    dimension = dim_over_base(spec)
    everything = [v for basis in bases for v in basis]
    span_rank = rank(_coordinate_matrix(everything, spec)) if everything else 0
    intersection = None
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            witness = _intersection_witness(bases[i], bases[j], spec)
            if witness is not None:
                intersection = (i, j, witness)
                break
        if intersection is not None:
            break
    if span_rank < dimension:
        kind = SumKind.NEITHER
    elif intersection is None:
        kind = SumKind.DIRECT
    else:
        kind = SumKind.PSEUDO_DIRECT
    return DirectSumVerdict(kind, span_rank, dimension, intersection)


class InvariantCheck(NamedTuple):
    holds: bool
    violation: tuple[Matrix, Matrix] | None


def invariant_subspace_check(t: Matrix, basis: Sequence[Matrix], base: CarrierDesc | None = None) -> InvariantCheck:
    """Whether T maps span(basis) into itself; a violation is (w, T*w) for the first basis vector that escapes."""
    if t.rows != t.cols:
        raise MatrixShapeError(f"Linear map must be square, got {t.rows}x{t.cols}")
    for w in basis:
        if w.rows != t.cols or w.cols != 1:
            raise MatrixShapeError(f"Basis vector must be a {t.cols}x1 column, got {w.rows}x{w.cols}")
        image = mat_mul(t, w)
        if in_span(image, basis, base) is None:
            return InvariantCheck(False, (w, image))
    return InvariantCheck(True, None)
