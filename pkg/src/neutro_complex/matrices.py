import itertools
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from .carriers import (
    CarrierDesc,
    ElementParseError,
    MixedCarrierError,
    NCAlgebraError,
    NCElement,
    UnsupportedCarrierError,
    add,
    carrier_from_json,
    carrier_to_json,
    embed,
    mul,
    neg,
    one,
    parse,
    render,
    try_inverse,
    zero,
)
from .config import MAX_DET_SIZE, MAX_IDEAL_CARRIER_ORDER, MAX_IDEAL_MATRIX_SIZE, MAX_IDEAL_PRODUCTS
from .scan import BudgetExceededError, Side, cayley_table, check_budget, enumerate_elements, require_field_carrier

logger = logging.getLogger(__name__)


class MatrixShapeError(NCAlgebraError):
    """Raised when matrix dimensions do not fit the operation."""


class SizeBudgetError(NCAlgebraError):
    """Raised when a factorial-cost operation (Laplace expansion) is asked of a matrix over its size budget."""


@dataclass(frozen=True, slots=True)
class Matrix:
    """Row-major matrix of elements sharing one carrier."""

    carrier: CarrierDesc
    rows: int
    cols: int
    entries: tuple[NCElement, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise MatrixShapeError(f"Matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise MatrixShapeError(f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries")
        for x in self.entries:
            if x.carrier != self.carrier:
                raise MixedCarrierError(f"Entry {x!r} does not belong to {self.carrier}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, pos: tuple[int, int]) -> NCElement:
        i, j = pos
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[NCElement, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[NCElement, ...]:
        return self.entries[j :: self.cols]

    def grid(self) -> list[list[NCElement]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __add__(self, other: "Matrix") -> "Matrix":
        return mat_add(self, other)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return mat_sub(self, other)

    def __neg__(self) -> "Matrix":
        return mat_neg(self)

    def __mul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(render(x) for x in self.row(i)) for i in range(self.rows)) + "]"


def matrix_from_entries(carrier: CarrierDesc, rows: int, cols: int, entries: Sequence[NCElement]) -> Matrix:
    return Matrix(carrier, rows, cols, tuple(entries))


def matrix_from_rows(carrier: CarrierDesc, rows: Sequence[Sequence[NCElement]]) -> Matrix:
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise MatrixShapeError(f"Rows have differing lengths: {sorted(widths)}")
    return Matrix(carrier, len(rows), widths.pop(), tuple(x for r in rows for x in r))


def zero_matrix(carrier: CarrierDesc, rows: int, cols: int) -> Matrix:
    return Matrix(carrier, rows, cols, (zero(carrier),) * (rows * cols))


def diagonal(carrier: CarrierDesc, values: Sequence[NCElement]) -> Matrix:
    k = len(values)
    return Matrix(carrier, k, k, tuple(values[i] if i == j else zero(carrier) for i in range(k) for j in range(k)))


def identity(carrier: CarrierDesc, k: int) -> Matrix:
    return diagonal(carrier, [one(carrier)] * k)


def unit_matrix(carrier: CarrierDesc, rows: int, cols: int, i: int, j: int, value: NCElement) -> Matrix:
    entries = [zero(carrier)] * (rows * cols)
    entries[i * cols + j] = value
    return Matrix(carrier, rows, cols, tuple(entries))


def _same_shape(a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise MatrixShapeError(f"Shape mismatch: {a.rows}x{a.cols} vs {b.rows}x{b.cols}")
    if a.carrier != b.carrier:
        raise MixedCarrierError(f"Cannot combine matrices over {a.carrier} and {b.carrier}")


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    _same_shape(a, b)
    return Matrix(a.carrier, a.rows, a.cols, tuple(add(x, y) for x, y in zip(a.entries, b.entries, strict=True)))


def mat_neg(a: Matrix) -> Matrix:
    return Matrix(a.carrier, a.rows, a.cols, tuple(neg(x) for x in a.entries))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return mat_add(a, mat_neg(b))


def mat_scale(s: NCElement, a: Matrix) -> Matrix:
    if s.carrier != a.carrier:
        raise MixedCarrierError(f"Scalar from {s.carrier} cannot scale a matrix over {a.carrier}")
    return Matrix(a.carrier, a.rows, a.cols, tuple(mul(s, x) for x in a.entries))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise MatrixShapeError(f"Cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    if a.carrier != b.carrier:
        raise MixedCarrierError(f"Cannot multiply matrices over {a.carrier} and {b.carrier}")
    entries = []
    for i in range(a.rows):
        row = a.row(i)
        for j in range(b.cols):
            acc = zero(a.carrier)
            for x, y in zip(row, b.column(j), strict=True):
                acc = add(acc, mul(x, y))
            entries.append(acc)
    return Matrix(a.carrier, a.rows, b.cols, tuple(entries))


def transpose(a: Matrix) -> Matrix:
    return Matrix(a.carrier, a.cols, a.rows, tuple(x for j in range(a.cols) for x in a.column(j)))


def mat_embed(a: Matrix, carrier: CarrierDesc) -> Matrix:
    """Entrywise inclusion into another family of the same modulus."""
    return Matrix(carrier, a.rows, a.cols, tuple(embed(x, carrier) for x in a.entries))


def laplace_det[T](
    grid: Sequence[Sequence[T]],
    add_: Callable[[T, T], T],
    mul_: Callable[[T, T], T],
    neg_: Callable[[T], T],
    zero_: T,
) -> T:
    """Cofactor expansion along the first row over any commutative ring given by its operations."""
    size = len(grid)
    if size == 1:
        return grid[0][0]
    total = zero_
    for j, pivot in enumerate(grid[0]):
        if pivot == zero_:
            continue
        minor = [list(row[:j]) + list(row[j + 1 :]) for row in grid[1:]]
        term = mul_(pivot, laplace_det(minor, add_, mul_, neg_, zero_))
        total = add_(total, neg_(term) if j % 2 else term)
    return total


def mat_det(a: Matrix, max_size: int = MAX_DET_SIZE) -> NCElement:
    if a.rows != a.cols:
        raise MatrixShapeError(f"Determinant needs a square matrix, got {a.rows}x{a.cols}")
    if a.rows > max_size:
        raise SizeBudgetError(f"Laplace expansion is limited to {max_size}x{max_size}, got {a.rows}x{a.rows}")
    return laplace_det(a.grid(), add, mul, neg, zero(a.carrier))


def is_invertible(a: Matrix, max_size: int = MAX_DET_SIZE) -> bool:
    """A square matrix over a commutative carrier is invertible iff its determinant is a unit."""
    return try_inverse(mat_det(a, max_size=max_size)) is not None


def mat_inverse(a: Matrix) -> Matrix | None:
    """Gauss-Jordan inverse over a field carrier; `None` when singular. The result is re-multiplied against `a`."""
    if a.rows != a.cols:
        raise MatrixShapeError(f"Inverse needs a square matrix, got {a.rows}x{a.cols}")
    require_field_carrier(a.carrier)
    k = a.rows
    carrier = a.carrier
    ident = identity(carrier, k)
    work = [list(a.row(i)) + list(ident.row(i)) for i in range(k)]
    for col in range(k):
        pivot_row = next((r for r in range(col, k) if not work[r][col].is_zero()), None)
        if pivot_row is None:
            return None
        work[col], work[pivot_row] = work[pivot_row], work[col]
        inverse = try_inverse(work[col][col])
        assert inverse is not None
        work[col] = [mul(inverse, x) for x in work[col]]
        for r in range(k):
            if r != col and not work[r][col].is_zero():
                factor = work[r][col]
                work[r] = [add(x, neg(mul(factor, y))) for x, y in zip(work[r], work[col], strict=True)]
    result = matrix_from_rows(carrier, [row[k:] for row in work])
    if mat_mul(a, result) != ident:
        raise RuntimeError(f"Gauss-Jordan produced a non-inverse for {a}")
    return result


def matrix_space_order(carrier: CarrierDesc, rows: int, cols: int) -> int:
    """Order of the additive group of rows x cols matrices: |carrier|^(rows*cols)."""
    order = carrier.order
    if order is None:
        raise UnsupportedCarrierError(f"{carrier} is infinite")
    return order ** (rows * cols)


def enumerate_matrices(carrier: CarrierDesc, rows: int, cols: int, max_count: int = 10**5) -> list[Matrix]:
    count = matrix_space_order(carrier, rows, cols)
    if count > max_count:
        raise BudgetExceededError(f"{count} matrices over {carrier}, over the budget of {max_count}")
    elements = enumerate_elements(carrier)
    return [Matrix(carrier, rows, cols, combo) for combo in itertools.product(elements, repeat=rows * cols)]


class MatrixIdealCheck(NamedTuple):
    holds: bool
    counterexample: tuple[Matrix, Matrix, Matrix] | None
    reason: str


def _table_product(
    left: np.ndarray, right: np.ndarray, k: int, add_table: np.ndarray, mul_table: np.ndarray
) -> np.ndarray:
    """k x k matrix products on element indices; `left`/`right` broadcast over a leading batch axis."""
    out = []
    for i in range(k):
        for j in range(k):
            acc = np.zeros(np.broadcast_shapes(left[..., 0].shape, right[..., 0].shape), dtype=np.int64)
            for m in range(k):
                acc = add_table[acc, mul_table[left[..., i * k + m], right[..., m * k + j]]]
            out.append(acc)
    return np.stack(out, axis=-1)


def check_matrix_ideal(
    mask: Sequence[Sequence[bool]],
    carrier: CarrierDesc,
    side: Side | str = Side.TWO_SIDED,
    max_size: int = MAX_IDEAL_MATRIX_SIZE,
    max_carrier_order: int = MAX_IDEAL_CARRIER_ORDER,
    max_products: int = MAX_IDEAL_PRODUCTS,
) -> MatrixIdealCheck:
    """
    Whether the k x k matrices supported on `mask` form a left/right/two-sided ideal of the full matrix ring,
    checked against every ring element. Supported matrices always form an additive subgroup.
    A counterexample is (ring element R, member N, offending product).
    """
    side = Side(side)
    k = len(mask)
    if any(len(row) != k for row in mask):
        raise MatrixShapeError("Ideal mask must be square")
    if k > max_size:
        raise BudgetExceededError(f"Matrix ideal checks are limited to {max_size}x{max_size}, got {k}x{k}")
    order = check_budget(carrier, max_order=max_carrier_order)
    if all(all(row) for row in mask) or not any(any(row) for row in mask):
        return MatrixIdealCheck(True, None, f"{side} ideal")
    free = [i * k + j for i in range(k) for j in range(k) if mask[i][j]]
    ring = np.indices((order,) * (k * k)).reshape(k * k, -1).T
    members = np.zeros((order ** len(free), k * k), dtype=np.int64)
    members[:, free] = np.indices((order,) * len(free)).reshape(len(free), -1).T
    sides = [s for s in (Side.LEFT, Side.RIGHT) if side in (s, Side.TWO_SIDED)]
    products = len(ring) * len(members) * len(sides)
    if products > max_products:
        raise BudgetExceededError(f"Matrix ideal check needs {products} products, over the budget of {max_products}")
    logger.info(f"Checking {side} ideal of {k}x{k} matrices over {carrier}: {products} products")

    add_table = cayley_table(carrier, "add")
    mul_table = cayley_table(carrier, "mul")
    outside = [p for p in range(k * k) if p not in free]
    elements = enumerate_elements(carrier)

    def to_matrix(indices: np.ndarray) -> Matrix:
        return Matrix(carrier, k, k, tuple(elements[int(i)] for i in indices))

    for this_side in sides:
        for member in members:
            if this_side == Side.LEFT:
                prod = _table_product(ring, member, k, add_table, mul_table)
            else:
                prod = _table_product(member, ring, k, add_table, mul_table)
            bad = np.flatnonzero(np.any(prod[:, outside] != 0, axis=1))
            if bad.size:
                r = int(bad[0])
                return MatrixIdealCheck(
                    False,
                    (to_matrix(ring[r]), to_matrix(member), to_matrix(prod[r])),
                    f"does not absorb {this_side} multiplication",
                )
    return MatrixIdealCheck(True, None, f"{side} ideal")


def matrix_to_json(a: Matrix) -> dict[str, Any]:
    return {
        "carrier": carrier_to_json(a.carrier),
        "rows": a.rows,
        "cols": a.cols,
        "entries": [render(x) for x in a.entries],
    }


def matrix_from_json(data: dict[str, Any]) -> Matrix:
    carrier = carrier_from_json(data["carrier"])
    return Matrix(carrier, data["rows"], data["cols"], tuple(parse(s, carrier) for s in data["entries"]))


def matrix_to_csv(a: Matrix) -> str:
    return "".join(",".join(render(x) for x in a.row(i)) + "\n" for i in range(a.rows))


def parse_grid(text: str, carrier: CarrierDesc) -> Matrix:
    """Inline grid: rows separated by ';', entries by ','. e.g. "1,iF;2iF,0"."""
    rows: list[list[NCElement]] = []
    offset = 0
    for row_text in text.split(";"):
        row: list[NCElement] = []
        for cell in row_text.split(","):
            stripped = cell.strip()
            try:
                row.append(parse(stripped, carrier))
            except ElementParseError as e:
                lead = len(cell) - len(cell.lstrip())
                raise ElementParseError(e.message, text, offset + lead + e.position) from e
            offset += len(cell) + 1
        rows.append(row)
    if len({len(r) for r in rows}) != 1:
        raise ElementParseError("Rows have differing lengths", text, 0)
    return matrix_from_rows(carrier, rows)

