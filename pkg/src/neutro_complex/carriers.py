"""
Carrier descriptors, element values and scalar arithmetic for exact and modular neutrosophic complex numbers.

An element is a 4-tuple ``(re, im, neut, imneut)`` standing for ``a + b*u + c*I + d*uI`` where ``I`` is the
idempotent indeterminate (``I^2 = I``) and ``u`` is the complex unit: ``i`` with ``i^2 = -1`` for the exact family,
``iF`` with ``iF^2 = n - 1`` for the modular families.
"""

import logging
import math
import re
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import Any

import numpy as np
import sympy

logger = logging.getLogger(__name__)


class NCAlgebraError(ValueError):
    """Base class for domain errors raised by the algebra modules."""


class InvalidCarrierError(NCAlgebraError):
    """Raised when a carrier descriptor is built with a missing, superfluous or too small modulus."""


class MixedCarrierError(NCAlgebraError):
    """Raised when two values from different carriers are combined."""


class NotReducibleError(NCAlgebraError):
    """Raised when an exact element with a non-integer coordinate is reduced modulo n."""


class ShapeError(NCAlgebraError):
    """Raised when a coordinate is nonzero where the carrier family forces it to be zero."""


class FuzzyRangeError(NCAlgebraError):
    """Raised when a fuzzy coordinate lies outside [0, 1]."""


class UnsupportedCarrierError(NCAlgebraError):
    """Raised when an operation is asked of a carrier it is not defined on (e.g. elimination over a non-field)."""


class ElementParseError(ValueError):
    """
    Raised when a string does not follow the canonical element grammar.
    `position` is the 0-based offset of the offending character.
    """

    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at position {position} in {text!r}")
        self.message = message
        self.text = text
        self.position = position


class Family(StrEnum):
    EXACT = "exact"
    MOD_PLAIN = "mod-plain"
    MOD_COMPLEX = "mod-complex"
    MOD_NEUTRO = "mod-neutro"
    MOD_NEUTRO_COMPLEX = "mod-neutro-complex"


COORD_NAMES = ("re", "im", "neut", "imneut")

# Basis indices double as bit sets: bit 0 is u, bit 1 is I.
ONE, U, NEUT, U_NEUT = 0, 1, 2, 3

FAMILY_COORDS: dict[Family, tuple[int, ...]] = {
    Family.EXACT: (ONE, U, NEUT, U_NEUT),
    Family.MOD_PLAIN: (ONE,),
    Family.MOD_COMPLEX: (ONE, U),
    Family.MOD_NEUTRO: (ONE, NEUT),
    Family.MOD_NEUTRO_COMPLEX: (ONE, U, NEUT, U_NEUT),
}

# e_i * e_j = s^power * e_k, where s = u^2. Derived from u^2 = s, I^2 = I, (uI)^2 = s*I
# together with u*I = uI, I*uI = uI and u*uI = s*I.
_BASIS_RELATIONS: dict[tuple[int, int], tuple[int, int]] = {
    (U, U): (1, ONE),
    (NEUT, NEUT): (0, NEUT),
    (U_NEUT, U_NEUT): (1, NEUT),
    (U, NEUT): (0, U_NEUT),
    (NEUT, U_NEUT): (0, U_NEUT),
    (U, U_NEUT): (1, NEUT),
}


def _basis_table() -> dict[tuple[int, int], tuple[int, int]]:
    table: dict[tuple[int, int], tuple[int, int]] = {}
    for j in range(4):
        table[(ONE, j)] = (0, j)
        table[(j, ONE)] = (0, j)
    for (i, j), prod in _BASIS_RELATIONS.items():
        table[(i, j)] = prod
        table[(j, i)] = prod
    return table


BASIS_PRODUCTS = _basis_table()


@dataclass(frozen=True, slots=True)
class CarrierDesc:
    family: Family
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.family == Family.EXACT:
            if self.modulus is not None:
                raise InvalidCarrierError(f"The exact family takes no modulus, got {self.modulus}")
        elif self.modulus is None or self.modulus < 2:
            raise InvalidCarrierError(f"Family {self.family} needs a modulus >= 2, got {self.modulus}")

    @property
    def is_modular(self) -> bool:
        return self.family != Family.EXACT

    @property
    def coords(self) -> tuple[int, ...]:
        return FAMILY_COORDS[self.family]

    @property
    def order(self) -> int | None:
        """Number of elements, `None` for the infinite exact carrier."""
        if self.modulus is None:
            return None
        return self.modulus ** len(self.coords)

    @property
    def unit_square(self) -> int:
        """The value of u^2: -1 for the exact family, n - 1 otherwise."""
        return -1 if self.modulus is None else self.modulus - 1

    def __str__(self) -> str:
        n = self.modulus
        match self.family:
            case Family.EXACT:
                return "C(<Q u I>)"
            case Family.MOD_PLAIN:
                return f"Z_{n}"
            case Family.MOD_COMPLEX:
                return f"C(Z_{n})"
            case Family.MOD_NEUTRO:
                return f"<Z_{n} u I>"
            case Family.MOD_NEUTRO_COMPLEX:
                return f"C(<Z_{n} u I>)"


def make_carrier(family: Family | str, modulus: int | None = None) -> CarrierDesc:
    try:
        family = Family(family)
    except ValueError as e:
        raise InvalidCarrierError(f"Unknown carrier family: {family}") from e
    return CarrierDesc(family, modulus)


Coord = int | Fraction


@dataclass(frozen=True, slots=True)
class NCElement:
    """
    A value ``re + im*u + neut*I + imneut*uI`` of `carrier`.

    Modular coordinates are canonical residues in [0, n - 1]; exact coordinates are stored as `Fraction`.
    Use `make_element` to build a value from arbitrary integers; the constructor only accepts canonical input.
    """

    carrier: CarrierDesc
    re: Coord = 0
    im: Coord = 0
    neut: Coord = 0
    imneut: Coord = 0

    def __post_init__(self) -> None:
        values = (self.re, self.im, self.neut, self.imneut)
        carrier = self.carrier
        if carrier.modulus is None:
            for name, value in zip(COORD_NAMES, values, strict=True):
                if not isinstance(value, Fraction):
                    object.__setattr__(self, name, Fraction(value))
            return
        allowed = carrier.coords
        for idx, value in enumerate(values):
            if not isinstance(value, int) or not 0 <= value < carrier.modulus:
                raise ShapeError(f"Coordinate {COORD_NAMES[idx]}={value!r} is not a residue mod {carrier.modulus}")
            if value and idx not in allowed:
                raise ShapeError(f"Coordinate {COORD_NAMES[idx]} must be 0 in {carrier}")

    @property
    def coords(self) -> tuple[Coord, Coord, Coord, Coord]:
        return (self.re, self.im, self.neut, self.imneut)

    @property
    def family_coords(self) -> tuple[Coord, ...]:
        """Coordinates restricted to the positions the carrier family admits."""
        values = self.coords
        return tuple(values[i] for i in self.carrier.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "NCElement") -> "NCElement":
        return add(self, other)

    def __sub__(self, other: "NCElement") -> "NCElement":
        return sub(self, other)

    def __neg__(self) -> "NCElement":
        return neg(self)

    def __mul__(self, other: "NCElement") -> "NCElement":
        return mul(self, other)

    def __pow__(self, k: int) -> "NCElement":
        return power(self, k)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"NCElement({self.carrier}, {render(self)})"


def _reduce(carrier: CarrierDesc, values: Sequence[Coord]) -> NCElement:
    n = carrier.modulus
    if n is None:
        return NCElement(carrier, *(Fraction(v) for v in values))
    return NCElement(carrier, *(int(v) % n for v in values))


def make_element(carrier: CarrierDesc, re: Coord = 0, im: Coord = 0, neut: Coord = 0, imneut: Coord = 0) -> NCElement:
    """Build an element from arbitrary integer (or, for the exact family, rational) coordinates."""
    if carrier.modulus is not None:
        for name, value in zip(COORD_NAMES, (re, im, neut, imneut), strict=True):
            if isinstance(value, Fraction) and value.denominator != 1:
                raise NotReducibleError(f"Coordinate {name}={value} is not an integer")
    return _reduce(carrier, (re, im, neut, imneut))


def zero(carrier: CarrierDesc) -> NCElement:
    return _reduce(carrier, (0, 0, 0, 0))


def one(carrier: CarrierDesc) -> NCElement:
    return _reduce(carrier, (1, 0, 0, 0))


def scalar(carrier: CarrierDesc, value: Coord) -> NCElement:
    return make_element(carrier, value)


def basis_element(carrier: CarrierDesc, index: int) -> NCElement:
    """The basis element 1, u, I or uI (index 0..3); it must belong to the carrier family."""
    if index not in carrier.coords:
        raise ShapeError(f"Basis element {index} does not belong to {carrier}")
    values = [0, 0, 0, 0]
    values[index] = 1
    return _reduce(carrier, values)


def _check_same(x: NCElement, y: NCElement) -> CarrierDesc:
    if x.carrier != y.carrier:
        raise MixedCarrierError(f"Cannot combine elements of {x.carrier} and {y.carrier}")
    return x.carrier


def add(x: NCElement, y: NCElement) -> NCElement:
    carrier = _check_same(x, y)
    return _reduce(carrier, [a + b for a, b in zip(x.coords, y.coords, strict=True)])


def neg(x: NCElement) -> NCElement:
    return _reduce(x.carrier, [-a for a in x.coords])


def sub(x: NCElement, y: NCElement) -> NCElement:
    carrier = _check_same(x, y)
    return _reduce(carrier, [a - b for a, b in zip(x.coords, y.coords, strict=True)])


def _mul_coords(x: Sequence[Coord], y: Sequence[Coord], s: Coord) -> tuple[Coord, Coord, Coord, Coord]:
    a, b, c, d = x
    e, f, g, h = y
    return (
        a * e + s * b * f,
        a * f + b * e,
        a * g + c * e + c * g + s * (b * h + d * f + d * h),
        a * h + d * e + b * g + c * f + c * h + d * g,
    )


def _expand_coords(x: Sequence[Coord], y: Sequence[Coord], s: Coord) -> list[Coord]:
    """Distributive expansion of x*y through the basis product table."""
    out: list[Coord] = [0, 0, 0, 0]
    for i in range(4):
        for j in range(4):
            power_of_s, k = BASIS_PRODUCTS[(i, j)]
            out[k] += x[i] * y[j] * s**power_of_s
    return out


def verify_multiplication_table() -> None:
    """
    Check the closed-form product against distributive expansion over the basis table, for generic
    coordinates and several values of u^2. Raises `RuntimeError` on disagreement.
    """
    samples = [(2, 3, 5, 7), (11, 13, 17, 19), (1, 0, 0, 0), (0, 1, 0, 1), (0, 0, 1, 0)]
    for s in (-1, 4, 6, 10):
        for x in samples:
            for y in samples:
                if list(_mul_coords(x, y, s)) != _expand_coords(x, y, s):
                    raise RuntimeError(f"Multiplication table disagrees with expansion for {x} * {y}, u^2={s}")
    for (i, j), (p, k) in BASIS_PRODUCTS.items():
        if BASIS_PRODUCTS[(j, i)] != (p, k):
            raise RuntimeError(f"Basis table is not commutative at ({i}, {j})")
    logger.debug("Multiplication table verified")


def mul(x: NCElement, y: NCElement) -> NCElement:
    carrier = _check_same(x, y)
    return _reduce(carrier, _mul_coords(x.coords, y.coords, carrier.unit_square))


def power(x: NCElement, k: int) -> NCElement:
    if k < 0:
        raise ValueError(f"Exponent must be non-negative, got {k}")
    result = one(x.carrier)
    base = x
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def conjugate(x: NCElement) -> NCElement:
    """a + b*u + c*I + d*uI -> a - b*u + c*I - d*uI; fixes I and negates both u-bearing coordinates."""
    a, b, c, d = x.coords
    return _reduce(x.carrier, (a, -b, c, -d))


def norm(x: NCElement) -> NCElement:
    return mul(x, conjugate(x))


def structure_constants(carrier: CarrierDesc) -> np.ndarray:
    """
    Tensor T with e_i * e_j = sum_k T[i, j, k] e_k over the family's basis, entries reduced mod n.
    Indices are positions within `carrier.coords`.
    """
    if carrier.modulus is None:
        raise UnsupportedCarrierError("Structure constants are only tabulated for modular carriers")
    coords = carrier.coords
    pos = {c: i for i, c in enumerate(coords)}
    k = len(coords)
    table = np.zeros((k, k, k), dtype=np.int64)
    for i, ci in enumerate(coords):
        for j, cj in enumerate(coords):
            power_of_s, target = BASIS_PRODUCTS[(ci, cj)]
            table[i, j, pos[target]] = carrier.unit_square**power_of_s % carrier.modulus
    return table


def left_multiplication_matrix(x: NCElement) -> list[list[Coord]]:
    """Matrix L over the base ring with L @ coords(y) = coords(x*y), restricted to the family's coordinates."""
    carrier = x.carrier
    coords = carrier.coords
    columns = []
    for j in coords:
        e = [0, 0, 0, 0]
        e[j] = 1
        prod = _mul_coords(x.coords, e, carrier.unit_square)
        columns.append([prod[i] for i in coords])
    return [[columns[j][i] for j in range(len(coords))] for i in range(len(coords))]


def _from_family_coords(carrier: CarrierDesc, values: Sequence[Coord]) -> NCElement:
    full: list[Coord] = [0, 0, 0, 0]
    for idx, value in zip(carrier.coords, values, strict=True):
        full[idx] = value
    return _reduce(carrier, full)


def try_inverse(x: NCElement) -> NCElement | None:
    """
    Solve L*y = e1 where L is the left-multiplication matrix of `x`; `None` when `x` is not a unit.
    The candidate is re-verified by multiplication.
    """
    carrier = x.carrier
    matrix = sympy.Matrix(left_multiplication_matrix(x))
    k = len(carrier.coords)
    if carrier.modulus is None:
        if matrix.det() == 0:
            return None
        solution = matrix.LUsolve(sympy.Matrix([1] + [0] * (k - 1)))
        values: list[Coord] = [Fraction(int(v.p), int(v.q)) for v in solution]
    else:
        try:
            inverse = matrix.inv_mod(carrier.modulus)
        except ValueError:
            return None
        values = [int(inverse[i, 0]) for i in range(k)]
    y = _from_family_coords(carrier, values)
    if mul(x, y) != one(carrier):
        logger.warning(f"Linear solve produced a non-inverse for {x!r}")
        return None
    return y


def embed(x: NCElement, carrier: CarrierDesc) -> NCElement:
    """Coordinate-preserving inclusion of `x` into another family with the same modulus."""
    if x.carrier == carrier:
        return x
    if x.carrier.modulus != carrier.modulus:
        raise MixedCarrierError(f"Cannot embed {x.carrier} into {carrier}")
    return NCElement(carrier, *x.coords)


def reduce_mod(x: NCElement, target: CarrierDesc) -> NCElement:
    """Coordinatewise residue of an exact element with integer coordinates; a ring homomorphism."""
    if x.carrier.is_modular:
        raise NotReducibleError(f"reduce_mod expects an exact element, got one of {x.carrier}")
    if target.modulus is None:
        raise InvalidCarrierError("reduce_mod needs a modular target carrier")
    residues = []
    for name, value in zip(COORD_NAMES, x.coords, strict=True):
        if Fraction(value).denominator != 1:
            raise NotReducibleError(f"Coordinate {name}={value} is not an integer")
        residues.append(int(value) % target.modulus)
    for idx, residue in enumerate(residues):
        if residue and idx not in target.coords:
            raise ShapeError(f"Coordinate {COORD_NAMES[idx]} of {render(x)} does not reduce to 0 in {target}")
    return NCElement(target, *residues)


def content_gcd(x: NCElement, y: NCElement) -> int:
    """gcd of all eight integer coordinates of two exact elements; 0 when both are zero."""
    values = []
    for value in (*x.coords, *y.coords):
        value = Fraction(value)
        if value.denominator != 1:
            raise NotReducibleError(f"content_gcd needs integer coordinates, got {value}")
        values.append(int(value))
    return math.gcd(*values)


@dataclass(frozen=True, slots=True)
class FuzzyNC:
    """Fuzzy neutrosophic complex number: four rational coordinates in [0, 1]."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)
    neut: Fraction = Fraction(0)
    imneut: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in COORD_NAMES:
            value = Fraction(getattr(self, name))
            if not 0 <= value <= 1:
                raise FuzzyRangeError(f"Fuzzy coordinate {name}={value} is outside [0, 1]")
            object.__setattr__(self, name, value)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.re, self.im, self.neut, self.imneut)


def fuzzy_meet(x: FuzzyNC, y: FuzzyNC) -> FuzzyNC:
    return FuzzyNC(*(min(a, b) for a, b in zip(x.coords, y.coords, strict=True)))


def fuzzy_join(x: FuzzyNC, y: FuzzyNC) -> FuzzyNC:
    return FuzzyNC(*(max(a, b) for a, b in zip(x.coords, y.coords, strict=True)))


_MOD_SYMBOLS = ("", "iF", "I", "iFI")
_EXACT_SYMBOLS = ("", "i", "I", "iI")

_MOD_TERM_RE = re.compile(r"(?P<coef>\d+)?(?P<sym>iFI|iF|I)?")
_EXACT_TERM_RE = re.compile(r"(?P<coef>\d+(?:/\d+)?)?(?P<sym>iI|i|I)?")


def _symbols(carrier: CarrierDesc) -> tuple[str, ...]:
    return _MOD_SYMBOLS if carrier.is_modular else _EXACT_SYMBOLS


def render(x: NCElement) -> str:
    """
    Canonical string: terms in re, iF, I, iFI order, coefficient 1 elided before a symbol, zero terms omitted,
    "0" for zero. Exact elements use i/iI and signed rational coefficients.
    """
    symbols = _symbols(x.carrier)
    parts: list[str] = []
    for value, sym in zip(x.coords, symbols, strict=True):
        if not value:
            continue
        sign = "-" if value < 0 else "+"
        magnitude = abs(value)
        body = sym if sym and magnitude == 1 else f"{magnitude}{sym}"
        if parts or sign == "-":
            parts.append(f"{sign}{body}")
        else:
            parts.append(body)
    return "".join(parts) or "0"


def parse(text: str, carrier: CarrierDesc) -> NCElement:
    symbols = _symbols(carrier)
    term_re = _MOD_TERM_RE if carrier.is_modular else _EXACT_TERM_RE
    signs = "+" if carrier.is_modular else "+-"
    values: list[Coord] = [0, 0, 0, 0]
    pos = 0
    last_index = -1
    sign = 1
    if not carrier.is_modular and text.startswith("-"):
        sign = -1
        pos = 1
    while True:
        match = term_re.match(text, pos)
        if match is None or match.end() == pos:
            raise ElementParseError("Expected a term", text, pos)
        coef_text, sym = match.group("coef"), match.group("sym") or ""
        index = symbols.index(sym)
        if index <= last_index:
            raise ElementParseError(f"Term {sym or 'constant'} out of order", text, pos)
        if index not in carrier.coords:
            raise ElementParseError(f"Symbol {sym} is not part of {carrier}", text, pos)
        if coef_text is not None and "/" in coef_text:
            slash = coef_text.index("/")
            if int(coef_text[slash + 1 :]) == 0:
                raise ElementParseError("Zero denominator", text, pos + slash + 1)
        values[index] = sign * (Fraction(coef_text) if coef_text is not None else 1)
        last_index = index
        pos = match.end()
        if pos == len(text):
            break
        if text[pos] not in signs:
            raise ElementParseError(f"Unexpected character {text[pos]!r}", text, pos)
        sign = -1 if text[pos] == "-" else 1
        pos += 1
    if carrier.is_modular:
        return _reduce(carrier, [int(v) for v in values])
    return _reduce(carrier, values)


def carrier_to_json(carrier: CarrierDesc) -> dict[str, Any]:
    if carrier.modulus is None:
        return {"family": str(carrier.family)}
    return {"family": str(carrier.family), "modulus": carrier.modulus}


def carrier_from_json(data: dict[str, Any]) -> CarrierDesc:
    return make_carrier(data["family"], data.get("modulus"))


def _coord_to_json(value: Coord) -> int | str:
    value = Fraction(value)
    return int(value) if value.denominator == 1 else str(value)


def element_to_json(x: NCElement) -> dict[str, int | str]:
    return {name: _coord_to_json(value) for name, value in zip(COORD_NAMES, x.coords, strict=True)}


def element_from_json(data: dict[str, Any], carrier: CarrierDesc) -> NCElement:
    values = [Fraction(data.get(name, 0)) for name in COORD_NAMES]
    return make_element(carrier, *values)
