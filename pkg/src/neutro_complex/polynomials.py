import logging
import math
import re
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, NamedTuple

from .carriers import (
    CarrierDesc,
    ElementParseError,
    MixedCarrierError,
    NCAlgebraError,
    NCElement,
    add,
    carrier_from_json,
    carrier_to_json,
    make_element,
    mul,
    neg,
    one,
    parse,
    render,
    try_inverse,
    zero,
)
from .config import DEFAULT_ROOT_BOUND, MAX_IRREDUCIBLE_DEGREE
from .scan import enumerate_elements, require_field_carrier

logger = logging.getLogger(__name__)

ZERO_DEGREE = -math.inf


class NotDivisibleError(NCAlgebraError):
    """Raised when a divisor's leading coefficient is not a unit."""


class PolyZeroDivisionError(ZeroDivisionError, NCAlgebraError):
    """Raised on division by the zero polynomial."""


class DegreeRangeError(NCAlgebraError):
    """Raised when an operation is asked of a polynomial outside its supported degree range."""


@dataclass(frozen=True, slots=True)
class Poly:
    """Dense polynomial; `coeffs[i]` is the coefficient of x^i and the last coefficient is nonzero."""

    carrier: CarrierDesc
    coeffs: tuple[NCElement, ...] = ()

    def __post_init__(self) -> None:
        for c in self.coeffs:
            if c.carrier != self.carrier:
                raise MixedCarrierError(f"Coefficient {c!r} does not belong to {self.carrier}")
        if self.coeffs and self.coeffs[-1].is_zero():
            raise ValueError("Poly coefficients must be normalized; use make_poly")

    @property
    def degree(self) -> int | float:
        """Degree, or -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def leading(self) -> NCElement:
        return self.coeffs[-1] if self.coeffs else zero(self.carrier)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> NCElement:
        return self.coeffs[i] if i < len(self.coeffs) else zero(self.carrier)

    def __add__(self, other: "Poly") -> "Poly":
        return poly_add(self, other)

    def __sub__(self, other: "Poly") -> "Poly":
        return poly_sub(self, other)

    def __neg__(self) -> "Poly":
        return poly_neg(self)

    def __mul__(self, other: "Poly") -> "Poly":
        return poly_mul(self, other)

    def __str__(self) -> str:
        return render_poly(self)


def make_poly(carrier: CarrierDesc, coeffs: Sequence[NCElement]) -> Poly:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return Poly(carrier, tuple(coeffs))


def constant(value: NCElement) -> Poly:
    return make_poly(value.carrier, [value])


def monomial(coeff: NCElement, degree: int) -> Poly:
    return make_poly(coeff.carrier, [zero(coeff.carrier)] * degree + [coeff])


def linear_factor(root: NCElement) -> Poly:
    """x - root."""
    return make_poly(root.carrier, [neg(root), one(root.carrier)])


def _check_same(p: Poly, q: Poly) -> CarrierDesc:
    if p.carrier != q.carrier:
        raise MixedCarrierError(f"Cannot combine polynomials over {p.carrier} and {q.carrier}")
    return p.carrier


def poly_add(p: Poly, q: Poly) -> Poly:
    carrier = _check_same(p, q)
    size = max(len(p.coeffs), len(q.coeffs))
    return make_poly(carrier, [add(p.coeff(i), q.coeff(i)) for i in range(size)])


def poly_neg(p: Poly) -> Poly:
    return make_poly(p.carrier, [neg(c) for c in p.coeffs])


def poly_sub(p: Poly, q: Poly) -> Poly:
    return poly_add(p, poly_neg(q))


def poly_scale(s: NCElement, p: Poly) -> Poly:
    if s.carrier != p.carrier:
        raise MixedCarrierError(f"Cannot scale a polynomial over {p.carrier} by an element of {s.carrier}")
    return make_poly(p.carrier, [mul(s, c) for c in p.coeffs])


def poly_mul(p: Poly, q: Poly) -> Poly:
    """Cauchy product. Over carriers with zero divisors the degree may drop."""
    carrier = _check_same(p, q)
    if p.is_zero() or q.is_zero():
        return Poly(carrier)
    out = [zero(carrier)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] = add(out[i + j], mul(a, b))
    return make_poly(carrier, out)


def poly_eval(p: Poly, x: NCElement) -> NCElement:
    """Horner evaluation."""
    if x.carrier != p.carrier:
        raise MixedCarrierError(f"Cannot evaluate a polynomial over {p.carrier} at an element of {x.carrier}")
    acc = zero(p.carrier)
    for c in reversed(p.coeffs):
        acc = add(mul(acc, x), c)
    return acc


def poly_divmod(p: Poly, d: Poly) -> tuple[Poly, Poly]:
    """(q, r) with p = d*q + r and deg r < deg d; `d` must have a unit leading coefficient."""
    carrier = _check_same(p, d)
    if d.is_zero():
        raise PolyZeroDivisionError("Polynomial division by zero")
    lead_inverse = try_inverse(d.leading)
    if lead_inverse is None:
        raise NotDivisibleError(f"Leading coefficient {render(d.leading)} of the divisor is not a unit")
    shift = len(d.coeffs) - 1
    remainder = list(p.coeffs)
    quotient = [zero(carrier)] * max(len(remainder) - shift, 0)
    for top in range(len(remainder) - 1, shift - 1, -1):
        factor = mul(remainder[top], lead_inverse)
        if factor.is_zero():
            continue
        quotient[top - shift] = factor
        for j, c in enumerate(d.coeffs):
            remainder[top - shift + j] = add(remainder[top - shift + j], neg(mul(factor, c)))
    return make_poly(carrier, quotient), make_poly(carrier, remainder[:shift])


def monic(p: Poly) -> Poly:
    if p.is_zero():
        return p
    inverse = try_inverse(p.leading)
    if inverse is None:
        raise NotDivisibleError(f"Leading coefficient {render(p.leading)} is not a unit")
    return poly_scale(inverse, p)


def _exact_candidates(carrier: CarrierDesc, bound: int, gaussian: bool) -> list[NCElement]:
    values = range(-bound, bound + 1)
    if gaussian:
        return [make_element(carrier, a, b) for a in values for b in values]
    return [make_element(carrier, a) for a in values]


def poly_roots(p: Poly, bound: int = DEFAULT_ROOT_BOUND, gaussian: bool = False) -> list[NCElement]:
    """
    Roots in enumeration order. Finite carriers are searched exhaustively. The exact carrier is searched over
    integers in [-bound, bound], or Gaussian integers a + bi with both parts in that range when `gaussian` is set.
    """
    if p.is_zero():
        raise NCAlgebraError("Every element is a root of the zero polynomial")
    if p.carrier.is_modular:
        candidates = enumerate_elements(p.carrier)
    else:
        candidates = _exact_candidates(p.carrier, bound, gaussian)
    return [x for x in candidates if poly_eval(p, x).is_zero()]


class IrreducibilityVerdict(NamedTuple):
    irreducible: bool
    factors: tuple[Poly, Poly] | None


def _monic_quadratics(carrier: CarrierDesc) -> list[Poly]:
    elements = enumerate_elements(carrier)
    return [make_poly(carrier, [c, b, one(carrier)]) for b in elements for c in elements]


def poly_is_irreducible(p: Poly, max_degree: int = MAX_IRREDUCIBLE_DEGREE) -> IrreducibilityVerdict:
    """
    Irreducibility over a field carrier for degrees 1..4: no roots, and for degree 4 no monic quadratic factor.
    A reducible verdict carries a factorization witness.
    """
    require_field_carrier(p.carrier)
    degree = p.degree
    if not 1 <= degree <= max_degree:
        raise DegreeRangeError(f"Irreducibility is decided for degrees 1..{max_degree}, got {degree}")
    if degree == 1:
        return IrreducibilityVerdict(True, None)
    for root in poly_roots(p):
        factor = linear_factor(root)
        quotient, _ = poly_divmod(p, factor)
        return IrreducibilityVerdict(False, (factor, quotient))
    if degree == 4:
        for quadratic in _monic_quadratics(p.carrier):
            quotient, remainder = poly_divmod(p, quadratic)
            if remainder.is_zero():
                return IrreducibilityVerdict(False, (quadratic, quotient))
    return IrreducibilityVerdict(True, None)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over a field carrier by the Euclidean algorithm."""
    _check_same(p, q)
    require_field_carrier(p.carrier)
    if p.is_zero() and q.is_zero():
        raise NCAlgebraError("gcd(0, 0) is undefined")
    a, b = p, q
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return monic(a)


_TERM_VAR_RE = re.compile(r"x(?:\^(?P<exp>\d+))?")


def _render_coeff(c: NCElement) -> str:
    text = render(c)
    return f"({text})" if ("+" in text or "-" in text) else text


def render_poly(p: Poly) -> str:
    """`c0 + c1*x + c2*x^2 + ...`; zero terms omitted, composite coefficients parenthesized, "0" for zero."""
    terms = []
    for i, c in enumerate(p.coeffs):
        if c.is_zero():
            continue
        var = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not var:
            terms.append(_render_coeff(c))
        elif c == one(p.carrier):
            terms.append(var)
        else:
            terms.append(f"{_render_coeff(c)}*{var}")
    return " + ".join(terms) or "0"


def _split_top_level(text: str) -> list[tuple[int, str]]:
    parts: list[tuple[int, str]] = []
    depth = 0
    start = 0
    for pos, char in enumerate(text):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise ElementParseError("Unbalanced ')'", text, pos)
        elif char == "+" and depth == 0:
            parts.append((start, text[start:pos]))
            start = pos + 1
    if depth:
        raise ElementParseError("Unbalanced '('", text, len(text))
    parts.append((start, text[start:]))
    return parts


def parse_poly(text: str, carrier: CarrierDesc) -> Poly:
    coeffs: dict[int, NCElement] = {}
    for offset, raw in _split_top_level(text):
        term = raw.strip()
        pos = offset + len(raw) - len(raw.lstrip())
        if not term:
            raise ElementParseError("Expected a term", text, pos)
        if term.startswith("x"):
            coef_text, var = "1", term
        else:
            coef_text, _, var = term.partition("*")
            coef_text, var = coef_text.strip(), var.strip()
        if coef_text.startswith("(") and coef_text.endswith(")"):
            coef_text = coef_text[1:-1]
        degree = 0
        if var:
            match = _TERM_VAR_RE.fullmatch(var)
            if match is None:
                raise ElementParseError(f"Bad power of x {var!r}", text, pos)
            degree = int(match.group("exp") or 1)
        try:
            value = parse(coef_text, carrier)
        except ElementParseError as e:
            raise ElementParseError(e.message, text, pos) from e
        coeffs[degree] = add(coeffs.get(degree, zero(carrier)), value)
    size = max(coeffs) + 1
    return make_poly(carrier, [coeffs.get(i, zero(carrier)) for i in range(size)])


def poly_to_json(p: Poly) -> dict[str, Any]:
    return {"carrier": carrier_to_json(p.carrier), "coeffs": [render(c) for c in p.coeffs]}


def poly_from_json(data: dict[str, Any]) -> Poly:
    carrier = carrier_from_json(data["carrier"])
    return make_poly(carrier, [parse(s, carrier) for s in data["coeffs"]])
