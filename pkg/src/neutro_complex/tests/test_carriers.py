import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from neutro_complex.carriers import (
    ElementParseError,
    Family,
    FuzzyNC,
    FuzzyRangeError,
    InvalidCarrierError,
    MixedCarrierError,
    NCElement,
    NotReducibleError,
    ShapeError,
    add,
    basis_element,
    carrier_from_json,
    carrier_to_json,
    conjugate,
    content_gcd,
    element_from_json,
    element_to_json,
    embed,
    fuzzy_join,
    fuzzy_meet,
    make_carrier,
    make_element,
    mul,
    neg,
    norm,
    one,
    parse,
    power,
    reduce_mod,
    render,
    structure_constants,
    sub,
    try_inverse,
    verify_multiplication_table,
    zero,
)
from neutro_complex.scan import cayley_table, element_index, enumerate_elements, find_units
from neutro_complex.strategies import element_strategy, fuzzy_strategy, one_of


def mc(n: int):
    return make_carrier(Family.MOD_COMPLEX, n)


def mnc(n: int):
    return make_carrier(Family.MOD_NEUTRO_COMPLEX, n)


@pytest.mark.parametrize(
    "family, modulus, order",
    [
        pytest.param(Family.MOD_COMPLEX, 3, 9, id="C(Z_3)"),
        pytest.param(Family.MOD_NEUTRO_COMPLEX, 5, 625, id="C(<Z_5 u I>)"),
        pytest.param(Family.MOD_NEUTRO_COMPLEX, 11, 11**4, id="C(<Z_11 u I>)"),
        pytest.param(Family.MOD_NEUTRO_COMPLEX, 2, 16, id="C(<Z_2 u I>)"),
        pytest.param(Family.MOD_PLAIN, 6, 6, id="Z_6"),
        pytest.param(Family.MOD_NEUTRO, 4, 16, id="<Z_4 u I>"),
        pytest.param(Family.EXACT, None, None, id="exact"),
    ],
)
def test_make_carrier_order(family, modulus, order):
    assert make_carrier(family, modulus).order == order


def test_make_carrier_unit_square():
    assert mc(3).unit_square == 2
    assert make_carrier(Family.EXACT).unit_square == -1


@pytest.mark.parametrize(
    "family, modulus",
    [
        pytest.param("exact", 5, id="exact-with-modulus"),
        pytest.param("mod-complex", None, id="missing-modulus"),
        pytest.param("mod-complex", 1, id="modulus-one"),
        pytest.param("octonion", 3, id="unknown-family"),
    ],
)
def test_make_carrier_invalid(family, modulus):
    with pytest.raises(InvalidCarrierError):
        make_carrier(family, modulus)


def test_carrier_str():
    assert str(mc(7)) == "C(Z_7)"
    assert str(mnc(3)) == "C(<Z_3 u I>)"
    assert str(make_carrier(Family.MOD_PLAIN, 5)) == "Z_5"


def test_element_rejects_non_canonical_coordinates():
    with pytest.raises(ShapeError, match="not a residue"):
        NCElement(mc(7), 7)
    with pytest.raises(ShapeError, match="must be 0"):
        NCElement(make_carrier(Family.MOD_PLAIN, 7), 0, 1)
    with pytest.raises(ShapeError):
        NCElement(mc(7), 0, 0, 1)


def test_make_element_reduces():
    assert make_element(mc(7), 10, -1) == NCElement(mc(7), 3, 6)
    with pytest.raises(NotReducibleError):
        make_element(mc(7), Fraction(1, 2))


def test_add_examples(exact):
    assert add(parse("7+3iF", mc(12)), parse("2", mc(12))) == parse("9+3iF", mc(12))
    assert add(parse("1+iF", mc(2)), parse("1+iF", mc(2))) == zero(mc(2))
    assert add(parse("5+3I", exact), parse("7+5I", exact)) == parse("12+8I", exact)


def test_mixed_carriers_rejected():
    with pytest.raises(MixedCarrierError):
        add(one(mc(3)), one(mc(5)))
    with pytest.raises(MixedCarrierError):
        mul(one(mc(3)), one(mnc(3)))


def test_neg_examples(exact):
    assert neg(parse("3+4iF+6I", mnc(11))) == parse("8+7iF+5I", mnc(11))
    assert neg(zero(mc(5))) == zero(mc(5))
    assert render(neg(parse("2-3i", exact))) == "-2+3i"


def test_mul_examples():
    assert mul(parse("1+iF", mc(2)), parse("1+iF", mc(2))) == zero(mc(2))
    assert mul(parse("3+4iF", mc(7)), parse("6+6iF", mc(7))) == one(mc(7))
    assert mul(parse("1+iF", mc(3)), parse("1+iF", mc(3))) == parse("2iF", mc(3))
    assert mul(parse("I", mnc(5)), parse("1+4I", mnc(5))) == zero(mnc(5))


def test_basis_relations():
    n = 7
    carrier = mnc(n)
    u, ind, u_ind = (basis_element(carrier, i) for i in (1, 2, 3))
    assert mul(u, u) == make_element(carrier, n - 1)
    assert mul(ind, ind) == ind
    assert mul(u_ind, u_ind) == make_element(carrier, neut=n - 1)
    assert mul(u, ind) == u_ind
    assert mul(ind, u_ind) == u_ind
    assert mul(u, u_ind) == make_element(carrier, neut=n - 1)


def test_verify_multiplication_table():
    verify_multiplication_table()


def test_structure_constants():
    table = structure_constants(mc(3))
    assert table.shape == (2, 2, 2)
    assert table[1, 1].tolist() == [2, 0]
    assert table[0, 1].tolist() == [0, 1]


def test_power_examples():
    for n in (2, 3, 10, 26):
        assert power(parse("1+iF", mc(n)), 2) == make_element(mc(n), 0, 2)
    assert power(parse("13+13iF", mc(26)), 2) == zero(mc(26))
    assert power(parse("2+iF", mc(5)), 0) == one(mc(5))
    assert parse("2+iF", mc(5)) ** 3 == mul(mul(parse("2+iF", mc(5)), parse("2+iF", mc(5))), parse("2+iF", mc(5)))


def test_conjugate_examples():
    x = parse("3+4iF", mc(7))
    assert conjugate(x) == parse("3+3iF", mc(7))
    assert norm(x) == parse("4", mc(7))
    assert conjugate(conjugate(x)) == x
    assert conjugate(parse("5", mc(11))) == parse("5", mc(11))


@pytest.mark.parametrize("n", range(2, 8))
def test_conjugate_is_an_automorphism(n):
    elements = enumerate_elements(mc(n))
    for x, y in itertools.product(elements, repeat=2):
        assert conjugate(add(x, y)) == add(conjugate(x), conjugate(y))
        assert conjugate(mul(x, y)) == mul(conjugate(x), conjugate(y))


def test_conjugate_is_an_automorphism_sampled():
    carrier = mnc(9)
    for x, y in zip(element_strategy(carrier).sample(300), element_strategy(carrier).sample(300), strict=True):
        assert conjugate(mul(x, y)) == mul(conjugate(x), conjugate(y))


def test_try_inverse_examples():
    assert try_inverse(parse("3+4iF", mc(7))) == parse("6+6iF", mc(7))
    assert try_inverse(parse("1+iF", mc(2))) is None
    assert try_inverse(one(mc(9))) == one(mc(9))


def test_try_inverse_exact(exact):
    assert try_inverse(parse("1+i", exact)) == make_element(exact, Fraction(1, 2), Fraction(-1, 2))
    assert try_inverse(parse("2", exact)) == make_element(exact, Fraction(1, 2))
    assert try_inverse(parse("I", exact)) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_try_inverse_agrees_with_unit_scan(n):
    carrier = mnc(n)
    invertible = []
    for x in enumerate_elements(carrier):
        y = try_inverse(x)
        if y is not None:
            assert mul(x, y) == one(carrier)
            invertible.append(x)
    assert invertible == find_units(carrier)


def test_exact_indeterminate_zero_divisor(exact):
    assert mul(parse("I", exact), parse("1-I", exact)) == zero(exact)


def test_embed(c3, nc3):
    x = parse("1+2iF", c3)
    assert embed(x, nc3) == parse("1+2iF", nc3)
    with pytest.raises(ShapeError):
        embed(x, make_carrier(Family.MOD_PLAIN, 3))
    with pytest.raises(MixedCarrierError):
        embed(x, mc(5))


def test_reduce_mod_examples(exact):
    assert reduce_mod(parse("2+2i", exact), mc(2)) == zero(mc(2))
    assert reduce_mod(parse("5+3I", exact), make_carrier(Family.MOD_NEUTRO, 3)) == make_element(
        make_carrier(Family.MOD_NEUTRO, 3), 2
    )
    assert reduce_mod(parse("5+3I", exact), make_carrier(Family.MOD_PLAIN, 3)) == make_element(
        make_carrier(Family.MOD_PLAIN, 3), 2
    )
    with pytest.raises(NotReducibleError):
        reduce_mod(parse("1/2", exact), mc(3))
    with pytest.raises(ShapeError):
        reduce_mod(parse("1+I", exact), mc(3))


@pytest.mark.parametrize("n", [2, 3])
def test_reduce_mod_is_surjective_with_equal_cosets(exact, n):
    box = range(2 * n)
    images = Counter(
        reduce_mod(make_element(exact, *values), mnc(n)) for values in itertools.product(box, repeat=4)
    )
    assert len(images) == n**4
    assert set(images.values()) == {2**4}


def test_reduce_mod_is_a_ring_homomorphism(exact):
    xs = element_strategy(exact, bound=50).sample(1000)
    ys = element_strategy(exact, bound=50).sample(1000)
    moduli = one_of(list(range(2, 13))).sample(1000)
    for x, y, n in zip(xs, ys, moduli, strict=True):
        target = mnc(n)
        assert reduce_mod(mul(x, y), target) == mul(reduce_mod(x, target), reduce_mod(y, target))
        assert reduce_mod(add(x, y), target) == add(reduce_mod(x, target), reduce_mod(y, target))


def test_content_gcd(exact):
    assert content_gcd(parse("3+3i+6I+9iI", exact), parse("24+18i+12I", exact)) == 3
    assert content_gcd(parse("5+3I", exact), parse("7+5I", exact)) == 1
    assert content_gcd(zero(exact), zero(exact)) == 0


def test_fuzzy_meet_and_join():
    x = FuzzyNC(Fraction("0.7"), Fraction("0.61"), Fraction("0.23"), Fraction("0.08"))
    y = FuzzyNC(Fraction("0.9"), Fraction("0.23"), Fraction("0.193"), Fraction("0.7"))
    assert fuzzy_meet(x, y) == FuzzyNC(Fraction("0.7"), Fraction("0.23"), Fraction("0.193"), Fraction("0.08"))
    assert fuzzy_join(x, y) == FuzzyNC(Fraction("0.9"), Fraction("0.61"), Fraction("0.23"), Fraction("0.7"))
    assert fuzzy_meet(x, x) == x


def test_fuzzy_range():
    with pytest.raises(FuzzyRangeError):
        FuzzyNC(Fraction(3, 2))


def test_fuzzy_lattice_laws():
    for x, y in zip(fuzzy_strategy().sample(500), fuzzy_strategy().sample(500), strict=True):
        assert fuzzy_meet(x, fuzzy_join(x, y)) == x
        assert fuzzy_join(x, fuzzy_meet(x, y)) == x
        assert fuzzy_meet(x, y) == fuzzy_meet(y, x)


@pytest.mark.parametrize(
    "carrier, coords, text",
    [
        pytest.param(mc(3), (2, 2, 0, 0), "2+2iF", id="complex"),
        pytest.param(mc(3), (0, 1, 0, 0), "iF", id="unit-coefficient"),
        pytest.param(mnc(3), (1, 1, 2, 1), "1+iF+2I+iFI", id="neutro-complex"),
        pytest.param(mnc(3), (0, 0, 0, 0), "0", id="zero"),
        pytest.param(make_carrier(Family.EXACT), (Fraction(-1, 2), 0, 0, 3), "-1/2+3iI", id="exact"),
    ],
)
def test_render_and_parse(carrier, coords, text):
    x = NCElement(carrier, *coords)
    assert render(x) == text
    assert parse(text, carrier) == x


def test_parse_reduces_coefficients(c3):
    assert parse("5+4iF", c3) == parse("2+iF", c3)


@pytest.mark.parametrize(
    "text, position",
    [
        pytest.param("iF+2", 3, id="out-of-order"),
        pytest.param("2x", 1, id="unexpected-character"),
        pytest.param("I", 0, id="symbol-outside-family"),
        pytest.param("1+", 2, id="dangling-plus"),
        pytest.param("", 0, id="empty"),
    ],
)
def test_parse_errors(c3, text, position):
    with pytest.raises(ElementParseError) as info:
        parse(text, c3)
    assert info.value.position == position


@pytest.mark.parametrize(
    "text, position",
    [
        pytest.param("1/0", 2, id="constant"),
        pytest.param("3+2/0i", 4, id="second-term"),
    ],
)
def test_parse_rejects_zero_denominator(exact, text, position):
    with pytest.raises(ElementParseError) as info:
        parse(text, exact)
    assert info.value.position == position


def test_json_helpers(exact, nc3):
    assert carrier_from_json(carrier_to_json(nc3)) == nc3
    assert carrier_to_json(exact) == {"family": "exact"}
    assert element_to_json(parse("1/2-iI", exact)) == {"re": "1/2", "im": 0, "neut": 0, "imneut": -1}
    assert element_from_json({"re": 4, "neut": 2}, nc3) == parse("1+2I", nc3)


@pytest.mark.parametrize("n", range(2, 51))
def test_complex_identities(n):
    carrier = mc(n)
    assert power(make_element(carrier, 1, 1), 2) == make_element(carrier, 0, 2)
    for a in range(n):
        assert power(make_element(carrier, a, n - a), 2).re == 0
        assert power(make_element(carrier, a, a), 2).re == 0
        for b in range(n):
            x = make_element(carrier, a, b)
            assert norm(x) == make_element(carrier, a * a + b * b)
            if a * b % n == 0:
                assert power(x, 2).im == 0


@pytest.mark.parametrize("p", list(sympy.primerange(3, 30)))
def test_double_prime_nilpotent(p):
    assert power(make_element(mc(2 * p), p, p), 2) == zero(mc(2 * p))


@pytest.mark.parametrize("p", list(sympy.primerange(3, 48)))
def test_half_successor_square(p):
    h = (p + 1) // 2
    assert power(make_element(mc(p), h, h), 2) == make_element(mc(p), 0, h)


def test_half_successor_spot_value():
    assert power(parse("5+5iF", mc(11)), 2) == parse("6iF", mc(11))


@pytest.mark.parametrize("carrier", [mnc(2), mnc(3), *(mc(n) for n in range(2, 8))], ids=str)
def test_ring_axioms_exhaustive(carrier):
    plus = cayley_table(carrier, "add")
    times = cayley_table(carrier, "mul")
    x, y, z = np.indices((carrier.order,) * 3)
    assert np.array_equal(plus[plus[x, y], z], plus[x, plus[y, z]])
    assert np.array_equal(times[times[x, y], z], times[x, times[y, z]])
    assert np.array_equal(times[x, plus[y, z]], plus[times[x, y], times[x, z]])
    assert np.array_equal(times, times.T)
    assert np.array_equal(plus, plus.T)
    one_index = element_index(one(carrier))
    assert np.array_equal(times[one_index], np.arange(carrier.order))
    assert np.array_equal(plus[0], np.arange(carrier.order))


@settings(max_examples=300, derandomize=True)
@given(
    n=st.integers(2, 50),
    coords=st.lists(st.integers(0, 10**6), min_size=12, max_size=12),
)
def test_ring_axioms_sampled(n, coords):
    carrier = mnc(n)
    x, y, z = (make_element(carrier, *coords[i : i + 4]) for i in (0, 4, 8))
    assert mul(mul(x, y), z) == mul(x, mul(y, z))
    assert mul(x, add(y, z)) == add(mul(x, y), mul(x, z))
    assert mul(x, y) == mul(y, x)
    assert add(x, neg(x)) == zero(carrier)
    assert sub(x, y) == add(x, neg(y))
    assert mul(one(carrier), x) == x


def test_ring_axioms_seeded_triples():
    for n in (4, 12, 25, 50):
        carrier = mnc(n)
        samples = element_strategy(carrier).sample(3 * 2500)
        for x, y, z in zip(samples[0::3], samples[1::3], samples[2::3], strict=True):
            assert mul(mul(x, y), z) == mul(x, mul(y, z))
            assert mul(x, add(y, z)) == add(mul(x, y), mul(x, z))


@settings(max_examples=200, derandomize=True)
@given(
    coords=st.lists(
        st.fractions(min_value=-100, max_value=100, max_denominator=12),
        min_size=12,
        max_size=12,
    )
)
def test_exact_ring_axioms(coords):
    exact = make_carrier(Family.EXACT)
    x, y, z = (make_element(exact, *coords[i : i + 4]) for i in (0, 4, 8))
    assert mul(mul(x, y), z) == mul(x, mul(y, z))
    assert mul(x, add(y, z)) == add(mul(x, y), mul(x, z))
    inverse = try_inverse(x)
    if inverse is not None:
        assert mul(x, inverse) == one(exact)
