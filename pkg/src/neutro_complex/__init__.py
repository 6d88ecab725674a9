from .carriers import (
    CarrierDesc,
    ElementParseError,
    Family,
    FuzzyNC,
    NCAlgebraError,
    NCElement,
    add,
    conjugate,
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
    sub,
    try_inverse,
    zero,
)
from .linalg import (
    ClosureVerdict,
    SpaceSpec,
    char_poly,
    check_direct_sum,
    closure_check,
    dim_over_base,
    eigen_search,
    gauss_solve,
    invariant_subspace_check,
    linear_functional_real_sum,
    nullspace_basis,
    rank,
    standard_basis,
)
from .matrices import Matrix, check_matrix_ideal, mat_add, mat_det, mat_inverse, mat_mul, parse_grid
from .polynomials import (
    Poly,
    make_poly,
    parse_poly,
    poly_add,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_is_irreducible,
    poly_mul,
    poly_roots,
)
from .scan import (
    ScanReport,
    additive_order,
    check_ideal,
    enumerate_elements,
    find_idempotents,
    find_nilpotents,
    find_units,
    find_zero_divisors,
    is_field,
    is_smarandache_semigroup,
    multiplicative_order,
    scan,
)

__all__ = [
    "CarrierDesc",
    "ElementParseError",
    "Family",
    "FuzzyNC",
    "NCAlgebraError",
    "NCElement",
    "add",
    "conjugate",
    "embed",
    "fuzzy_join",
    "fuzzy_meet",
    "make_carrier",
    "make_element",
    "mul",
    "neg",
    "norm",
    "one",
    "parse",
    "power",
    "reduce_mod",
    "render",
    "sub",
    "try_inverse",
    "zero",
    "ScanReport",
    "additive_order",
    "check_ideal",
    "enumerate_elements",
    "find_idempotents",
    "find_nilpotents",
    "find_units",
    "find_zero_divisors",
    "is_field",
    "is_smarandache_semigroup",
    "multiplicative_order",
    "scan",
    "Matrix",
    "check_matrix_ideal",
    "mat_add",
    "mat_det",
    "mat_inverse",
    "mat_mul",
    "parse_grid",
    "Poly",
    "make_poly",
    "parse_poly",
    "poly_add",
    "poly_divmod",
    "poly_eval",
    "poly_gcd",
    "poly_is_irreducible",
    "poly_mul",
    "poly_roots",
    "ClosureVerdict",
    "SpaceSpec",
    "char_poly",
    "check_direct_sum",
    "closure_check",
    "dim_over_base",
    "eigen_search",
    "gauss_solve",
    "invariant_subspace_check",
    "linear_functional_real_sum",
    "nullspace_basis",
    "rank",
    "standard_basis",
]
