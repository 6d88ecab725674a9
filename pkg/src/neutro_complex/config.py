from typing import TypedDict

# Exhaustive scans: element count and pairwise product count.
MAX_SCAN_ORDER = 10**6
MAX_SCAN_PRODUCTS = 10**8

# Cayley tables are only emitted for small carriers.
MAX_TABLE_ORDER = 256

# Laplace expansion is factorial in the size.
MAX_DET_SIZE = 6
MAX_CHAR_POLY_SIZE = 5

# Matrix ideal checks enumerate the whole k x k matrix ring.
MAX_IDEAL_MATRIX_SIZE = 2
MAX_IDEAL_CARRIER_ORDER = 16
# Worst case over both sides, so no accepted carrier and size is refused on the product count.
MAX_IDEAL_PRODUCTS = 2 * (MAX_IDEAL_CARRIER_ORDER ** (MAX_IDEAL_MATRIX_SIZE**2)) ** 2

# Eigen search over a ring with zero divisors walks every vector of the search space.
MAX_EIGEN_VECTORS = 10**4

MAX_IRREDUCIBLE_DEGREE = 4

DEFAULT_ROOT_BOUND = 100


class Budgets(TypedDict):
    max_order: int
    max_products: int
