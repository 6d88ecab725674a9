import functools
import logging
from collections.abc import Callable, Hashable, Sequence
from fractions import Fraction
from typing import Any, ParamSpec

from faker import Faker

from .carriers import CarrierDesc, FuzzyNC, NCElement, make_element
from .matrices import Matrix, matrix_from_entries
from .polynomials import Poly, make_poly

logger = logging.getLogger(__name__)

fake = Faker()


P = ParamSpec("P")


def seed(value: int) -> None:
    """Seed the shared Faker instance; every strategy below draws from it."""
    fake.seed_instance(value)


class Strategy[T: Any, **P]:
    def __init__(self, func: Callable[P, T], *args: P.args, **kwargs: P.kwargs) -> None:
        self.func = func
        self.args = args
        self.kwargs = kwargs

    def gen(self) -> T:
        return self.func(*self.args, **self.kwargs)

    def sample(self, count: int) -> list[T]:
        return [self.gen() for _ in range(count)]

    def __str__(self) -> str:
        return f"Strategy({self.func.__name__}, {self.args}, {self.kwargs})"

    def __repr__(self) -> str:
        return f"Strategy({self.func.__name__}\n\t{self.args}\n\t{self.kwargs})"


def strategy_wrapper[T: Any, **P](func: Callable[P, T]) -> Callable[P, Strategy[T, P]]:
    @functools.wraps(func)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> Strategy[T, P]:
        return Strategy(func, *args, **kwargs)

    return wrapper


def _coordinate(carrier: CarrierDesc, bound: int, denominators: int) -> int | Fraction:
    if carrier.modulus is not None:
        return fake.random_int(0, carrier.modulus - 1)
    numerator = fake.random_int(-bound, bound)
    if denominators <= 1:
        return numerator
    return Fraction(numerator, fake.random_int(1, denominators))


@strategy_wrapper
def element_strategy(carrier: CarrierDesc, bound: int = 20, denominators: int = 1) -> NCElement:
    """
    Uniform element of a modular carrier. For the exact family, coordinates are drawn from [-bound, bound],
    divided by a random denominator up to `denominators`.
    """
    values = [0, 0, 0, 0]
    for idx in carrier.coords:
        values[idx] = _coordinate(carrier, bound, denominators)
    return make_element(carrier, *values)


@strategy_wrapper
def fuzzy_strategy(resolution: int = 1000) -> FuzzyNC:
    return FuzzyNC(*(Fraction(fake.random_int(0, resolution), resolution) for _ in range(4)))


@strategy_wrapper
def matrix_strategy(carrier: CarrierDesc, rows: int, cols: int, bound: int = 20) -> Matrix:
    entries = [element_strategy(carrier, bound=bound).gen() for _ in range(rows * cols)]
    return matrix_from_entries(carrier, rows, cols, entries)


@strategy_wrapper
def poly_strategy(carrier: CarrierDesc, max_degree: int = 4, bound: int = 20, monic: bool = False) -> Poly:
    degree = fake.random_int(0, max_degree)
    coefficient = element_strategy(carrier, bound=bound)
    leading = fixed_strategy(make_element(carrier, 1)) if monic else coefficient
    return make_poly(carrier, [*coefficient.sample(degree), leading.gen()])


@strategy_wrapper
def one_of[T: Any](values: Sequence[T]) -> T:
    return fake.random_element(values)


class UnsatisfiableStrategyError(Exception):
    """
    Raised when a filtered strategy exhausts its iteration budget without producing an accepted value.
    """


@strategy_wrapper
def such_that[T: Any, **P](strategy: Strategy[T, P], predicate: Callable[[T], bool], max_iter: int = 10000) -> T:
    """Rejection sampling: draw from `strategy` until `predicate` accepts."""
    for _ in range(max_iter):
        item = strategy.gen()
        if predicate(item):
            return item
    raise UnsatisfiableStrategyError(f"No value accepted after {max_iter} draws from {strategy}")


@strategy_wrapper
def list_strategy[T: Any, **P](
    strategy: Strategy[T, P],
    min_length: int = 5,
    max_length: int = 10,
    unique_bys: Sequence[Callable[[T], Hashable]] = (),
    max_iter: int = 10000,
) -> list[T]:
    """
    A list whose length is drawn from [min_length, max_length].

    With `unique_bys`, a draw is rejected when any key function maps it to a key an earlier item already produced.
    After `max_iter` draws the list is returned as it stands, possibly short.
    """
    length = fake.random_int(min_length, max_length)
    seen: list[set[Hashable]] = [set() for _ in unique_bys]
    items: list[T] = []
    for _ in range(max_iter):
        if len(items) == length:
            break
        item = strategy.gen()
        keys = [key(item) for key in unique_bys]
        if any(k in s for k, s in zip(keys, seen, strict=True)):
            continue
        for k, s in zip(keys, seen, strict=True):
            s.add(k)
        items.append(item)
    if len(items) < min_length:
        logger.warning(f"Drew {len(items)} distinct items in {max_iter} tries, fewer than min_length {min_length}")
    return items


@strategy_wrapper
def fixed_strategy[T: Any](value: T) -> T:
    """Returns a strategy that always returns the given value."""
    return value
