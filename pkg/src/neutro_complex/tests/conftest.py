import pytest

from neutro_complex import strategies
from neutro_complex.carriers import CarrierDesc, Family, make_carrier


@pytest.fixture(autouse=True)
def seeded() -> None:
    strategies.seed(0)


@pytest.fixture
def c3() -> CarrierDesc:
    return make_carrier(Family.MOD_COMPLEX, 3)


@pytest.fixture
def c7() -> CarrierDesc:
    return make_carrier(Family.MOD_COMPLEX, 7)


@pytest.fixture
def nc3() -> CarrierDesc:
    return make_carrier(Family.MOD_NEUTRO_COMPLEX, 3)


@pytest.fixture
def exact() -> CarrierDesc:
    return make_carrier(Family.EXACT)
