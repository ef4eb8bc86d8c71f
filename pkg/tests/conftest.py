import random

import pytest

from binary_fields import BinaryField


@pytest.fixture(scope="session")
def gf16():
    return BinaryField(4)


@pytest.fixture(scope="session")
def gf256():
    return BinaryField(8)


@pytest.fixture
def rng():
    return random.Random(7)
