import random
import warnings

import pytest

from failfst import fixtures
from failfst.symbols import encode


@pytest.fixture
def f1():
    return fixtures.fixture_f1()


@pytest.fixture
def f1_example():
    return fixtures.fixture_f1_example()


@pytest.fixture
def v():
    return fixtures.fixture_v()


@pytest.fixture
def rng():
    return random.Random(20261017)


@pytest.fixture(autouse=True)
def _quiet_realizability():
    # random spelling models trip the realizability warning on purpose in a few tests
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield


def word(m, text):
    return encode(m.input_labels, text)
