import numpy as np
import pytest

from peernudge.datagen import make_author, make_message_pool
from peernudge.encoding import TextEncoder, load_alphabet, load_keywords


@pytest.fixture(scope="session")
def alphabet():
    return load_alphabet()


@pytest.fixture(scope="session")
def keywords():
    return load_keywords()


@pytest.fixture
def encoder(alphabet):
    return TextEncoder(alphabet, max_len=40, feature_dim=64)


@pytest.fixture
def pool():
    return make_message_pool(40, seed=7)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_author(rng):
    return make_author(rng)
