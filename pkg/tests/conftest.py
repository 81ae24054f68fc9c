import random

import pytest

from plumbtwist.category import make_params
from plumbtwist.complexes import single_core
from plumbtwist.twists import LETTERS, apply_braid


def random_word(rng: random.Random, max_len: int, min_len: int = 1):
    return tuple(rng.choice(LETTERS) for _ in range(rng.randrange(min_len, max_len + 1)))


def braid_corpus(n: int, count: int, max_len: int, seed: int):
    """Seeded braid-orbit complexes (word, complex) over the default field."""
    params = make_params(n)
    q0 = single_core(params, 0)
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        word = random_word(rng, max_len)
        out.append((word, apply_braid(word, q0)))
    return params, q0, out


@pytest.fixture(scope="session")
def params3():
    return make_params(3)


@pytest.fixture(scope="session")
def params4():
    return make_params(4)
