import random

import pytest

from fincox.affine_weyl import AffineWeylGroup
from fincox.root_system import build_root_system, twist_permutation


def make_group(type_letter, rank, twist="id"):
    rs = build_root_system(type_letter, rank)
    return AffineWeylGroup(rs, twist_permutation(rs, twist))


def random_word(g, rng, max_len):
    return [rng.choice(g.nodes) for _ in range(rng.randint(0, max_len))]


def random_element(g, rng, max_len=8, extended=True):
    """A random element of the extended group: word times an element of Omega'."""
    x = g.from_word(random_word(g, rng, max_len))
    if extended:
        om = rng.choice(g.omega_group(with_delta=True))
        x = g.multiply(x, om.element)
    return x


@pytest.fixture
def rng():
    return random.Random(20240521)
