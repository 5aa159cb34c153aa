import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hkatomic.config import NS_M, default_manifold
from hkatomic.extended_mukai import ExtendedVector


@pytest.fixture
def m():
    return default_manifold()


@pytest.fixture
def vec():
    """NS(M) vector from (lambda, f) coordinates."""
    return lambda lam, f: NS_M.vector((lam, f))


@pytest.fixture
def ev():
    """Extended vector from (alpha, lambda, f, beta) coordinates."""
    return lambda *c: ExtendedVector.from_coords(NS_M, c)


rationals = st.fractions(min_value=-30, max_value=30, max_denominator=12)
nonzero_rationals = rationals.filter(lambda x: x != 0)


def ns_vectors(space=NS_M):
    return st.lists(rationals, min_size=space.dim, max_size=space.dim).map(space.vector)


def ext_vectors(space=NS_M, rank=rationals):
    return st.builds(
        lambda a, mu, b: ExtendedVector(a, mu, b), rank, ns_vectors(space), rationals
    )


def random_fraction(rng: random.Random, bound: int = 20, den: int = 6) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))
