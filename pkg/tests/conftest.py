import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nilsum.core import QQ, WEYL, Matrix, PrimeField, WeylElem

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F7, F13 = PrimeField(7), PrimeField(13)

fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


def fp(p):
    return st.integers(0, p - 1).map(PrimeField(p).from_int)


@st.composite
def weyl_elems(draw, max_degree=3, max_terms=4):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, max_degree), st.integers(0, max_degree)),
        fractions, max_size=max_terms))
    return WeylElem(terms)


@st.composite
def matrices(draw, ring, n=None, elems=None):
    n = n if n is not None else draw(st.integers(1, 4))
    elems = elems or (fractions if ring == QQ else weyl_elems(2, 2) if ring == WEYL else fp(ring.p))
    return Matrix(ring, [[draw(elems) for _ in range(n)] for _ in range(n)])


@pytest.fixture
def rng():
    return random.Random(1234)


def trace_zero(ring, n, rng):
    a = Matrix.random(ring, n, rng)
    return a.replace({(n - 1, n - 1): a[n - 1, n - 1] - a.trace()})
