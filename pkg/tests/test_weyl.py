from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import weyl_elems
from nilsum.core import WEYL, WeylElem, weyl_ad_preimage, weyl_normalize
from nilsum.core.weyl import D, X


# Oracle 1: rewrite words in {x, D} with D x -> x D + 1 until normal.
def rewrite_normal_form(word: str) -> dict:
    todo = Counter({word: 1})
    done = Counter()
    while todo:
        w, c = todo.popitem()
        i = w.find("Dx")
        if i < 0:
            key = (w.count("x"), w.count("D"))
            done[key] += c
            continue
        todo[w[:i] + "xD" + w[i + 2:]] += c
        todo[w[:i] + w[i + 2:]] += c
    return {k: Fraction(v) for k, v in done.items() if v}


# Oracle 2: act on polynomials in x, stored as {power: coefficient}.
def act(elem: WeylElem, poly: dict) -> dict:
    out = Counter()
    for (a, b), c in elem.terms:
        for k, v in poly.items():
            if k < b:
                continue
            falling = 1
            for j in range(b):
                falling *= k - j
            out[k - b + a] += c * v * falling
    return {k: v for k, v in out.items() if v}


def test_defining_relation():
    assert D * X == X * D + 1
    assert D * X - X * D == WEYL.one()


@pytest.mark.parametrize("word,expected", [
    ("DDx", {(1, 2): 1, (0, 1): 2}),
    ("xD", {(1, 1): 1}),
    ("Dxx", {(2, 1): 1, (1, 0): 2}),
])
def test_normal_ordering_examples(word, expected):
    assert rewrite_normal_form(word) == {k: Fraction(v) for k, v in expected.items()}
    factors = [(1, 0) if ch == "x" else (0, 1) for ch in word]
    assert weyl_normalize(factors) == WeylElem(expected)


@given(st.text(alphabet="xD", max_size=9))
def test_product_matches_rewriting(word):
    elem = WEYL.one()
    for ch in word:
        elem = elem * (X if ch == "x" else D)
    assert elem == WeylElem(rewrite_normal_form(word))


@given(weyl_elems(), weyl_elems(), st.dictionaries(st.integers(0, 8), st.integers(-5, 5), max_size=4))
def test_product_is_composition_of_operators(u, v, poly):
    poly = {k: Fraction(c) for k, c in poly.items() if c}
    assert act(u * v, poly) == act(u, act(v, poly))


@given(weyl_elems(), weyl_elems(), weyl_elems())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * 1 == a == 1 * a
    assert a - a == WEYL.zero()


def test_preimage_examples():
    assert weyl_ad_preimage(WEYL.one()) == X
    assert weyl_ad_preimage(WEYL.zero()) == WEYL.zero()
    s = WeylElem.monomial(2, 1)
    assert weyl_ad_preimage(s) == WeylElem.monomial(3, 1, Fraction(1, 3))


@given(weyl_elems(max_degree=5, max_terms=6))
def test_preimage_inverts_ad_d(s):
    g = weyl_ad_preimage(s)
    assert D * g - g * D == s


def test_json_round_trip():
    e = WeylElem({(2, 1): Fraction(-3, 2), (0, 0): Fraction(5)})
    assert WEYL.decode(WEYL.encode(e)) == e
    with pytest.raises(ValueError):
        WEYL.decode([[1, 2]])


def test_centre_is_constants():
    assert WEYL.is_central(WEYL.from_int(3))
    assert not WEYL.is_central(X)


def rewrite_rightmost(word: str) -> dict:
    # same rewrite rule, applied at the last occurrence instead of the first
    todo = Counter({word: 1})
    done = Counter()
    while todo:
        w, c = todo.popitem()
        i = w.rfind("Dx")
        if i < 0:
            done[(w.count("x"), w.count("D"))] += c
            continue
        todo[w[:i] + "xD" + w[i + 2:]] += c
        todo[w[:i] + w[i + 2:]] += c
    return {k: Fraction(v) for k, v in done.items() if v}


@given(st.text(alphabet="xD", max_size=9))
def test_rewrite_order_is_irrelevant(word):
    assert rewrite_normal_form(word) == rewrite_rightmost(word)


@given(weyl_elems(), weyl_elems())
def test_coefficients_stay_exact(u, v):
    for _, c in (u * v).terms:
        assert isinstance(c, Fraction) and c != 0
