from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import to_sympy, u
from eqseidel.errors import ConfigMismatch, IllegalExponent, NotDivisible, NotHomogeneous, ZeroElement
from eqseidel.ring import (
    CoeffDomain,
    RingConfig,
    RingElem,
    novikov,
    ring_add,
    ring_degree,
    ring_exact_div,
    ring_make,
    ring_mul,
    ring_neg,
    ring_truncate_u,
    ring_u_valuation,
)

Z = RingConfig()
ZQ4 = novikov(4)
LOC = RingConfig(True, 4, CoeffDomain.RATIONAL, True)


def test_config_invariants():
    with pytest.raises(ValueError):
        RingConfig(True, 3)
    with pytest.raises(ValueError):
        RingConfig(True, 0)
    with pytest.raises(ValueError):
        RingConfig(False, 0, CoeffDomain.INTEGER, True)
    assert ZQ4.localized().u_localized and ZQ4.localized().rational


def test_make_single_monomial():
    assert ring_make(ZQ4, [(1, 1, 0)]) == RingElem.q(ZQ4)
    assert str(ring_make(ZQ4, [(1, 1, 0)])) == "q"


def test_make_cancels():
    assert ring_make(Z, [(3, 0, 2), (-3, 0, 2)]).is_zero()


def test_make_localized_monomial():
    x = ring_make(LOC, [(Fraction(1, 2), 0, -1)])
    assert str(x) == "1/2*u^-1"


def test_make_rejects_illegal_exponents():
    with pytest.raises(IllegalExponent):
        ring_make(ZQ4, [(1, 0, -1)])
    with pytest.raises(IllegalExponent):
        ring_make(Z, [(1, 1, 0)])


def test_difference_of_squares():
    x = RingElem.q(ZQ4) + RingElem.u(ZQ4)
    y = RingElem.q(ZQ4) - RingElem.u(ZQ4)
    assert ring_mul(x, y) == RingElem.q(ZQ4, 2) - RingElem.u(ZQ4, 2)


def test_substituted_scalar_product():
    r = 1
    x = RingElem.monomial(Z, r + 1, 0, 1)
    assert to_sympy(x * x) == 4 * u**2


def test_laurent_identity():
    assert RingElem.q(ZQ4) * RingElem.q(ZQ4, -1) == RingElem.one(ZQ4)


def test_config_mismatch():
    with pytest.raises(ConfigMismatch):
        ring_add(RingElem.one(ZQ4), RingElem.one(novikov(6)))


def test_degrees():
    assert ring_degree(RingElem.q(ZQ4)) == 4
    assert ring_degree(RingElem.monomial(novikov(4), 1, 1, 1)) == 6
    with pytest.raises(NotHomogeneous):
        ring_degree(RingElem.q(ZQ4) + RingElem.u(ZQ4))
    with pytest.raises(ZeroElement):
        ring_degree(RingElem.zero(ZQ4))


def test_exact_div_examples():
    x = ring_make(ZQ4, [(2, 1, 1), (4, 0, 2)])
    y = RingElem.monomial(ZQ4, 2, 0, 1)
    z = ring_exact_div(x, y)
    assert z == RingElem.q(ZQ4) + RingElem.monomial(ZQ4, 2, 0, 1)
    assert z * y == x
    assert ring_exact_div(x, RingElem.one(ZQ4)) == x
    with pytest.raises(NotDivisible):
        ring_exact_div(RingElem.q(ZQ4), RingElem.u(ZQ4))


def test_exact_div_against_sympy():
    x = ring_make(ZQ4, [(1, 2, 0), (3, 1, 1), (2, 0, 2)])  # (q + u)(q + 2u)
    y = ring_make(ZQ4, [(1, 1, 0), (1, 0, 1)])
    z = ring_exact_div(x, y)
    assert sympy.expand(to_sympy(z) - sympy.cancel(to_sympy(x) / to_sympy(y))) == 0


def test_truncate_u():
    x = ring_make(ZQ4, [(1, 2, 0), (6, 1, 1), (6, 0, 2)])
    kept = ring_truncate_u(x, 2)
    oracle = sum(t for t in sympy.Add.make_args(to_sympy(x)) if sympy.degree(t, u) < 2)
    assert to_sympy(kept) == oracle
    assert ring_truncate_u(x, 0).is_zero()
    assert ring_truncate_u(RingElem.q(ZQ4, 3), 1) == RingElem.q(ZQ4, 3)


def test_u_valuation():
    assert ring_u_valuation(RingElem.monomial(Z, 3, 0, 1)) == 1
    assert ring_u_valuation(RingElem.q(ZQ4)) == 0
    assert ring_u_valuation(RingElem.u(Z, 3) + RingElem.u(Z, 5)) == 3
    with pytest.raises(ZeroElement):
        ring_u_valuation(RingElem.zero(Z))


def test_rendering_order():
    x = ring_make(ZQ4, [(-1, 0, 3), (3, 2, 1)])
    assert str(x) == "3*q^2*u - u^3"


def test_negation():
    x = ring_make(ZQ4, [(2, 1, 0)])
    assert ring_neg(x) + x == RingElem.zero(ZQ4)


# properties ---------------------------------------------------------------

def elements(config, degree):
    """Homogeneous elements of one degree in ``config``."""
    qd = config.q_degree

    def build(pairs):
        triples = []
        for c, a in pairs:
            rest = degree - a * qd
            if rest % 2 == 0 and (rest >= 0 or config.u_localized):
                triples.append((c, a, rest // 2))
        return RingElem.make(config, triples)

    a_range = st.integers(-2, 2) if config.has_q else st.just(0)
    return st.lists(st.tuples(st.integers(-6, 6), a_range), max_size=4).map(build)


@given(elements(ZQ4, 4), elements(ZQ4, 8), elements(ZQ4, 0))
def test_ring_axioms(x, y, z):
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert to_sympy(x * y) == sympy.expand(to_sympy(x) * to_sympy(y))


@given(elements(ZQ4, 4), elements(ZQ4, 6))
def test_degree_is_additive(x, y):
    if x and y:
        assert ring_degree(x * y) == ring_degree(x) + ring_degree(y)


@given(elements(LOC, 2), elements(LOC, -4))
def test_div_round_trip_localized(x, y):
    if y:
        assert ring_exact_div(x * y, y) == x


@given(elements(ZQ4, 6), elements(ZQ4, 2))
def test_div_round_trip(x, y):
    if y:
        assert ring_exact_div(x * y, y) == x


@given(elements(ZQ4, 8), st.integers(0, 5))
def test_truncation_splits(x, k):
    low = ring_truncate_u(x, k)
    high = x - low
    assert low + high == x
    if high:
        assert ring_u_valuation(high) >= k
