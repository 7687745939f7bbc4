import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fitcalc import (ComputationError, Ideal, PolyRing, RingMap, ideal_equal, ideal_intersect,
                     ideal_power, ideal_product, ideal_quotient, ideal_sum, is_nonzerodivisor_mod,
                     preimage, specialize)
from fitcalc.errors import RingMismatchError
from fitcalc.ideals import quotient_mod
from fitcalc.polyring import monomial_divides, monomial_lcm

R = PolyRing(("x", "y", "z"))


def I(*gens):
    return Ideal.parse(R, gens)


def test_zero_generators_dropped():
    assert I("x", "0").gens == (R.parse("x"),)
    assert Ideal.zero(R).is_zero()
    assert Ideal.unit(R).is_unit()


def test_sum_product_power():
    assert ideal_equal(ideal_sum(I("x"), I("y")), I("x", "y"))
    assert ideal_equal(ideal_product(I("x", "y"), I("z")), I("xz", "yz"))
    assert ideal_equal(ideal_power(I("x", "y"), 2), I("x2", "xy", "y2"))
    assert ideal_power(I("x"), 0).is_unit()


def test_intersection():
    assert ideal_equal(ideal_intersect(I("x"), I("y")), I("xy"))
    assert ideal_equal(ideal_intersect(I("x2", "y"), I("x", "y2")), I("x2", "xy", "y2"))
    assert ideal_intersect(I("x"), Ideal.zero(R)).is_zero()


def test_quotient():
    assert ideal_equal(ideal_quotient(I("xy"), I("x")), I("y"))
    assert ideal_quotient(I("x"), I("x")).is_unit()
    assert ideal_equal(ideal_quotient(I("x2", "xy"), I("x", "y")), I("x"))
    with pytest.raises(ComputationError):
        ideal_quotient(I("x"), Ideal.zero(R))


def test_quotient_mod_lift():
    h = R.parse("x2 - y3")
    q = quotient_mod(I("x"), I("y"), h)
    # (x, x2-y3) : y = (x, y2)
    assert ideal_equal(q, I("x", "y2"))


def test_preimage_is_kernel():
    S = PolyRing(("t",))
    T = PolyRing(("X", "Y"))
    m = RingMap(T, S, (S.parse("t2"), S.parse("t3")))
    k = preimage(m, Ideal.zero(S))
    assert ideal_equal(k, Ideal.parse(T, ["X3-Y2"]))
    assert ideal_equal(preimage(m, Ideal.parse(S, ["t"])), Ideal.parse(T, ["X", "Y"]))
    with pytest.raises(RingMismatchError):
        preimage(m, Ideal.zero(T))


def test_preimage_name_clash():
    # target and source share the name x
    S = PolyRing(("x", "y"))
    T = PolyRing(("x", "Y", "Z"))
    m = RingMap(T, S, (S.parse("x"), S.parse("y2"), S.parse("xy")))
    k = preimage(m, Ideal.zero(S))
    assert ideal_equal(k, Ideal.parse(T, ["x2Y-Z2"]))


def test_specialize():
    J = I("x + y", "yz + z2", "z")
    sp = specialize(J, ["z"])
    assert sp.ring.vars == ("x", "y")
    assert ideal_equal(sp, Ideal.parse(sp.ring, ["x+y"]))


def test_nonzerodivisor():
    h = R.parse("xy")
    assert not is_nonzerodivisor_mod(R.parse("x"), h)
    assert is_nonzerodivisor_mod(R.parse("x+y"), h)


def test_contains_and_in():
    J = I("x2", "y")
    assert R.parse("x3 + yz") in J
    assert "x2y" in J
    assert not J.contains("x")


# -- monomial-ideal oracle -------------------------------------------------------

mono = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2))
mono_ideal = st.lists(mono.filter(any), min_size=1, max_size=3)


def _minimal(ms):
    ms = set(ms)
    return {m for m in ms if not any(o != m and monomial_divides(o, m) for o in ms)}


def _mid(ms):
    return Ideal(R, [R.monomial(m) for m in ms])


@settings(max_examples=150, deadline=None)
@given(mono_ideal, mono_ideal)
def test_monomial_intersection_matches_lcm_rule(a, b):
    expect = _minimal(monomial_lcm(p, q) for p, q in itertools.product(a, b))
    got = ideal_intersect(_mid(a), _mid(b))
    assert set(got.gb().leading_monomials()) == expect


@settings(max_examples=150, deadline=None)
@given(mono_ideal, mono)
def test_monomial_quotient_matches_rule(a, g):
    # (m_i) : g = (m_i / gcd(m_i, g))
    expect = _minimal(tuple(x - min(x, y) for x, y in zip(m, g)) for m in a)
    got = ideal_quotient(_mid(a), _mid([g]))
    assert set(got.gb().leading_monomials()) == expect
