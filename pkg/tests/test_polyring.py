import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from fitcalc import INHOMOGENEOUS, PolyRing, Polynomial, RingMap, apply_map, derivative, poly_arith
from fitcalc.errors import ParseError, RingMismatchError, UnknownVariableError
from fitcalc.polyring import weighted_degree

R = PolyRing(("x", "y"), (4, 1))


def test_parse_compact_and_caret_agree():
    a = R.parse("y5-xy")
    b = R.parse("y^5 - x*y")
    assert a == b
    assert R.parse("(x+y)**2") == R.parse("x2+2xy+y2")
    assert R.parse("y/2 + 3/4") == Polynomial(R, {(0, 1): mpq(1, 2), (0, 0): mpq(3, 4)})


def test_longest_variable_match():
    S = PolyRing(("x", "x1", "y"))
    p = S.parse("x1y")  # the variable x1, not x^1
    assert p.as_dict() == {(0, 1, 1): 1}


def test_parse_error_has_position():
    with pytest.raises(ParseError) as err:
        R.parse("y5 - q")
    assert err.value.position == 5
    assert "^" in str(err.value)
    with pytest.raises(ParseError):
        R.parse("x +")
    with pytest.raises(ParseError):
        R.parse("(x")


def test_leading_term_wp():
    p = R.parse("y5 - xy")  # both degree 5; wp tie broken revlex: x*y > y^5
    assert p.lm == (1, 1)
    assert p.lc == -1


def test_weighted_degree():
    assert weighted_degree(R.parse("y6+xy2")) == 6
    assert weighted_degree(R.parse("x+y")) == INHOMOGENEOUS
    assert R.parse("x").weighted_degree() == 4


def test_zero_is_homogeneous_and_falsy():
    assert not R.zero
    assert R.zero.is_homogeneous()
    assert R.zero.to_str() == "0"


def test_ring_mismatch():
    S = PolyRing(("x", "y"))
    with pytest.raises(RingMismatchError):
        R.parse("x") + S.parse("x")


def test_unknown_variable():
    with pytest.raises(UnknownVariableError):
        R.var("z")


def test_bad_ring_definitions():
    with pytest.raises(ValueError):
        PolyRing(("x", "x"))
    with pytest.raises(ValueError):
        PolyRing(("x", "y"), (1, 0))
    with pytest.raises(ValueError):
        PolyRing(("x", "y"), order=(("wp", 1),))


def test_derivative():
    p = R.parse("y6+xy2")
    assert derivative(p, "y") == R.parse("6y5+2xy")
    assert p.derivative("x") == R.parse("y2")


def test_apply_map_pullback():
    T = PolyRing(("X", "Y", "Z"), (4, 5, 6))
    m = RingMap(T, R, (R.parse("x"), R.parse("y5-xy"), R.parse("y6+xy2")))
    h = T.parse("16X5Y2+Y6-16X6Z+11XY4Z+28X2Y2Z2+8X3Z3-Z5")
    assert not apply_map(m, h)


def test_to_str_roundtrip():
    p = R.parse("-3/2x2y + 7y4 - 1")
    assert R.parse(p.to_str()) == p
    assert R.parse(p.to_str("compact")) == p


def test_primitive():
    p = R.parse("-2/3x + 4/9y4")
    q = p.primitive()
    assert q.lc > 0
    assert all(c.denominator == 1 for _, c in q.terms)
    assert q == R.parse("3x - 2y4")


def test_poly_arith_ops():
    a, b = R.parse("x+y"), R.parse("x-y")
    assert poly_arith("mul", a, b) == R.parse("x2-y2")
    assert poly_arith("add", a, b) == R.parse("2x")
    assert poly_arith("sub", a, b) == R.parse("2y")
    with pytest.raises(ValueError):
        poly_arith("div", a, b)


S3 = PolyRing(("x", "y", "z"))
sx, sy, sz = sympy.symbols("x y z")

terms = st.dictionaries(
    st.tuples(*(st.integers(0, 3),) * 3),
    st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0),
    max_size=4,
)


def to_sympy(d):
    return sum((sympy.Rational(c.numerator, c.denominator) * sx**a * sy**b * sz**e
                for (a, b, e), c in d.items()), sympy.Integer(0))


def from_poly(p):
    return sympy.expand(to_sympy({m: c for m, c in ((m, _frac(c)) for m, c in p.as_dict().items())}))


def _frac(c):
    from fractions import Fraction
    return Fraction(int(c.numerator), int(c.denominator))


@settings(max_examples=200, deadline=None)
@given(terms, terms)
def test_arithmetic_matches_sympy(da, db):
    a, b = Polynomial(S3, da), Polynomial(S3, db)
    A, B = to_sympy(da), to_sympy(db)
    assert sympy.expand(from_poly(a * b) - A * B) == 0
    assert sympy.expand(from_poly(a + b) - A - B) == 0
    assert sympy.expand(from_poly(a - b) - A + B) == 0
    assert sympy.expand(from_poly(a.derivative("y")) - sympy.diff(A, sy)) == 0


@settings(max_examples=200, deadline=None)
@given(terms)
def test_terms_sorted_descending(d):
    p = Polynomial(S3, d)
    keys = [S3.key(m) for m, _ in p.terms]
    assert keys == sorted(keys, reverse=True)
