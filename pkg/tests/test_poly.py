from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricfunctor.coxgrading import grading_of
from toricfunctor.errors import InputError
from toricfunctor.poly import (
    ANY_CLASS,
    GF,
    NOT_HOMOGENEOUS,
    QQ,
    ParseError,
    Polynomial,
    field_from_descriptor,
    format_polynomial,
    homogeneous_class,
    is_prime,
    parse_polynomial,
)

from conftest import fan

T = ("t0", "t1")


def test_parse_examples():
    P = parse_polynomial("t0^2 + t0*t1", T)
    assert P.terms == {(2, 0): 1, (1, 1): 1}
    P = parse_polynomial("3/2*t0 - t0", T)
    assert P.terms == {(1, 0): Fraction(1, 2)}
    assert parse_polynomial("t0 + t0", T, GF(2)).is_zero()


@pytest.mark.parametrize("text, pos", [
    ("t0 +", 4),
    ("t2", 0),
    ("t0^t1", 3),
    ("2 t0", 2),
    ("(t0", 3),
    ("t0 $ 1", 3),
    ("1/0", 0),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text, T)
    assert info.value.position == pos


def test_parse_grammar_details():
    assert parse_polynomial("-(t0 - t1)^2", T) == parse_polynomial("-t0^2 + 2*t0*t1 - t1^2", T)
    assert parse_polynomial("t0^0", T) == Polynomial.constant(1, T, QQ)
    assert parse_polynomial("4*t0", T, GF(3)).terms == {(1, 0): 1}


def test_fields():
    assert is_prime(7) and not is_prime(1) and not is_prime(9)
    with pytest.raises(InputError):
        GF(4)
    assert field_from_descriptor("Q") is QQ
    assert field_from_descriptor("5") == GF(5)
    F = GF(7)
    assert F.mul(3, F.inv(3)) == 1
    assert F.power(3, -1) == F.inv(3)
    g = F.primitive_root()
    assert len({pow(g, k, 7) for k in range(6)}) == 6
    with pytest.raises(ZeroDivisionError):
        QQ.inv(Fraction(0))


def test_evaluate_examples():
    assert parse_polynomial("t0^2 + t1^2", T).evaluate((1, 2)) == 5
    P = parse_polynomial("7 + t0*t1 - t1^3", T)
    assert P.evaluate((0, 0)) == 7
    assert parse_polynomial("t0*t1", T, GF(5)).evaluate((2, 3)) == 1


def test_homogeneous_class_examples():
    assert homogeneous_class(parse_polynomial("t0^2 + t0*t1", T)) == 2
    assert homogeneous_class(parse_polynomial("t0^2 + t1", T)) is NOT_HOMOGENEOUS
    assert homogeneous_class(Polynomial.zero(T, QQ)) is ANY_CLASS
    F1 = fan("f1")
    g = grading_of(F1)
    x = F1.ray_names
    P = parse_polynomial("x1*x2", x)
    cls = homogeneous_class(P, g.classes, g.pic.reduce)
    assert cls == tuple(a + b for a, b in zip(g.class_of("x1"), g.class_of("x2")))
    # x1 and x3 share a class, x2 does not
    assert homogeneous_class(parse_polynomial("x1 + x3", x), g.classes) == g.class_of("x1")
    assert homogeneous_class(parse_polynomial("x1 + x2", x), g.classes) is NOT_HOMOGENEOUS


def test_format():
    P = parse_polynomial("1 - t1 + 3/2*t0^2", T)
    assert format_polynomial(P) == "3/2*t0^2 - t1 + 1"
    assert format_polynomial(Polynomial.zero(T, QQ)) == "0"


# random polynomials in two variables over Q and F_5

coeffs_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw, field=QQ):
    coeff = coeffs_q if field is QQ else st.integers(0, field.p - 1)
    terms = draw(st.dictionaries(monos, coeff, max_size=5))
    P = Polynomial.zero(T, field)
    for e, c in terms.items():
        P = P + Polynomial.monomial(e, T, field, c)
    return P


@settings(max_examples=150, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms_q(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert a - a == Polynomial.zero(T, QQ)


@settings(max_examples=150, deadline=None)
@given(polys(GF(5)), polys(GF(5)), polys(GF(5)))
def test_ring_axioms_f5(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=150, deadline=None)
@given(polys(), polys(), polys(), st.tuples(coeffs_q, coeffs_q))
def test_evaluate_is_ring_homomorphism(a, b, c, pt):
    assert (a * b + c).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt) + c.evaluate(pt)


@settings(max_examples=150, deadline=None)
@given(polys())
def test_print_parse_roundtrip(P):
    text = format_polynomial(P)
    Q = parse_polynomial(text, T)
    assert Q == P
    assert format_polynomial(Q) == text


def test_hash_and_equality():
    a = parse_polynomial("t0 + 1", T)
    b = parse_polynomial("1 + t0", T)
    assert a == b and hash(a) == hash(b)
    assert a != parse_polynomial("t0 + 1", T, GF(3))
