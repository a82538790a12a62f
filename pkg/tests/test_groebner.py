import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricfunctor.errors import DeadlineExceeded, InputError
from toricfunctor.groebner import (
    MonomialOrder,
    buchberger,
    certify,
    is_reduced,
    normal_form,
    radical_membership,
    recording,
    s_polynomials_reduce_to_zero,
    zero_locus_at_origin,
)
from toricfunctor.poly import GF, QQ, Polynomial, parse_polynomial

from oracles import common_projective_zero, monomials, origin_only_macaulay, power_in_ideal, witness_outside

XY = ("x", "y")
LEX = MonomialOrder("lex")


def P(text, variables=XY, field=QQ):
    return parse_polynomial(text, variables, field)


def test_single_generator():
    for order in (MonomialOrder(), LEX):
        gb = buchberger([P("x - y")], order)
        assert gb.generators == (P("x - y"),)


def test_hand_example_lex():
    gens = [P("x^2 - 1"), P("x*y - 1")]
    gb = buchberger(gens, LEX)
    assert set(gb.generators) == {P("x - y"), P("y^2 - 1")}
    for g in gens:
        assert normal_form(g, gb).is_zero()
    assert certify(gb)


def test_unit_ideal():
    gb = buchberger([P("1")])
    assert gb.generators == (P("1"),)
    assert gb.is_unit_ideal()
    assert buchberger([P("x"), P("x + 1")]).is_unit_ideal()


def test_normal_form_examples():
    gb = buchberger([P("x - y")], LEX)
    assert normal_form(P("x^2"), gb) == P("y^2")
    gb = buchberger([P("x^2 + y"), P("x*y")])
    assert normal_form(P("7/3"), gb) == P("7/3")
    for g in (P("x^2 + y"), P("x*y")):
        assert normal_form(g, gb).is_zero()


def test_radical_examples():
    assert radical_membership(P("x"), [P("x^2")])
    assert not radical_membership(P("x"), [P("y")])
    T = ("t0", "t1")
    assert radical_membership(P("t0", T), [P("t0^2", T), P("t0*t1", T), P("t1^2", T)])


def test_zero_locus_examples():
    T = ("t0", "t1")
    assert zero_locus_at_origin([P("t0^2", T), P("t1^2", T)])
    assert not zero_locus_at_origin([P("t0*t1", T)])
    assert zero_locus_at_origin([P("t0^2", T), P("t0*t1", T), P("t1^2", T)])
    # x^2 + y^2 has no nonzero rational zero, but does over Q(i)
    assert not zero_locus_at_origin([P("x^2 + y^2")])
    with pytest.raises(InputError):
        zero_locus_at_origin([P("x^2 + y")])
    assert zero_locus_at_origin([], variables=(), field=QQ)
    assert not zero_locus_at_origin([], variables=XY, field=QQ)


def test_mixed_rings_rejected():
    with pytest.raises(InputError):
        buchberger([P("x"), P("x", field=GF(3))])


def test_deadline():
    gens = [P("x^3 - y^2 + 1"), P("x^2*y - x + 3"), P("y^3 - x*y - 2")]
    with pytest.raises(DeadlineExceeded):
        buchberger(gens, deadline=time.monotonic() - 1)


def test_recording_collects_bases():
    with recording() as bucket:
        buchberger([P("x^2 - y")])
        radical_membership(P("x"), [P("x^2")])
    assert len(bucket) == 2
    assert all(certify(gb) for gb in bucket)


@st.composite
def small_systems(draw, field):
    n = draw(st.integers(1, 3))
    out = []
    for _ in range(n):
        terms = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                                     st.integers(-3, 3) if field is QQ else st.integers(0, field.p - 1),
                                     min_size=1, max_size=4))
        f = Polynomial.zero(XY, field)
        for e, c in terms.items():
            f = f + Polynomial.monomial(e, XY, field, c)
        out.append(f)
    return out


@settings(max_examples=60, deadline=None)
@given(small_systems(QQ), st.sampled_from([MonomialOrder(), LEX]))
def test_buchberger_postconditions_q(gens, order):
    gb = buchberger(gens, order)
    assert s_polynomials_reduce_to_zero(gb)
    assert is_reduced(gb)
    for g in gens:
        assert normal_form(g, gb).is_zero()


@settings(max_examples=60, deadline=None)
@given(small_systems(GF(5)))
def test_buchberger_postconditions_f5(gens):
    gb = buchberger(gens)
    assert certify(gb)
    for g in gens:
        assert normal_form(g, gb).is_zero()


@settings(max_examples=60, deadline=None)
@given(small_systems(QQ), small_systems(QQ))
def test_principal_membership_is_divisibility(a, b):
    f = a[0]
    if f.is_zero():
        return
    gb = buchberger([f])
    assert normal_form(b[0] * f, gb).is_zero()
    assert normal_form(f + 1, gb).is_zero() == f.is_constant()


def _random_form(rng, nvars, degree, q, variables):
    F = GF(q)
    f = Polynomial.zero(variables, F)
    for e in monomials(nvars, degree):
        f = f + Polynomial.monomial(e, variables, F, rng.randrange(q))
    return f


def test_radical_against_fq_points():
    """Necessary direction on random instances, sufficiency on planted powers."""
    rng = random.Random(11)
    for trial in range(60):
        q = rng.choice([3, 5])
        nvars = rng.choice([2, 3])
        variables = ("x", "y", "z")[:nvars]
        gens = [_random_form(rng, nvars, rng.randint(1, 3), q, variables) for _ in range(rng.randint(1, 3))]
        f = _random_form(rng, nvars, rng.randint(1, 2), q, variables)
        member = radical_membership(f, gens)
        terms = [g.terms for g in gens]
        if member:
            assert not witness_outside(f.terms, terms, nvars, q, max_k=1)
        # plant f^k into the ideal
        k = rng.randint(1, 3)
        planted = gens + [f ** k]
        assert radical_membership(f, planted)
        assert power_in_ideal(f.terms, [g.terms for g in planted], nvars, q) is not None


def test_zero_locus_against_search_q7():
    rng = random.Random(5)
    for trial in range(40):
        q = 7
        nvars = 2
        variables = ("x", "y")
        gens = [_random_form(rng, nvars, rng.randint(1, 3), q, variables) for _ in range(rng.randint(1, 2))]
        got = zero_locus_at_origin(gens)
        terms = [g.terms for g in gens]
        assert got == (common_projective_zero(terms, nvars, q) is None)
        assert got == origin_only_macaulay(terms, nvars, q)
