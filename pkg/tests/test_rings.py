from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kochenlab.arith import MPoly
from kochenlab.arith.rational import val_p
from kochenlab.errors import InputError
from kochenlab.kochen import KochenParams, gamma_eval
from kochenlab.rings import (
    RingSpec,
    check_obstruction,
    check_R_witness,
    check_relation_witness,
    count_P,
    deep_exclusion_test,
    enumerate_P,
    exclusion_root_test,
    member_R_pgt,
    member_R_pgtn,
    member_R_pn,
    pi_lower_bound,
    proper_subring_witness,
    star,
    verify_certificate,
)

P3 = KochenParams(3)
X1 = MPoly.var(0, 1)


def spec(n=1, g=X1, params=P3):
    return RingSpec(params, g, n)


def test_enumerate_P_examples():
    fam2 = enumerate_P(2, 1)
    assert len(fam2) == 9 == count_P(1, 2)
    assert {(g.constant_term(), g.terms.get(((0, 1),), 0)) for g in fam2} == {
        (a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)
    }
    assert len(enumerate_P(3, 1)) == 9
    with pytest.raises(InputError):
        enumerate_P(2, 0)


def test_enumerate_P_is_closed_under_star():
    for p in (2, 3, 5):
        fam = set(enumerate_P(p, 1))
        assert {star(g) for g in fam} == fam
    assert count_P(2, 3) == 7**6


def test_star_is_an_involution():
    g = MPoly.var(0, 2) ** 2 * Fraction(1, 2) - MPoly.var(1, 2) + 1
    assert star(star(g)) == g
    assert star(g).eval([Fraction(2), Fraction(3)]) == -g.eval([Fraction(-2), Fraction(-3)])


def test_member_R_pgt_examples():
    v = member_R_pgt(spec(), 0)
    assert v.is_member and list(v.witness.u) == [0] and list(v.witness.w) == [0]
    v = member_R_pgt(spec(), Fraction(2, 35))
    assert v.is_member and list(v.witness.u) == [2] and list(v.witness.w) == [0]
    v = member_R_pgt(spec(), Fraction(1, 3))
    assert v.is_nonmember and v.obstruction["kind"] == "valuation"


def test_member_R_pgtn_examples():
    v = member_R_pgtn(spec(2), Fraction(2, 35))
    assert v.is_member and v.witness.degree == 1
    v = member_R_pgtn(spec(2), Fraction(1, 2))
    assert v.is_nonmember and v.obstruction["ell"] == 2
    assert member_R_pgtn(spec(1), 0).is_member


def test_member_R_pn_examples():
    v = member_R_pn(3, 1, Fraction(-2, 35))
    assert v.is_member
    check_relation_witness(KochenParams(3, 1, 1, v.t // 3), v.g, Fraction(-2, 35), v.witness)
    assert member_R_pn(3, 1, Fraction(1, 3)).is_nonmember


def test_member_R_pn_one_half_is_a_member():
    # the constant polynomial 1 with t = -3 gives 1/(1 - 3) = -1/2, so x - 1/2 is a degree-1 relation
    v = member_R_pn(3, 1, Fraction(1, 2))
    assert v.is_member
    assert v.t == -3 and v.g.is_constant()
    check_relation_witness(KochenParams(3, 1, 1, -1), v.g, Fraction(1, 2), v.witness)


def test_exclusion_root_test_examples():
    assert exclusion_root_test(3, 2)
    assert exclusion_root_test(2, 17)
    assert not exclusion_root_test(3, 5)
    assert 3**3 - 3 + 1 == 25
    with pytest.raises(InputError):
        exclusion_root_test(3, 3)


def test_counterexample_witness():
    g = gamma_eval(P3, 3)
    assert g == Fraction(8, 575)
    assert val_p(g, 5) == -2


def test_deep_exclusion_examples():
    assert deep_exclusion_test(7, 3)
    assert deep_exclusion_test(5, 2)
    assert not deep_exclusion_test(7, 5)


def test_proper_subring_examples():
    assert proper_subring_witness(3, samples=100)["ell"] == 2
    w = proper_subring_witness(2, samples=100)
    assert w["ell"] == 17 and w["witness"] == "1/17"
    assert proper_subring_witness(101, samples=20)["ell"] == 2


def test_pi_lower_bound_examples():
    cert = pi_lower_bound(1, family=[X1], samples=200)
    assert (cert.ell, cert.a, cert.p) == (3, 1, 5)
    full = pi_lower_bound(1, samples=200)
    assert full.ell >= 11
    verify_certificate(full, samples=100, seed=3)
    with pytest.raises(InputError):
        pi_lower_bound(0)


def test_pi_lower_bound_n2():
    cert = pi_lower_bound(2, samples=100)
    assert cert.ell > cert.family_size + 1
    assert (cert.p - 1) % (cert.ell - 1) == 0


rat_st = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 40))


@settings(max_examples=40, deadline=None)
@given(rat_st)
def test_verdicts_are_sound(x):
    s = spec(1)
    v = member_R_pgtn(s, x, height=10)
    if v.is_member:
        check_relation_witness(s.params, s.g, x, v.witness)
    elif v.is_nonmember:
        check_obstruction(s.params, s.g, x, v.obstruction)


@settings(max_examples=30, deadline=None)
@given(rat_st)
def test_membership_is_monotone_in_n(x):
    if member_R_pgtn(spec(1), x, height=8).is_member:
        assert member_R_pgtn(spec(2), x, height=8).is_member


@settings(max_examples=30, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6))
def test_sign_identity_for_single_elements(u, w):
    # a/(1 - p b) built from g at t = -p equals minus the element built from g* at t = +p
    g = X1 * 2 + 1
    gs = star(g)
    a, b = g.eval([gamma_eval(KochenParams(3, 1, 1, -1), u)]), g.eval([gamma_eval(KochenParams(3, 1, 1, -1), w)])
    x = a / (1 - 3 * b)
    a2, b2 = gs.eval([gamma_eval(P3, u)]), gs.eval([gamma_eval(P3, w)])
    assert x == -(a2 / (1 + 3 * b2))
    v = member_R_pgt(spec(1, gs), -x, height=8)
    assert v.is_member
    check_R_witness(P3, gs, -x, v.witness)
