from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kochenlab.arith.rational import INF, val_p
from kochenlab.errors import InputError, PreconditionError
from kochenlab.kochen import (
    NEG_VAL,
    POLE,
    POS_VAL,
    RES_ROOT_POS,
    KochenParams,
    gamma_case,
    gamma_eval,
    gamma_perturbation_check,
    gamma_rational_poles,
    gamma_small_certificate,
    gamma_valuation_direct,
    gamma_valuation_predict,
    omega_check,
    omega_construct,
    rho_check,
    rho_eval,
)
from kochenlab.numberfield import NumberField

P3 = KochenParams(3)
P2 = KochenParams(2)
QQ = NumberField([0, 1])


def rational_prime(p):
    (P,) = QQ.primes_above(p)
    return P


def test_gamma_eval_examples():
    assert gamma_eval(P3, 0) == 0
    assert gamma_eval(P3, 2) == Fraction(2, 35)
    assert gamma_eval(P3, Fraction(1, 3)) == Fraction(72, 665)


def test_gamma_eval_matches_defining_formula():
    for params in (KochenParams(3, 2, 1, -1), KochenParams(2, 1, 2)):
        for x in (Fraction(5, 7), Fraction(-3, 4), Fraction(9)):
            u = x**params.Q - x
            want = (u / (u * u - 1)) ** params.e / params.t
            assert gamma_eval(params, x) == want


def test_no_rational_poles():
    for p in (2, 3, 5):
        for tau in ((1, 1), (1, 2), (2, 1)):
            assert gamma_rational_poles(KochenParams(p, *tau)) == []


def test_predict_examples():
    assert gamma_valuation_predict(P3, -1, 1).valuation == 2
    assert gamma_valuation_predict(P3, -1, 1).tag == NEG_VAL
    assert gamma_valuation_predict(P3, 1, 1).valuation == 0
    assert gamma_valuation_predict(P3, 1, 1).tag == POS_VAL
    case = gamma_valuation_predict(P3, 0, 1, 1, 0)
    assert case.tag == RES_ROOT_POS and case.valuation == 0
    assert val_p(gamma_eval(P3, 2), 3) == 0


def test_predict_rejects_inconsistent_data():
    with pytest.raises(InputError):
        gamma_valuation_predict(P3, 0, 1)
    with pytest.raises(InputError):
        gamma_valuation_predict(P3, 1, 0)


params_st = st.builds(
    KochenParams,
    st.sampled_from([2, 3, 5, 7]),
    st.integers(1, 2),
    st.integers(1, 2),
    st.sampled_from([1, -1]),
)
rat_st = st.fractions(max_denominator=500).filter(lambda x: abs(x.numerator) <= 500)


@settings(max_examples=300)
@given(params_st, rat_st, st.integers(-3, 3))
def test_case_formula_matches_direct_valuation(params, x, k):
    x = x * Fraction(params.p) ** k
    assert gamma_case(params, x).valuation == gamma_valuation_direct(params, x)


@given(params_st, rat_st)
def test_gamma_values_are_p_integral(params, x):
    v = gamma_valuation_direct(params, x)
    assert v is INF or v >= 0


def test_small_certificate_examples():
    L = NumberField([-2, 0, 1])
    (P,) = L.primes_above(2)
    assert P.e == 2
    ok, v = gamma_small_certificate(P2, L([0, 1]), P)
    assert ok and v == -1
    G = NumberField([1, 0, 1])
    with pytest.raises(PreconditionError):
        gamma_small_certificate(P2, G([0, 1]), G.primes_above(3)[0])
    P5 = [Q for Q in G.primes_above(5) if Q.val(G([2, 1])) == 1][0]
    with pytest.raises(PreconditionError):
        gamma_small_certificate(KochenParams(5), G([2, 1]), P5)


def test_perturbation_examples():
    with pytest.raises(PreconditionError):
        gamma_perturbation_check(P3, 3, 12, rational_prime(3))
    # gamma_2(1/2) = 2/15 is 2-integral, so the perturbation check does not apply
    assert gamma_eval(P2, Fraction(1, 2)) == Fraction(2, 15)
    with pytest.raises(PreconditionError):
        gamma_perturbation_check(P2, Fraction(1, 2), Fraction(5, 2), rational_prime(2))


def test_perturbation_at_the_ramified_prime_of_q_sqrt2():
    # v(gamma(sqrt 2)) = -1 there, so the hypothesis holds
    L = NumberField([-2, 0, 1])
    (P,) = L.primes_above(2)
    x = L([0, 1])
    assert P.val(gamma_eval(P2, x)) < 0
    assert gamma_perturbation_check(P2, x, x, P)
    assert gamma_perturbation_check(P2, x, x + 4, P)


def test_rho_examples():
    P = rational_prime(2)
    assert rho_eval(P2, 2) == Fraction(2, 3) and val_p(Fraction(2, 3), 2) == 1
    assert rho_eval(P2, 1) == 1
    assert rho_eval(P2, Fraction(1, 2)) == Fraction(2, 3)
    for x in (2, 1, Fraction(1, 2)):
        assert rho_check(P2, x, P)


@given(rat_st.filter(lambda x: x != 0), st.sampled_from([2, 3, 5]))
def test_rho_check_on_rationals(x, p):
    params = KochenParams(p)
    if rho_eval(params, x) is POLE:
        return
    assert rho_check(params, x, rational_prime(p))


def test_omega_examples():
    om = omega_construct(P3, (2, 2))
    assert (om.k, om.ell) == (2, 3)
    assert om.beta(3) == Fraction(27, 9)
    om = omega_construct(KochenParams(3, 2, 1), (2, 2))
    assert (om.k, om.ell) == (1, 3)
    assert om.beta(3) == Fraction(27, 3)
    with pytest.raises(InputError):
        omega_construct(KochenParams(3, 2, 2), (1, 1))


@given(rat_st.filter(lambda x: x != 0))
def test_omega_positive_at_admissible_primes(x):
    om = omega_construct(P3, (2, 2))
    if om(x) is POLE:
        return
    assert omega_check(P3, om, (2, 2), x, rational_prime(3))
