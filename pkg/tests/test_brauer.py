import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kochenlab.arith.rational import int_val, val_p
from kochenlab.brauer import (
    REAL,
    QuaternionAlgebra,
    ReciprocityError,
    brauer_class_prescribe,
    compile_D_family,
    compile_T_family,
    construct_AB,
    d_family_member,
    hilbert_symbol,
    nrd,
    quat_mul,
    ramification_set,
    relevant_places,
    sample_T,
    symbol_product,
    t_family_member,
)
from kochenlab.errors import InputError, UnsupportedError
from kochenlab.kochen import KochenParams

A25 = QuaternionAlgebra(2, 5)


def _reduce(a, p):
    """Integer in the same square class as a with p-valuation 0 or 1."""
    a = Fraction(a)
    n = a.numerator * a.denominator
    k = int_val(n, p)
    return n // p ** (k - k % 2)


def local_symbol_oracle(a, b, p):
    """+1 iff z^2 = a x^2 + b y^2 has a primitive solution mod p^2 (mod 32 for p = 2).

    With coefficients of valuation at most one this is equivalent to solvability in Q_p.
    """
    a, b = _reduce(a, p), _reduce(b, p)
    mod = 32 if p == 2 else p * p
    r = np.arange(mod, dtype=np.int64)
    x, y, z = np.meshgrid(r, r, r, indexing="ij", sparse=True)
    ok = (z * z - a * x * x - b * y * y) % mod == 0
    primitive = (x % p != 0) | (y % p != 0) | (z % p != 0)
    return 1 if (ok & primitive).any() else -1


def test_symbol_examples():
    assert hilbert_symbol(-1, -1, REAL) == -1
    assert hilbert_symbol(2, 5, 5) == -1
    for v in (2, 3, 5, 7, REAL):
        assert hilbert_symbol(1, 7, v) == 1
    with pytest.raises(InputError):
        hilbert_symbol(0, 3, 3)


@settings(max_examples=150, deadline=None)
@given(st.integers(-60, 60).filter(bool), st.integers(-60, 60).filter(bool), st.sampled_from([2, 3, 5, 7]))
def test_symbol_matches_local_solvability(a, b, p):
    assert hilbert_symbol(a, b, p) == local_symbol_oracle(a, b, p)


@given(st.integers(-60, 60).filter(bool), st.integers(-60, 60).filter(bool))
def test_real_symbol_is_sign_rule(a, b):
    assert hilbert_symbol(a, b, REAL) == (-1 if a < 0 and b < 0 else 1)


def test_ramification_examples():
    assert ramification_set(-1, -1) == {2, REAL}
    assert ramification_set(2, 5) == {2, 5}
    assert ramification_set(1, 7) == set()
    assert A25.ramification() == {2, 5}


rats = st.builds(Fraction, st.integers(-50, 50).filter(bool), st.integers(1, 50))


@settings(max_examples=200, deadline=None)
@given(rats, rats)
def test_reciprocity(a, b):
    assert symbol_product(a, b) == 1
    assert len(ramification_set(a, b)) % 2 == 0


@settings(max_examples=150, deadline=None)
@given(rats, rats, rats)
def test_symbol_is_bilinear(a, b1, b2):
    for v in set(relevant_places(a, b1)) | set(relevant_places(a, b2)) | {2, REAL}:
        assert hilbert_symbol(a, b1 * b2, v) == hilbert_symbol(a, b1, v) * hilbert_symbol(a, b2, v)
        assert hilbert_symbol(a, b1, v) == hilbert_symbol(b1, a, v)


def test_construct_AB_examples():
    A, B = construct_AB(5, 2, 13)
    assert (A.a, A.b) == (2, 5)
    assert A.ramification() == {2, 5} and B.ramification() == {5, 13}
    A, B = construct_AB(2, 5, 13)
    assert (A.a, A.b) == (2, 5)
    assert B.ramification() == {2, 13}
    with pytest.raises(InputError):
        construct_AB(5, 5, 13)
    with pytest.raises(InputError):
        construct_AB(4, 5, 13)


@pytest.mark.parametrize("p,q1,q2", [(3, 5, 7), (7, 2, 11), (11, 13, 17), (2, 3, 5)])
def test_construct_AB_invariants(p, q1, q2):
    A, B = construct_AB(p, q1, q2)
    assert A.ramification() == {p, q1} and B.ramification() == {p, q2}
    assert hilbert_symbol(A.a, A.b, REAL) == 1 and hilbert_symbol(B.a, B.b, REAL) == 1


def test_prescribe_examples():
    cls = brauer_class_prescribe(2, {5: Fraction(1, 2), 2: Fraction(1, 2)})
    assert cls.realization.ramification() == {2, 5}
    assert (cls.realization.a, cls.realization.b) == (2, 5)
    cls = brauer_class_prescribe(3, {7: Fraction(1, 3), 13: Fraction(2, 3)})
    assert cls.realization is None and cls.to_json()["invariants"] == {"7": "1/3", "13": "2/3"}
    with pytest.raises(ReciprocityError):
        brauer_class_prescribe(2, {5: Fraction(1, 2)})
    with pytest.raises(InputError):
        brauer_class_prescribe(3, {REAL: Fraction(1, 3), 7: Fraction(2, 3)})
    with pytest.raises(InputError):
        brauer_class_prescribe(2, {7: Fraction(1, 3)})


def test_prescribe_with_real_place():
    cls = brauer_class_prescribe(2, {REAL: Fraction(1, 2), 3: Fraction(1, 2)})
    assert cls.realization.ramification() == {3, REAL}


def test_nrd_trd_examples():
    from kochenlab.brauer import trd

    assert nrd(A25, (1, 0, 0, 0)) == 1 and trd(A25, (1, 0, 0, 0)) == 2
    assert nrd(A25, (3, 2, 0, 0)) == 1 and trd(A25, (3, 2, 0, 0)) == 6
    H = QuaternionAlgebra(-1, -1)
    assert nrd(H, (0, 1, 0, 0)) == 1 and trd(H, (0, 1, 0, 0)) == 0


quat = st.tuples(*[st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))] * 4)


@given(st.sampled_from([(2, 5), (-1, -1), (3, -7), (Fraction(1, 2), 6)]), quat, quat)
def test_nrd_is_multiplicative(ab, x, y):
    A = QuaternionAlgebra(*ab)
    assert nrd(A, quat_mul(A, x, y)) == nrd(A, x) * nrd(A, y)


def test_quaternion_relations():
    A = QuaternionAlgebra(3, -7)
    i, j, k = (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
    assert quat_mul(A, i, i) == (3, 0, 0, 0)
    assert quat_mul(A, j, j) == (-7, 0, 0, 0)
    assert quat_mul(A, i, j) == k
    assert quat_mul(A, j, i) == (0, 0, 0, -1)


def test_sample_T_examples():
    assert 0 in sample_T(A25, 1)
    T3 = sample_T(A25, 3)
    assert 4 in T3
    for H in (1, 2, 3, 4):
        assert Fraction(1, 2) not in sample_T(A25, H)
    with pytest.raises(InputError):
        sample_T(A25, 0)


def test_sample_T_is_integral_at_ramified_primes():
    for z in sample_T(A25, 4):
        assert val_p(z, 2) >= 0 and val_p(z, 5) >= 0
    A = QuaternionAlgebra(3, 13)
    ram = [q for q in A.ramification() if q != REAL]
    for z in sample_T(A, 3):
        assert all(val_p(z, q) >= 0 for q in ram)


def test_sample_T_is_symmetric():
    T = sample_T(A25, 3)
    assert all(-z in T for z in T)


def test_T_family_agrees_with_samples():
    D = compile_T_family(A25)
    assert D.n == 1
    T = sample_T(A25, 3)
    for z in sorted(T, key=abs)[:15]:
        assert t_family_member(D, A25, z, H=3) is not None
    assert t_family_member(D, A25, Fraction(1, 2), H=3) is None


def test_D_family_examples():
    params = KochenParams(5)
    A, B = construct_AB(5, 2, 13)
    D = compile_D_family(params, A, B)
    assert D.n == 1
    assert d_family_member(D, 7).verdict == "Member"
    assert d_family_member(D, Fraction(1, 5)).verdict == "NonMember"
    with pytest.raises(UnsupportedError):
        compile_D_family(KochenParams(5, 1, 2), A, B)


def test_D_family_members_have_p_integral_values():
    params = KochenParams(5)
    A, B = construct_AB(5, 2, 13)
    D = compile_D_family(params, A, B)
    rng = random.Random(4)
    for _ in range(10):
        x = Fraction(rng.randint(-20, 20), rng.choice([1, 3, 7, 25]))
        v = d_family_member(D, x)
        if v.verdict == "Member":
            assert val_p(x, 5) >= 0 if x else True
        if val_p(x, 5) < 0:
            assert v.verdict == "NonMember"
