from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kochenlab.arith import (
    INF,
    MPoly,
    QAlgebra,
    dirichlet_prime,
    factor_mod_p,
    factor_over_Q,
    height_poly,
    height_rat,
    is_prime,
    next_prime,
    parse_poly,
    parse_rat,
    rationals_by_height,
    residue_p,
    total_degree,
    val_p,
)
from kochenlab.arith.ladic import LAdic, PrecisionLoss
from kochenlab.arith.upoly import pmul
from kochenlab.errors import InputError

rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x.numerator) < 10**9)
nonzero = rationals.filter(lambda x: x != 0)
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13])


# -- valuations and residues --


def test_val_p_examples():
    assert val_p(0, 3) is INF
    assert val_p(18, 3) == 2
    assert val_p(Fraction(5, 9), 3) == -2


def test_val_p_rejects_composite():
    with pytest.raises(InputError):
        val_p(5, 4)


def test_residue_examples():
    assert residue_p(Fraction(7, 2), 5) == 1
    assert residue_p(0, 5) == 0
    assert residue_p(5, 5) == 0
    with pytest.raises(InputError):
        residue_p(Fraction(1, 5), 5)


@given(nonzero, nonzero, small_primes)
def test_val_p_is_a_valuation(x, y, p):
    assert val_p(x * y, p) == val_p(x, p) + val_p(y, p)
    if x + y != 0:
        assert val_p(x + y, p) >= min(val_p(x, p), val_p(y, p))


@given(nonzero, small_primes)
def test_val_p_matches_sympy(x, p):
    num = sympy.multiplicity(p, abs(x.numerator)) if x.numerator else 0
    den = sympy.multiplicity(p, x.denominator)
    assert val_p(x, p) == num - den


@given(rationals, rationals, small_primes)
def test_residue_is_a_ring_map(x, y, p):
    if x.denominator % p == 0 or y.denominator % p == 0:
        return
    assert residue_p(x + y, p) == residue_p(x, p) + residue_p(y, p)
    assert residue_p(x * y, p) == residue_p(x, p) * residue_p(y, p)


# -- heights --


def test_height_examples():
    assert height_rat(Fraction(3, 4)) == 4
    g = MPoly.var(0, 2) ** 2 - MPoly.var(1, 2) * Fraction(1, 2)
    assert height_poly(g) == 2
    assert total_degree(MPoly.const(5, 2)) == 0


def test_rationals_by_height_is_complete_and_unique():
    rats = rationals_by_height(6)
    assert len(rats) == len(set(rats))
    want = {Fraction(a, b) for a in range(-6, 7) for b in range(1, 7)}
    assert set(rats) == want
    assert rats[0] == 0


def test_parse_rat():
    assert parse_rat("-3/6") == Fraction(-1, 2)
    with pytest.raises(InputError):
        parse_rat("1/0")
    with pytest.raises(InputError):
        parse_rat("abc")


# -- factorization --


def test_factor_mod_p_examples():
    assert factor_mod_p([1, 0, 1], 5) == [([2, 1], 1), ([3, 1], 1)]
    assert factor_mod_p([1, 0, 1], 2) == [([1, 1], 2)]
    assert factor_mod_p([1, 0, 1], 3) == [([1, 0, 1], 1)]
    with pytest.raises(InputError):
        factor_mod_p([0], 3)


def test_factor_over_Q_examples():
    c, facs = factor_over_Q([-1, 0, 0, 0, 1])
    assert c == 1
    assert sorted(tuple(f) for f, _ in facs) == sorted([(-1, 1), (1, 1), (1, 0, 1)])
    c, facs = factor_over_Q([-2, 0, 1])
    assert facs == [([-2, 0, 1], 1)]
    c, facs = factor_over_Q([0, 3])
    assert c == 3 and facs == [([0, 1], 1)]


def _expand(facs, p=None):
    out = [1]
    for f, k in facs:
        for _ in range(k):
            out = pmul(out, list(f), p)
    return out


poly_coeffs = st.lists(st.integers(-6, 6), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


@settings(max_examples=60)
@given(poly_coeffs, st.sampled_from([2, 3, 5, 7]))
def test_factor_mod_p_against_sympy(coeffs, p):
    if coeffs[-1] % p == 0:
        return
    facs = factor_mod_p(coeffs, p)
    T = sympy.symbols("T")
    expr = sum(c * T**i for i, c in enumerate(coeffs))
    lead, want = sympy.Poly(expr, T, modulus=p).factor_list()
    got = sorted((tuple(f), k) for f, k in facs)
    ref = sorted(
        (tuple(int(c) % p for c in reversed(sympy.Poly(g, T, modulus=p).monic().all_coeffs())), k)
        for g, k in want
    )
    assert got == ref
    prod = _expand(facs, p)
    inv = pow(coeffs[-1], -1, p)
    assert prod == [c * inv % p for c in coeffs]


@settings(max_examples=60)
@given(poly_coeffs)
def test_factor_over_Q_against_sympy(coeffs):
    c, facs = factor_over_Q(coeffs)
    prod = [x * c for x in _expand(facs)]
    assert prod == [Fraction(x) for x in coeffs]
    T = sympy.symbols("T")
    expr = sum(x * T**i for i, x in enumerate(coeffs))
    _, ref = sympy.factor_list(expr)
    degrees = sorted((sympy.degree(g, T), k) for g, k in ref if sympy.degree(g, T) > 0)
    assert sorted((len(f) - 1, k) for f, k in facs) == degrees


# -- primes --


def test_dirichlet_examples():
    assert dirichlet_prime(1, 2, extra=lambda p: p > 2, bound=100) == 3
    assert dirichlet_prime(2, 3, extra=lambda p: p > 3 and p % 2 == 1, bound=100) == 5
    with pytest.raises(InputError):
        dirichlet_prime(0, 2, bound=100)


@given(st.integers(1, 10**5))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(1, 10**5))
def test_next_prime_is_next(n):
    p = next_prime(n)
    assert p > n and is_prime(p)
    assert not any(is_prime(k) for k in range(n + 1, p))


# -- polynomials and algebras --


def test_parse_and_format_roundtrip():
    g = parse_poly("T^2+1", ["T"])
    assert g.format(["T"]) == "T^2 + 1"
    assert g.to_univariate() == [1, 0, 1]
    with pytest.raises(InputError):
        parse_poly("T^x", ["T"])


def test_mpoly_json_roundtrip():
    g = parse_poly("3*X1^2*X2 - X2/2 + 7", ["X1", "X2"])
    assert MPoly.from_json(g.to_json()) == g


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_qalgebra_is_commutative_ring(a, b):
    A = QAlgebra([1, 0, 0, 1])  # T^3 + 1
    x, y = A(a), A(b)
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x


def test_qalgebra_inverse():
    A = QAlgebra([-2, 0, 1])
    x = A([1, 1])
    assert x * x.inverse() == A.one()


# -- ell-adic numbers --


@given(nonzero, nonzero, st.sampled_from([2, 3, 5]))
def test_ladic_agrees_with_exact_arithmetic(x, y, ell):
    X, Y = LAdic.from_rat(ell, x, 12), LAdic.from_rat(ell, y, 12)
    prod = X * Y
    assert prod.val == val_p(x * y, ell)
    quo = X / Y
    assert quo.val == val_p(x / y, ell)
    if prod.val >= 0:
        assert prod.residue() == residue_p(x * y, ell).value
    try:
        s = X + Y
    except PrecisionLoss:
        return
    if x + y != 0:
        assert s.val == val_p(x + y, ell)
