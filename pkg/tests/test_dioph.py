import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kochenlab.arith import MPoly, parse_poly
from kochenlab.dioph import (
    DiophFamily,
    base,
    direct_algebra_points,
    eval_over_Fq,
    field,
    full_space,
    intersect,
    product,
    radical_power_check,
    rational_image,
    section,
    union,
    union_many,
    weil_points_over_Fq,
    weil_restrict,
    weil_restrict_modulus,
)
from kochenlab.dioph.compile import (
    compile_holomorphy_family,
    compile_R_family,
    gamma_family,
    gamma_witness,
    r_family_member,
)
from kochenlab.dioph.family import check_witness
from kochenlab.dioph.finite_field import AlgArray, irreducible_factors_q, is_irreducible_q, pmul_q
from kochenlab.dioph.weil import g_a_modulus
from kochenlab.errors import InputError, ResourceError
from kochenlab.kochen import KochenParams, gamma_eval
from kochenlab.verify import combinator_check, radical_check, weil_check


def poly(text, n, m=0):
    names = [f"X{i + 1}" for i in range(n)] + [f"Y{j + 1}" for j in range(m)]
    return parse_poly(text, names)


def pts(D, q):
    return eval_over_Fq(D, q)


# -- finite fields --


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64])
def test_field_axioms(q):
    F = field(q)
    import numpy as np

    e = np.arange(q)
    assert (F.add[e, 0] == e).all() and (F.mul[e, 1] == e).all()
    assert (F.add == F.add.T).all() and (F.mul == F.mul.T).all()
    assert all(F.mul[a, F.inv[a]] == 1 for a in range(1, q))
    a, b, c = np.meshgrid(e, e, e, indexing="ij")
    assert (F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]).all()
    assert (F.mul[F.mul[a, b], c] == F.mul[a, F.mul[b, c]]).all()


def test_field_rejects_bad_sizes():
    with pytest.raises(InputError):
        field(6)
    with pytest.raises(InputError):
        field(81)


def test_irreducible_factors_multiply_back():
    F = field(3)
    f = [2, 0, 1, 1, 1]
    facs = irreducible_factors_q(F, f)
    out = [1]
    for g, k in facs:
        assert is_irreducible_q(F, g)
        for _ in range(k):
            out = pmul_q(F, out, g)
    assert out == f


# -- eval_over_Fq --


def test_eval_examples():
    assert pts(base(1, 1, [poly("X1 - Y1^2", 1, 1)]), 3) == {(0,), (1,)}
    assert pts(base(1, 0, [MPoly.const(1, 1)]), 7) == set()
    assert pts(full_space(1), 4) == {(a,) for a in range(4)}


def test_eval_respects_budget():
    D = base(2, 3, [poly("X1 + Y1*Y2*Y3", 2, 3)])
    with pytest.raises(ResourceError):
        eval_over_Fq(D, 9, budget=1000)


def test_linear_elimination_matches_enumeration():
    rng = random.Random(5)
    for _ in range(20):
        q = rng.choice((2, 3, 4, 5))
        c = [rng.randint(-2, 2) for _ in range(4)]
        f = poly(f"{c[0]}*X1*Y1 + {c[1]}*Y2 + {c[2]}*X1^2 + {c[3]}", 1, 2)
        g = poly(f"X1*Y2 - {c[1]}*Y1 + 1", 1, 2)
        D = base(1, 2, [f, g])
        assert eval_over_Fq(D, q, linear_aux={1, 2}) == eval_over_Fq(D, q)


def test_linear_hint_is_checked():
    D = base(1, 1, [poly("Y1^2 - X1", 1, 1)])
    with pytest.raises(InputError):
        eval_over_Fq(D, 3, linear_aux={1})


# -- combinators --


def test_union_intersect_examples():
    A, B = base(1, 0, [poly("X1", 1)]), base(1, 0, [poly("X1 - 1", 1)])
    assert pts(union(A, B), 5) == {(0,), (1,)}
    assert pts(intersect(A, B), 5) == set()
    D = base(1, 1, [poly("X1 - Y1^2", 1, 1)])
    for q in (2, 3, 4):
        assert pts(union(D, D), q) == pts(D, q)
    with pytest.raises(InputError):
        union(A, full_space(2))


def test_product_examples():
    A, B = base(1, 0, [poly("X1", 1)]), base(1, 0, [poly("X1 - 1", 1)])
    assert pts(product(A, B), 3) == {(0, 1)}
    D = base(1, 1, [poly("X1 - Y1^2", 1, 1)])
    assert pts(product(D, full_space(1)), 5) == {(a, b) for (a,) in pts(D, 5) for b in range(5)}
    assert len(pts(product(D, D), 4)) == len(pts(D, 4)) ** 2


def test_image_examples():
    line = full_space(1)
    X = MPoly.var(0, 1)
    one = MPoly.const(1, 1)
    assert pts(rational_image(line, [(X**2, one)]), 5) == {(0,), (1,), (4,)}
    assert pts(rational_image(line, [(one, X)]), 5) == {(1,), (2,), (3,), (4,)}
    empty = base(1, 0, [one])
    assert pts(rational_image(empty, [(X, one)]), 5) == set()
    with pytest.raises(InputError):
        rational_image(line, [(X**2 - X, X)])


def test_section_examples():
    D = base(2, 0, [poly("X1 - X2", 2)])
    S = section(D, [3], 1)
    assert list(S.polys) == [poly("X1 - 3", 1)]
    D1 = base(1, 1, [poly("X1 - Y1^2", 1, 1)])
    D2 = base(1, 0, [poly("X1 - 2", 1)])
    assert pts(section(product(D1, D2), [2], 1), 5) == pts(D1, 5)
    with pytest.raises(InputError):
        section(D, [1, 2], 2)


def test_union_many_uses_selectors():
    parts = [base(1, 0, [poly(f"X1 - {i}", 1)]) for i in range(5)]
    D = union_many(parts)
    assert pts(D, 7) == {(i,) for i in range(5)}
    assert D.m == 3


def test_combinators_keep_aux_blocks_disjoint():
    d1 = base(1, 2, [poly("X1 - Y1*Y2", 1, 2)])
    d2 = base(1, 1, [poly("X1 + Y1", 1, 1)])
    D = intersect(d1, d2)
    left_vars = set().union(*(set(f.variables()) for f in D.polys[:1]))
    right_vars = set().union(*(set(f.variables()) for f in D.polys[1:]))
    assert left_vars <= {0, 1, 2} and right_vars <= {0, 3}
    P = product(d1, d2)
    assert set(P.polys[0].variables()) <= {0, 2, 3} and set(P.polys[1].variables()) <= {1, 4}


def test_family_json_roundtrip():
    D = union(base(1, 1, [poly("X1 - Y1^2", 1, 1)]), base(1, 0, [poly("X1/2 - 1", 1)]))
    E = DiophFamily.from_json(D.to_json())
    assert E.n == D.n and E.m == D.m and list(E.polys) == list(D.polys)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["union", "intersect", "product", "image", "section", "union_many"]),
       st.sampled_from([2, 3, 4, 5, 7, 9]), st.integers(0, 10**6))
def test_combinators_match_set_semantics(kind, q, seed):
    ok, info = combinator_check(random.Random(seed), kind, q)
    assert ok, info


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_points_grow_under_extension(seed):
    from kochenlab.verify import random_family

    rng = random.Random(seed)
    D = random_family(rng, 1, rng.randint(0, 1))
    assert pts(D, 3) <= pts(D, 9)


# -- witnesses --


def test_gamma_family_witness():
    params = KochenParams(3)
    D = gamma_family(params)
    check_witness(D, [gamma_eval(params, 2)], (([Fraction(2)], [])))
    assert gamma_witness(2) == ([Fraction(2)], [])


# -- Weil restriction --


def test_weil_examples():
    F3 = field(3)
    f = [poly("X1 - Y1", 1, 1)]
    D = weil_restrict(f, 1, 1, 1)
    assert D.n == 2
    for z in range(3):
        assert weil_points_over_Fq(D, F3, (z,)) == {(0,), (1,), (2,)}
    sq = [poly("X1 - Y1^2", 1, 1)]
    D = weil_restrict(sq, 1, 1, 2)
    assert D.m == 2 * 1 + 1 * (D.origin[3]["d"] + 1)
    assert weil_points_over_Fq(D, F3, (1, 0)) == {(0,), (1,), (2,)}
    assert weil_points_over_Fq(D, F3, (0, 0)) == {(0,), (1,)}


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7, 9]), st.integers(1, 3), st.integers(0, 10**6))
def test_weil_matches_direct_algebra(q, k, seed):
    if q**k > 200:
        k = 2
    ok, info = weil_check(random.Random(seed), q, k, z_samples=2)
    assert ok, info


def test_weil_along_a_non_monic_modulus():
    G = g_a_modulus(2, (1, 1))
    f = [poly("X1*Y1 - 1", 1, 1)]
    D = weil_restrict_modulus(f, 1, 1, G, 1)
    for q in (3, 5):
        F = field(q)
        for a in range(1, q):
            g = G.partial_eval({0: Fraction(a)}).remap([0, 0], 1).to_univariate()
            g = [F.from_rat(c) for c in g]
            inv = int(F.inv[g[-1]])
            monic = [F.m(c, inv) for c in g]
            assert weil_points_over_Fq(D, F, (a,)) == direct_algebra_points(f, 1, 1, F, monic)


def test_algebra_arrays_are_associative():
    import numpy as np

    F = field(4)
    g = [1, 1, 0, 1]
    rng = np.random.default_rng(0)
    x, y, z = (AlgArray(F, g, rng.integers(0, 4, size=(50, 3))) for _ in range(3))
    assert ((x * y) * z - x * (y * z)).is_zero_mask().all()
    assert ((x + y) * z - (x * z + y * z)).is_zero_mask().all()


# -- radical-power identity --


def test_radical_examples():
    f = [poly("X1 - Y1^2", 1, 1)]
    assert radical_power_check(f, 1, 1, 2, 3, [0, 0, 1])
    assert radical_power_check(f, 1, 1, 2, 3, [2, 0, 1])
    assert radical_power_check([poly("X1*Y1 + Y1^2 - 1", 1, 1)], 1, 1, 1, 5, [2, 1])
    with pytest.raises(InputError):
        radical_power_check(f, 1, 1, 1, 3, [0, 0, 1])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.sampled_from(["nilpotent", "split", "any"]), st.integers(0, 10**6))
def test_radical_identity(q, kind, seed):
    assert radical_check(random.Random(seed), q, kind)


# -- compiled families --


@pytest.fixture(scope="module")
def R3():
    return compile_R_family(3, 1)


def test_compile_R_examples(R3):
    assert R3.n == 1
    v = r_family_member(R3, Fraction(2, 35))
    assert v.verdict == "Member"
    assert R3.holds([Fraction(2, 35)], v.aux)
    assert r_family_member(R3, Fraction(1, 3)).verdict == "NonMember"
    assert r_family_member(R3, 0).verdict == "Member"


def test_compile_R_rejects_large_budgets():
    with pytest.raises(ResourceError):
        compile_R_family(3, 2, budget=100)


@pytest.fixture(scope="module")
def H2():
    return compile_holomorphy_family(2, 1)


def test_holomorphy_examples(H2):
    assert H2.l == 2 * 2
    assert H2.member(3, 1).verdict == "Member"
    assert H2.member(Fraction(1, 2), 1).verdict == "NonMember"
    assert H2.member(Fraction(1, 2), Fraction(1, 2)).verdict == "Member"


def test_holomorphy_modulus_matches_g_a(H2):
    from kochenlab.numberfield import g_a_poly

    for a in (0, 1, Fraction(1, 2), 3):
        g = H2.modulus.partial_eval({0: Fraction(a)}).remap([0, 0], 1).to_univariate()
        assert [Fraction(c) for c in g] == [Fraction(c) for c in g_a_poly(2, (1, 1), a)]
