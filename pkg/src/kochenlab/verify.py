"""Sampled consistency suites behind `kochenlab verify`, plus the random generators they share with the tests.

Each suite returns a list of Check records. A failed check means an
implemented construction disagrees with its independent oracle; callers
treat that as an invariant violation.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith.mpoly import MPoly
from .arith.primes import primes_up_to
from .arith.rational import INF, int_val
from .kochen import KochenParams, gamma_case, gamma_eval, gamma_rational_poles, gamma_valuation_direct

SUITES = ("kochen", "rings", "dioph", "brauer", "numberfield")


@dataclass
class Check:
    name: str
    passed: bool
    count: int
    detail: str = ""

    def to_json(self):
        out = {"name": self.name, "passed": self.passed, "count": self.count}
        if self.detail:
            out["detail"] = self.detail
        return out


# -- generators --------------------------------------------------------------


def random_rational(rng, height=1000, p=None, spread=3):
    """A nonzero rational; with p given, scaled by p^k for |k| <= spread to reach every case."""
    x = Fraction(rng.randint(-height, height) or 1, rng.randint(1, height))
    if p is not None:
        x *= Fraction(p) ** rng.randint(-spread, spread)
    return x


def random_poly(rng, arity, max_degree=3, max_terms=3, coeff=2):
    """A random polynomial with small integer coefficients and total degree <= max_degree."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * arity
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(arity)] += 1
        c = rng.randint(-coeff, coeff)
        if c:
            terms.append((exps, c))
    if not terms:
        terms = [([0] * arity, 1)]
    return MPoly.from_dense(arity, terms)


def random_family(rng, n, m, max_polys=2):
    from .dioph.family import base

    polys = [random_poly(rng, n + m) for _ in range(rng.randint(1, max_polys))]
    return base(n, m, polys)


# -- reference semantics of the combinators over F_q ---------------------------


def _eval_points(F, f, points):
    """Evaluate f at a list of points (tuples of field elements)."""
    if not points:
        return np.zeros(0, dtype=np.int64)
    from .dioph.finite_field import eval_poly

    arr = np.array(points, dtype=np.int64).reshape(len(points), -1)
    cols = [arr[:, i] for i in range(arr.shape[1])]
    return eval_poly(F, f, cols, len(points))


def reference_image(F, points, maps):
    points = sorted(points)
    if not points:
        return set()
    nums = [_eval_points(F, g, points) for g, _ in maps]
    dens = [_eval_points(F, h, points) for _, h in maps]
    out = set()
    for idx in range(len(points)):
        if all(d[idx] != 0 for d in dens):
            out.add(tuple(int(F.mul[nm[idx], F.inv[d[idx]]]) for nm, d in zip(nums, dens)))
    return out


def combinator_check(rng, kind, q):
    """Build a random family with one combinator; compare the compiled polynomials
    with the set-theoretic operation on the operands' point sets. Returns (ok, info)."""
    from .dioph import family as fam
    from .dioph.finite_field import field
    from .dioph.oracle import eval_over_Fq

    F = field(q)
    if kind in ("union", "intersect"):
        n = rng.randint(1, 2)
        d1 = random_family(rng, n, rng.randint(0, 1))
        d2 = random_family(rng, n, rng.randint(0, 1))
        D = fam.union(d1, d2) if kind == "union" else fam.intersect(d1, d2)
        s1, s2 = eval_over_Fq(d1, F), eval_over_Fq(d2, F)
        want = s1 | s2 if kind == "union" else s1 & s2
        got = eval_over_Fq(D, F)
    elif kind == "product":
        d1 = random_family(rng, 1, rng.randint(0, 1))
        d2 = random_family(rng, rng.randint(1, 2), rng.randint(0, 1))
        D = fam.product(d1, d2)
        want = {a + b for a in eval_over_Fq(d1, F) for b in eval_over_Fq(d2, F)}
        got = eval_over_Fq(D, F)
    elif kind == "image":
        n = rng.randint(1, 2)
        d = random_family(rng, n, rng.randint(0, 1))
        k = rng.randint(1, 2)
        maps = []
        for _ in range(k):
            g = random_poly(rng, n, max_degree=2)
            h = random_poly(rng, n, max_degree=1)
            if h.is_zero() or not fam._coprime(g, h):
                h = MPoly.const(1, n)
            maps.append((g, h))
        D = fam.rational_image(d, maps)
        inverses = frozenset(range(D.n + d.n + d.m, D.arity))
        want = reference_image(F, eval_over_Fq(d, F), maps)
        got = eval_over_Fq(D, F, linear_aux=inverses)
    elif kind == "section":
        n = rng.randint(2, 3)
        d = random_family(rng, n, rng.randint(0, 1))
        r = rng.randint(1, n - 1)
        vals = [rng.randint(-3, 3) for _ in range(r)]
        D = fam.section(d, vals, r)
        target = tuple(F.from_rat(v) for v in vals)
        want = {x[: n - r] for x in eval_over_Fq(d, F) if x[n - r:] == target}
        got = eval_over_Fq(D, F)
    elif kind == "union_many":
        n = 1
        parts = [random_family(rng, n, rng.randint(0, 1), max_polys=1) for _ in range(rng.randint(2, 3))]
        D = fam.union_many(parts)
        want = set().union(*(eval_over_Fq(d, F) for d in parts))
        got = eval_over_Fq(D, F)
    else:
        raise ValueError(kind)
    return got == want, {"q": q, "n": D.n, "m": D.m, "points": len(got)}


def weil_check(rng, q, k, z_samples=3):
    """Weil restriction along T^k + z_{k-1} T^{k-1} + ... + z_0 against direct algebra arithmetic."""
    from .dioph.finite_field import field
    from .dioph.oracle import direct_algebra_points
    from .dioph.weil import weil_points_over_Fq, weil_restrict

    F = field(q)
    n, m = 1, 1
    f_list = [random_poly(rng, n + m, max_degree=2) for _ in range(rng.randint(1, 2))]
    D = weil_restrict(f_list, n, m, k)
    zs = {tuple(rng.randrange(q) for _ in range(k)) for _ in range(z_samples)}
    for z in sorted(zs):
        left = weil_points_over_Fq(D, F, z)
        right = direct_algebra_points(f_list, n, m, F, list(z) + [1])
        if left != right:
            return False, {"q": q, "k": k, "z": z}
    return True, {"q": q, "k": k, "z_count": len(zs)}


def random_algebra_modulus(rng, F, kind):
    """A monic modulus over F: 'nilpotent' (a power of a linear factor), 'split' or 'any'."""
    from .dioph.finite_field import pmul_q

    if kind == "nilpotent":
        c = rng.randrange(F.q)
        lin = [F.neg[c], 1]
        g = [1]
        for _ in range(rng.randint(2, 3)):
            g = pmul_q(F, g, [int(v) for v in lin])
        return g
    if kind == "split":
        roots = rng.sample(range(F.q), min(F.q, 2))
        g = [1]
        for r in roots:
            g = pmul_q(F, g, [int(F.neg[r]), 1])
        return g
    d = rng.randint(1, 3)
    return [rng.randrange(F.q) for _ in range(d)] + [1]


def radical_check(rng, q, kind):
    from .dioph.finite_field import field
    from .dioph.weil import radical_power_check

    F = field(q)
    g = random_algebra_modulus(rng, F, kind)
    f_list = [random_poly(rng, 2, max_degree=2)]
    l = len(g) - 1 + rng.randint(0, 1)
    return radical_power_check(f_list, 1, 1, l, F, g)


# -- suites ------------------------------------------------------------------


def _run(name, fn, count):
    from .errors import InvariantViolation

    try:
        ok, detail = fn()
    except InvariantViolation as exc:
        ok, detail = False, str(exc)
    return Check(name, bool(ok), count, detail or "")


def suite_kochen(seed, samples=2000):
    rng = random.Random(seed)
    checks = []
    for p in (2, 3, 5, 7):
        for tau in ((1, 1), (1, 2), (2, 1)):
            params = KochenParams(p, *tau)

            def table(params=params):
                for _ in range(samples // 12):
                    x = random_rational(rng, 200, params.p)
                    direct = gamma_valuation_direct(params, x)
                    if direct != gamma_case(params, x).valuation:
                        return False, f"x = {x}"
                return True, ""

            checks.append(_run(f"valuation_case_table p={p} tau={tau[0]},{tau[1]}", table, samples // 12))
            checks.append(_run(
                f"no_rational_poles p={p} tau={tau[0]},{tau[1]}",
                lambda params=params: (gamma_rational_poles(params) == [], ""),
                2,
            ))

    def integral():
        for _ in range(samples):
            p = rng.choice((2, 3, 5, 7))
            x = random_rational(rng, 100)
            v = gamma_valuation_direct(KochenParams(p), x)
            if v is not INF and v < 0:
                return False, f"p = {p}, x = {x}"
        return True, ""

    checks.append(_run("gamma_values_p_integral", integral, samples))
    return checks


def suite_rings(seed, samples=500):
    from .rings import (
        RingSpec,
        check_obstruction,
        check_relation_witness,
        exclusion_root_test,
        member_R_pgtn,
        pi_lower_bound,
    )

    rng = random.Random(seed)
    checks = []
    odd = [p for p in primes_up_to(199) if p > 2]
    checks.append(_run("exclusion_ell_2_odd_p", lambda: (all(exclusion_root_test(p, 2) for p in odd), ""), len(odd)))
    checks.append(_run("exclusion_ell_17_p_2", lambda: (exclusion_root_test(2, 17), ""), 1))
    checks.append(_run("counterexample_3_5", lambda: (
        not exclusion_root_test(3, 5) and gamma_eval(KochenParams(3), 3) == Fraction(8, 575), ""), 1))

    def two_adic():
        for _ in range(samples):
            p = rng.choice(odd[:10])
            x = random_rational(rng, 100)
            v = gamma_valuation_direct(KochenParams(p), x, 2)
            if v is not INF and v < 0:
                return False, f"p = {p}, x = {x}"
        return True, ""

    checks.append(_run("gamma_values_2_integral", two_adic, samples))

    def toy():
        cert = pi_lower_bound(1, family=[MPoly.var(0, 1)], samples=samples, seed=seed)
        return (cert.ell, cert.a, cert.p) == (3, 1, 5), ""

    checks.append(_run("toy_lower_bound_certificate", toy, samples))

    def soundness():
        spec = RingSpec(KochenParams(3), MPoly.var(0, 1), 1)
        for _ in range(20):
            x = random_rational(rng, 12, 3, 1)
            v = member_R_pgtn(spec, x, height=8)
            if v.is_member:
                check_relation_witness(spec.params, spec.g, x, v.witness)
            elif v.is_nonmember:
                check_obstruction(spec.params, spec.g, x, v.obstruction)
        return True, ""

    checks.append(_run("verdict_soundness", soundness, 20))
    return checks


def suite_dioph(seed, per_kind=10):
    rng = random.Random(seed)
    checks = []
    for kind in ("union", "intersect", "product", "image", "section", "union_many"):
        def run(kind=kind):
            for _ in range(per_kind):
                ok, info = combinator_check(rng, kind, rng.choice((2, 3, 4, 5, 7, 9)))
                if not ok:
                    return False, str(info)
            return True, ""

        checks.append(_run(f"combinator_{kind}", run, per_kind))

    def weil():
        for _ in range(per_kind):
            ok, info = weil_check(rng, rng.choice((2, 3, 4, 5)), rng.randint(1, 2), z_samples=2)
            if not ok:
                return False, str(info)
        return True, ""

    checks.append(_run("weil_vs_direct_algebra", weil, per_kind))

    def radical():
        for i in range(per_kind):
            radical_check(rng, rng.choice((2, 3, 5)), ("nilpotent", "split", "any")[i % 3])
        return True, ""

    checks.append(_run("radical_power", radical, per_kind))
    return checks


def suite_brauer(seed, samples=300):
    from .brauer import (
        REAL,
        QuaternionAlgebra,
        construct_AB,
        hilbert_symbol,
        nrd,
        quat_mul,
        sample_T,
        symbol_product,
    )

    rng = random.Random(seed)
    checks = []

    def rand_param():
        return random_rational(rng, 50)

    checks.append(_run("reciprocity", lambda: (
        all(symbol_product(rand_param(), rand_param()) == 1 for _ in range(samples)), ""), samples))

    def bilinear():
        for _ in range(samples // 3):
            a, b1, b2 = rand_param(), rand_param(), rand_param()
            for v in (2, 3, 5, 7, REAL):
                if hilbert_symbol(a, b1 * b2, v) != hilbert_symbol(a, b1, v) * hilbert_symbol(a, b2, v):
                    return False, f"({a}, {b1}*{b2}) at {v}"
        return True, ""

    checks.append(_run("symbol_bilinearity", bilinear, samples // 3))

    def multiplicative():
        for _ in range(samples // 3):
            A = QuaternionAlgebra(rand_param(), rand_param())
            x = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)]
            y = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)]
            if nrd(A, quat_mul(A, x, y)) != nrd(A, x) * nrd(A, y):
                return False, f"{A}"
        return True, ""

    checks.append(_run("nrd_multiplicative", multiplicative, samples // 3))

    def construct():
        A, B = construct_AB(5, 2, 13)
        return A.ramification() == {2, 5} and B.ramification() == {5, 13}, ""

    checks.append(_run("construct_AB_5_2_13", construct, 1))

    def containment():
        T = sample_T(QuaternionAlgebra(2, 5), 4)
        bad = [z for z in T if z and (int_val(z.denominator, 2) or int_val(z.denominator, 5))]
        return not bad, ""

    checks.append(_run("T_A_containment", containment, 1))
    return checks


def suite_numberfield(seed, samples=200):
    from .numberfield import NumberField, lemma_kill_check

    rng = random.Random(seed)
    checks = []

    def types():
        L = NumberField([1, 0, 1])
        want = {2: [(2, 1)], 3: [(1, 2)], 5: [(1, 1), (1, 1)]}
        for p, ty in want.items():
            got = sorted(P.type for P in L.primes_above(p))
            if got != ty:
                return False, f"p = {p}: {got}"
        return True, ""

    checks.append(_run("gaussian_types", types, 3))

    def degree_sum():
        fields = ([1, 0, 1], [-2, 0, 1], [5, 0, 1], [1, 1, 1], [-2, 0, 0, 1])
        for h in fields:
            L = NumberField(h)
            for p in (2, 3, 5, 7):
                ps = L.primes_above(p)
                if sum(P.e * P.f for P in ps) != L.degree:
                    return False, f"h = {h}, p = {p}"
        return True, ""

    checks.append(_run("sum_ef_equals_degree", degree_sum, 20))

    def valuation():
        L = NumberField([5, 0, 1])
        for _ in range(samples):
            p = rng.choice((2, 3, 5, 7))
            primes = [P for P in L.primes_above(p) if not P.shares_block]
            x = L([Fraction(rng.randint(-20, 20), rng.randint(1, 9)), rng.randint(-20, 20)])
            y = L([Fraction(rng.randint(-20, 20), rng.randint(1, 9)), rng.randint(-20, 20)])
            if x.is_zero() or y.is_zero():
                continue
            for P in primes:
                if P.val(x * y) != P.val(x) + P.val(y):
                    return False, f"{P.label()}"
                if not (x + y).is_zero() and P.val(x + y) < min(P.val(x), P.val(y)):
                    return False, f"{P.label()}"
        return True, ""

    checks.append(_run("valuation_axioms", valuation, samples))

    def kill():
        for a in (0, 1, 2, Fraction(1, 2), Fraction(3, 4)):
            lemma_kill_check(2, (1, 1), a)
        return True, ""

    checks.append(_run("kill_check_p2", kill, 5))
    return checks


def run_suite(name, seed):
    fn = {
        "kochen": suite_kochen,
        "rings": suite_rings,
        "dioph": suite_dioph,
        "brauer": suite_brauer,
        "numberfield": suite_numberfield,
    }[name]
    return fn(seed)
