"""Acceptance criteria 1-11, each timed and reported as one PASS/FAIL line.

The lines are printed as the tests run (visible with -s) and again in the
terminal summary by conftest.py.
"""

import random
import time
from fractions import Fraction

import pytest

from kochenlab.arith import MPoly, rationals_by_height
from kochenlab.arith.primes import primes_up_to
from kochenlab.arith.rational import is_inf, val_p
from kochenlab.brauer import REAL, QuaternionAlgebra, construct_AB, hilbert_symbol, sample_T, symbol_product
from kochenlab.dioph.compile import compile_R_family, r_family_member
from kochenlab.errors import InvariantViolation
from kochenlab.kochen import KochenParams, gamma_case, gamma_eval, gamma_valuation_direct
from kochenlab.numberfield import NumberField, lemma_kill_check
from kochenlab.rings import exclusion_root_test, member_R_pn, pi_lower_bound, verify_certificate
from kochenlab.verify import combinator_check, radical_check, random_rational, weil_check

RESULTS = {}


def report(n, ok, elapsed, limit, detail):
    within = limit is None or elapsed < limit
    passed = bool(ok) and within
    budget = f" (limit {limit} s)" if limit is not None else ""
    line = f"{'PASS' if passed else 'FAIL'} criterion {n}: {detail}; {elapsed:.1f} s{budget}"
    RESULTS[n] = line
    print(line)
    assert ok, line
    assert within, line


def test_criterion_01_kochen_valuation_table():
    start = time.perf_counter()
    rng = random.Random(20240101)
    mismatches, total = [], 0
    for p in (2, 3, 5, 7, 11):
        for tau in ((1, 1), (1, 2), (2, 1)):
            params = KochenParams(p, *tau)
            for _ in range(10_000):
                x = random_rational(rng, 1000, p)
                total += 1
                if gamma_case(params, x).valuation != gamma_valuation_direct(params, x):
                    mismatches.append((p, tau, x))
    elapsed = time.perf_counter() - start
    report(1, not mismatches, elapsed, 30, f"{total} case predictions, {len(mismatches)} mismatches")


def test_criterion_02_exclusion_primes():
    start = time.perf_counter()
    odd = [p for p in primes_up_to(199) if p > 2]
    roots_ok = all(exclusion_root_test(p, 2) for p in odd) and exclusion_root_test(2, 17)
    rng = random.Random(2)
    bad = 0
    for _ in range(10_000):
        p = rng.choice(odd)
        x = random_rational(rng, 1000, 2, spread=4)
        v = gamma_valuation_direct(KochenParams(p), x, ell=2)
        if not (is_inf(v) or v >= 0):
            bad += 1
    elapsed = time.perf_counter() - start
    report(2, roots_ok and bad == 0, elapsed, 10,
           f"root test holds for {len(odd)} odd p <= 199 and (2, 17); 10000 samples, {bad} with v_2 < 0")


def test_criterion_03_counterexample():
    start = time.perf_counter()
    g = gamma_eval(KochenParams(3), 3)
    ok = (not exclusion_root_test(3, 5)) and g == Fraction(8, 575) and val_p(g, 5) == -2
    report(3, ok, time.perf_counter() - start, None, f"root test (3, 5) fails and gamma_3(3) = {g}, v_5 = {val_p(g, 5)}")


def test_criterion_04_lower_bound_certificate():
    start = time.perf_counter()
    family = [MPoly.var(0, 1)]
    cert = pi_lower_bound(1, family=family, samples=1000)
    out = verify_certificate(cert, family=family, samples=1000, seed=4)
    ok = (cert.ell, cert.a, cert.p) == (3, 1, 5) and out["sampled_elements"] >= 1000
    report(4, ok, time.perf_counter() - start, 10,
           f"(ell, a, p) = ({cert.ell}, {cert.a}, {cert.p}); {len(out['checks'])} invariants; "
           f"{out['sampled_elements']} sampled elements in Z_(3)")


def test_criterion_05_combinators():
    start = time.perf_counter()
    rng = random.Random(5)
    qs = (2, 3, 4, 5, 7, 9)
    failures = []
    kinds = ("union", "intersect", "product", "image", "section")
    for kind in kinds:
        for i in range(200):
            ok, info = combinator_check(rng, kind, qs[i % len(qs)])
            if not ok:
                failures.append((kind, info))
    report(5, not failures, time.perf_counter() - start, 120,
           f"{200 * len(kinds)} random families over q in {list(qs)}, {len(failures)} set mismatches")


def test_criterion_06_weil_restriction():
    start = time.perf_counter()
    rng = random.Random(6)
    failures = []
    for i in range(100):
        q = (2, 3, 4, 5, 7, 8, 9)[i % 7]
        k = 1 + i % 3
        ok, info = weil_check(rng, q, k, z_samples=3)
        if not ok:
            failures.append(info)
    report(6, not failures, time.perf_counter() - start, 120,
           f"100 systems with k <= 3, q <= 9, {len(failures)} disagreements with direct algebra arithmetic")


def test_criterion_07_radical_power():
    start = time.perf_counter()
    rng = random.Random(7)
    kinds = ["nilpotent", "split", "any"]
    failures = 0
    for i in range(50):
        if not radical_check(rng, (2, 3, 4, 5)[i % 4], kinds[i % 3]):
            failures += 1
    report(7, failures == 0, time.perf_counter() - start, None,
           f"50 instances (nilpotent, split, general), {failures} failures")


def test_criterion_08_brauer_reciprocity():
    start = time.perf_counter()
    A, B = construct_AB(5, 2, 13)
    ram_ok = A.ramification() == {5, 2} and B.ramification() == {5, 13}
    real_ok = hilbert_symbol(A.a, A.b, REAL) == 1 and hilbert_symbol(B.a, B.b, REAL) == 1
    rng = random.Random(8)
    bad = 0
    for _ in range(1000):
        a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 50))
        b = Fraction(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 50))
        if symbol_product(a, b) != 1:
            bad += 1
    report(8, ram_ok and real_ok and bad == 0, time.perf_counter() - start, 30,
           f"A = ({A.a}, {A.b}), B = ({B.a}, {B.b}) split at the real place; 1000 symbol products, {bad} != +1")


def test_criterion_09_T_containment():
    start = time.perf_counter()
    T = sample_T(QuaternionAlgebra(2, 5), 10)
    bad = [z for z in T if z != 0 and (val_p(z, 2) < 0 or val_p(z, 5) < 0)]
    report(9, not bad, time.perf_counter() - start, 60, f"{len(T)} elements of T_(2,5) at height 10, {len(bad)} outside Z_(2) and Z_(5)")


def _kill_agrees(a):
    try:
        lemma_kill_check(2, (1, 1), a)
    except InvariantViolation:
        return False
    return True


def test_criterion_10_number_field():
    start = time.perf_counter()
    L = NumberField([1, 0, 1])
    types = {p: sorted(P.type for P in L.primes_above(p)) for p in (2, 3, 5)}
    types_ok = types == {2: [(2, 1)], 3: [(1, 2)], 5: [(1, 1), (1, 1)]}
    degree_ok = all(sum(e * f for e, f in ts) == 2 for ts in types.values())
    kill = {a: _kill_agrees(a) for a in (0, 1, 2, Fraction(1, 2), Fraction(3, 4))}
    report(10, types_ok and degree_ok and all(kill.values()), time.perf_counter() - start, 30,
           f"Q(i) types {types}; kill check agreement {{{', '.join(f'{a}: {ok}' for a, ok in kill.items())}}}")


def _acceptance_rationals():
    """200 rationals of height <= 30: every one of height <= 6, then a seeded sample of the rest."""
    rats = rationals_by_height(30)
    small = [x for x in rats if max(abs(x.numerator), x.denominator) <= 6]
    rest = [x for x in rats if max(abs(x.numerator), x.denominator) > 6]
    return small + random.Random(11).sample(rest, 200 - len(small))


def _verdict(v):
    return "Member" if v.is_member else "NonMember" if v.is_nonmember else "Unknown"


def test_criterion_11_cross_module():
    start = time.perf_counter()
    D = compile_R_family(3, 1)
    xs = _acceptance_rationals()
    counts = {"Member": 0, "NonMember": 0, "Unknown": 0}
    disagreements = []
    for x in xs:
        a = r_family_member(D, x).verdict
        b = _verdict(member_R_pn(3, 1, x))
        if "Unknown" in (a, b):
            counts["Unknown"] += 1
            continue
        if a != b:
            disagreements.append((x, a, b))
        else:
            counts[a] += 1
    report(11, len(xs) == 200 and not disagreements, time.perf_counter() - start, None,
           f"200 rationals: {counts['Member']} Member and {counts['NonMember']} NonMember agree, "
           f"{counts['Unknown']} Unknown excluded, {len(disagreements)} disagreements")


@pytest.fixture(scope="module", autouse=True)
def _summary():
    yield
    for n in sorted(RESULTS):
        print(RESULTS[n])
