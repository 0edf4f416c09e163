"""Kochen-generated rings over Q and their membership problem.

For g in O_p[X_1..X_n] and a uniformizer t,

    R_{g,t}   = { a / (1 + t*b) : a, b in g(gamma(Q), ..., gamma(Q)) },
    R_{g,t,n} = { x : x^m + r_{m-1} x^{m-1} + ... + r_0 = 0, 1 <= m <= n, r_i in R_{g,t} },

and R_{p,n} is the union of R_{g,t,n} over t = +-p and g of degree and
height at most n. Membership is a bounded search: Member carries a
re-checkable witness, NonMember carries a valuation obstruction, and
Unknown records the exhausted bounds.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from itertools import combinations_with_replacement, product

from .arith.ladic import LAdic, PrecisionLoss
from .arith.mpoly import MPoly
from .arith.primes import dirichlet_prime, is_prime, next_prime, prime_factors
from .arith.rational import (
    fmt_rat,
    height_rat,
    int_val,
    positive_rationals_stern_brocot,
    rationals_by_height,
)
from .budget import enumeration_budget
from .errors import InputError, InvariantViolation, NotFoundError, ResourceError
from .kochen import POLE, KochenParams, gamma_eval

DEFAULT_HEIGHT = 50
SEARCH_BUDGET = 2 * 10**5  # Kochen-argument tuples per value table


# -- the finite families P_{p,n} ------------------------------------------


def coefficient_set(n, p=None):
    """Rationals of height <= n whose denominator is prime to p (all of them if p is None)."""
    out = [Fraction(0)]
    for r in positive_rationals_stern_brocot(n):
        if p is not None and r.denominator % p == 0:
            continue
        out.extend((r, -r))
    return out


def monomials(nvars, max_degree):
    """Exponent vectors of total degree <= max_degree, by degree then reverse-lex."""
    out = []
    for deg in range(max_degree + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            exps = [0] * nvars
            for v in combo:
                exps[v] += 1
            out.append(tuple(exps))
    return out


def count_P(n, p=None):
    return len(coefficient_set(n, p)) ** len(monomials(n, n))


def enumerate_P(params_or_p, n, budget=None):
    """All g in n variables with total degree <= n and coefficient heights <= n, p-integral."""
    if n < 1:
        raise InputError("n must be at least 1")
    p = params_or_p.p if isinstance(params_or_p, KochenParams) else params_or_p
    budget = enumeration_budget() if budget is None else budget
    coeffs = coefficient_set(n, p)
    monos = monomials(n, n)
    count = len(coeffs) ** len(monos)
    if count > budget:
        raise ResourceError(f"P_{{p,{n}}} has {count} polynomials, above the budget {budget}")
    out = []
    for choice in product(coeffs, repeat=len(monos)):
        out.append(MPoly.from_dense(n, [(m, c) for m, c in zip(monos, choice) if c]))
    return out


def star(g):
    """g*(X) = -g(-X)."""
    return MPoly(g.arity, {m: (c if sum(e for _, e in m) % 2 else -c) for m, c in g.terms.items()})


# -- verdicts -------------------------------------------------------------


@dataclass
class RWitness:
    """x = a/(1 + t*b) with a = g(gamma(u)), b = g(gamma(w))."""

    u: tuple
    w: tuple
    a: Fraction
    b: Fraction

    def to_json(self):
        return {
            "u": [fmt_rat(c) for c in self.u],
            "w": [fmt_rat(c) for c in self.w],
            "a": fmt_rat(self.a),
            "b": fmt_rat(self.b),
        }


@dataclass
class RelationWitness:
    """x^m + sum r_i x^i = 0 with every r_i in R_{g,t}."""

    coeffs: list  # r_0 .. r_{m-1}
    witnesses: list  # RWitness per coefficient

    @property
    def degree(self):
        return len(self.coeffs)

    def to_json(self):
        return {
            "m": self.degree,
            "coeffs": [fmt_rat(c) for c in self.coeffs],
            "witnesses": [w.to_json() for w in self.witnesses],
        }


@dataclass
class Verdict:
    verdict: str  # Member, NonMember or Unknown
    witness: object = None
    obstruction: dict = None
    bounds: dict = None
    g: MPoly = None
    t: int = None

    @property
    def is_member(self):
        return self.verdict == "Member"

    @property
    def is_nonmember(self):
        return self.verdict == "NonMember"

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.verdict == "Member":
            out["witness"] = self.witness.to_json()
            if self.g is not None:
                out["g"] = self.g.to_json()
                out["t"] = str(self.t)
        elif self.verdict == "NonMember":
            out["obstruction"] = self.obstruction
        else:
            out["bounds"] = self.bounds
        return out


# -- Kochen value tables --------------------------------------------------


@lru_cache(maxsize=64)
def gamma_table(params, height):
    """[(u, gamma(u))] for u of height <= height in Stern-Brocot order, poles skipped."""
    out = []
    for u in rationals_by_height(height):
        value = gamma_eval(params, u)
        if value is not POLE:
            out.append((u, value))
    return tuple(out)


def _per_variable_count(table_size, arity, budget):
    if arity == 0:
        return 0
    k = table_size
    while k > 1 and k**arity > budget:
        k -= 1
    return k


@lru_cache(maxsize=256)
def value_table(params, g, height, budget):
    """First witness tuple for every value of g(gamma(u_1), ..., gamma(u_n)) in the search box."""
    table = gamma_table(params, height)
    n = g.arity
    if n == 0 or g.is_constant():
        return {g.constant_term(): tuple([Fraction(0)] * n)}, len(table)
    k = _per_variable_count(len(table), n, budget)
    args = table[:k]
    out = {}
    for combo in product(args, repeat=n):
        value = g.eval([gv for _, gv in combo])
        if value not in out:
            out[value] = tuple(u for u, _ in combo)
    return out, k


@lru_cache(maxsize=256)
def _keyed_values(params, g, height, budget):
    # integer (numerator, denominator) keys avoid Fraction hashing in the search loop
    values, _ = value_table(params, g, height, budget)
    return {(v.numerator, v.denominator): (v, w) for v, w in values.items()}


def search_R(params, g, x, height=DEFAULT_HEIGHT, budget=None):
    """Find u, w with x * (1 + t*g(gamma(w))) = g(gamma(u)); None if the box is exhausted."""
    budget = min(SEARCH_BUDGET, enumeration_budget()) if budget is None else budget
    x = Fraction(x)
    xn, xd = x.numerator, x.denominator
    t = params.t
    keyed = _keyed_values(params, g, height, budget)
    for (bn, bd), (b, w) in keyed.items():
        # a = x * (1 + t*b) = xn * (bd + t*bn) / (xd * bd)
        dn = bd + t * bn
        if dn == 0:
            continue
        num, den = xn * dn, xd * bd
        c = gcd(num, den)
        num, den = num // c, den // c
        if den < 0:
            num, den = -num, -den
        hit = keyed.get((num, den))
        if hit is not None:
            a, u = hit
            wit = RWitness(u, w, a, b)
            check_R_witness(params, g, x, wit)
            return wit
    return None


def check_R_witness(params, g, x, wit):
    a = g.eval([gamma_eval(params, c) for c in wit.u])
    b = g.eval([gamma_eval(params, c) for c in wit.w])
    if a != wit.a or b != wit.b or 1 + params.t * b == 0 or a / (1 + params.t * b) != Fraction(x):
        raise InvariantViolation("ring witness does not re-verify")
    return True


def check_relation_witness(params, g, x, rel):
    x = Fraction(x)
    for r, wit in zip(rel.coeffs, rel.witnesses):
        check_R_witness(params, g, r, wit)
    m = rel.degree
    total = x**m + sum(r * x**i for i, r in enumerate(rel.coeffs))
    if total != 0:
        raise InvariantViolation("monic relation does not vanish at x")
    return True


# -- obstructions ---------------------------------------------------------


def exclusion_root_test(p, ell, tau=(1, 1)):
    """True iff X^Q - X + 1 and X^Q - X - 1 (Q = p^f) have no zero in F_ell."""
    if not (is_prime(p) and is_prime(ell)):
        raise InputError("p and ell must be primes")
    if p == ell:
        raise InputError("ell must differ from p")
    Q = p ** tau[1]
    for c in range(ell):
        u = (pow(c, Q, ell) - c) % ell
        if u in (1, ell - 1):
            return False
    return True


def _gamma_residues(params, ell):
    """{0} together with gamma(c) mod ell for c in F_ell (needs the root test to pass)."""
    Q, e = params.Q, params.e
    t_inv = pow(params.t % ell, -1, ell)
    out = {0}
    for c in range(ell):
        u = (pow(c, Q, ell) - c) % ell
        den = (u * u - 1) % ell
        out.add(t_inv * pow(u * pow(den, -1, ell), e, ell) % ell)
    return sorted(out)


def _residue(c, ell):
    return c.numerator * pow(c.denominator, -1, ell) % ell


def gamma_ell_adic(params, x, ell, prec=8, max_prec=1024):
    """gamma(x) as an ell-adic number, or None when gamma(x) = 0.

    Works for huge Q = p^f because only units mod ell**prec are powered.
    Precision doubles whenever cancellation exhausts it.
    """
    x = Fraction(x)
    Q = params.Q
    if x == 0 or x == 1 or (x == -1 and Q % 2 == 1):
        return None
    while prec <= max_prec:
        try:
            X = LAdic.from_rat(ell, x, prec)
            u = X**Q - X
            w = u * u - 1
            t = LAdic.from_rat(ell, params.t, prec)
            return (u / w) ** params.e / t
        except PrecisionLoss:
            prec *= 2
    raise ResourceError(f"ell-adic precision {max_prec} exhausted at x = {x}")


def gamma_val_ell(params, x, ell):
    """v_ell(gamma(x)) without forming the rational value (None means +inf)."""
    g = gamma_ell_adic(params, x, ell)
    return None if g is None else g.val


def exclusion_certificate(params, g, ell, budget=None):
    """True when R_{g,t}(Q) lies in Z_(ell), certified through residues mod ell.

    gamma(Q) reduces into S = {0} u gamma(F_ell) when the root test passes; if
    g is ell-integral and 1 + t*g(s) is nonzero mod ell on S^n, every
    a/(1 + t*b) is ell-integral.
    """
    if ell == params.p or not exclusion_root_test(params.p, ell, params.tau):
        return False
    if any(c.denominator % ell == 0 for c in g.terms.values()):
        return False
    budget = enumeration_budget() if budget is None else budget
    S = _gamma_residues(params, ell)
    n = g.arity
    if len(S) ** n > budget:
        return False
    coeffs = [(m, _residue(c, ell)) for m, c in g.terms.items()]
    t = params.t
    for point in product(S, repeat=n):
        val = 0
        for m, c in coeffs:
            term = c
            for v, e in m:
                term = term * pow(point[v], e, ell)
            val += term
        if (1 + t * val) % ell == 0:
            return False
    return True


def _valuation_obstruction(p, x):
    x = Fraction(x)
    if x == 0:
        return None
    v = int_val(x.numerator, p) - int_val(x.denominator, p)
    if v < 0:
        return {"kind": "valuation", "p": p, "val": v}
    return None


def find_obstruction(params, g, x):
    """Obstruction for x in the integral closure of R_{g,t}, or None."""
    x = Fraction(x)
    obs = _valuation_obstruction(params.p, x)
    if obs is not None:
        return obs
    for ell in prime_factors(x.denominator):
        if ell != params.p and exclusion_certificate(params, g, ell):
            return {"kind": "exclusion", "ell": ell, "val": -int_val(x.denominator, ell)}
    return None


def check_obstruction(params, g, x, obs):
    x = Fraction(x)
    if obs["kind"] == "valuation":
        ok = x != 0 and int_val(x.numerator, params.p) - int_val(x.denominator, params.p) < 0
    else:
        ell = obs["ell"]
        ok = (
            exclusion_root_test(params.p, ell, params.tau)
            and exclusion_certificate(params, g, ell)
            and x.denominator % ell == 0
        )
    if not ok:
        raise InvariantViolation(f"obstruction {obs} does not re-verify")
    return True


# -- membership -----------------------------------------------------------


@dataclass(frozen=True)
class RingSpec:
    params: KochenParams
    g: MPoly
    n: int = 1

    def __post_init__(self):
        if any(c.denominator % self.params.p == 0 for c in self.g.terms.values()):
            raise InputError("g must have p-integral coefficients")
        if self.n < 1:
            raise InputError("n must be at least 1")


def member_R_pgt(spec, x, height=DEFAULT_HEIGHT, budget=None):
    x = Fraction(x)
    obs = find_obstruction(spec.params, spec.g, x)
    if obs is not None:
        check_obstruction(spec.params, spec.g, x, obs)
        return Verdict("NonMember", obstruction=obs)
    wit = search_R(spec.params, spec.g, x, height, budget)
    if wit is not None:
        return Verdict("Member", witness=wit)
    return Verdict("Unknown", bounds={"height": height})


@lru_cache(maxsize=64)
def _relation_pool(params, g, pool_height, size):
    """Small elements of R_{g,t}: a/(1 + t b) over the first few values, with witnesses."""
    values, _ = value_table(params, g, pool_height, 10**4)
    items = list(values.items())[:size]
    pool = {}
    for a, u in items:
        for b, w in items:
            den = 1 + params.t * b
            if den == 0:
                continue
            r = a / den
            if r not in pool:
                pool[r] = RWitness(u, w, a, b)
    return tuple(sorted(pool.items(), key=lambda kv: (height_rat(kv[0]), kv[0])))[: size * size]


def search_relation(params, g, x, n, height=DEFAULT_HEIGHT, budget=None, pool_size=12):
    """Monic relation of degree <= n over R_{g,t}; degree 1 first."""
    x = Fraction(x)
    wit = search_R(params, g, -x, height, budget)
    if wit is not None:
        return RelationWitness([-x], [wit])
    pool = _relation_pool(params, g, 3, pool_size)
    for m in range(2, n + 1):
        for choice in product(pool, repeat=m - 1):
            r = [c for c, _ in choice]
            r0 = -(x**m + sum(ri * x ** (i + 1) for i, ri in enumerate(r)))
            w0 = search_R(params, g, r0, height, budget)
            if w0 is not None:
                rel = RelationWitness([r0] + r, [w0] + [w for _, w in choice])
                check_relation_witness(params, g, x, rel)
                return rel
    return None


def member_R_pgtn(spec, x, height=DEFAULT_HEIGHT, budget=None):
    x = Fraction(x)
    obs = find_obstruction(spec.params, spec.g, x)
    if obs is not None:
        check_obstruction(spec.params, spec.g, x, obs)
        return Verdict("NonMember", obstruction=obs)
    rel = search_relation(spec.params, spec.g, x, spec.n, height, budget)
    if rel is not None:
        check_relation_witness(spec.params, spec.g, x, rel)
        return Verdict("Member", witness=rel)
    return Verdict("Unknown", bounds={"height": height, "degree": spec.n})


def member_R_pn(p, n, x, tau=(1, 1), height=DEFAULT_HEIGHT, budget=None):
    """Membership in the union of R_{g,t,n} over t = +-p and g in P_{p,n}."""
    x = Fraction(x)
    base = KochenParams(p, *tau)
    family = enumerate_P(base, n, budget)
    obstructions = []
    for sign in (1, -1):
        params = base.with_sign(sign)
        for g in family:
            verdict = member_R_pgtn(RingSpec(params, g, n), x, height, budget)
            if verdict.is_member:
                verdict.g, verdict.t = g, params.t
                return verdict
            obstructions.append(verdict.obstruction)
    if all(o is not None for o in obstructions):
        kinds = {(o["kind"], o.get("ell")) for o in obstructions}
        if len(kinds) == 1:
            kind, ell = kinds.pop()
            summary = {"kind": kind, "p": p} if kind == "valuation" else {"kind": kind, "ell": ell}
        else:
            summary = {"kind": "mixed", "ells": sorted({o.get("ell") or p for o in obstructions})}
        return Verdict("NonMember", obstruction=summary)
    return Verdict("Unknown", bounds={"height": height, "degree": n, "polynomials": len(family)})


# -- exclusion primes and the lower-bound certificate ---------------------


def deep_exclusion_test(p, ell, samples=500, max_height=1000, seed=0):
    """(ell - 1) | (p - 1); when true, spot-check v_ell(gamma_p(x)) >= 1 on samples."""
    if not (is_prime(p) and is_prime(ell)):
        raise InputError("p and ell must be primes")
    if p == ell:
        raise InputError("ell must differ from p")
    holds = (p - 1) % (ell - 1) == 0
    if holds:
        params = KochenParams(p)
        rng = random.Random(seed)
        for _ in range(samples):
            x = Fraction(rng.randint(-max_height, max_height), rng.randint(1, max_height))
            v = gamma_val_ell(params, x, ell)
            if v is not None and v < 1:
                raise InvariantViolation(f"v_{ell}(gamma_{p}({x})) = {v} < 1")
    return holds


def least_exclusion_prime(p, tau=(1, 1), bound=10**4):
    ell = 2
    while ell <= bound:
        if ell != p and exclusion_root_test(p, ell, tau):
            return ell
        ell = next_prime(ell)
    raise NotFoundError(f"no exclusion prime for p = {p} up to {bound}")


def proper_subring_witness(p, samples=1000, seed=0):
    """ell = 2 for odd p and ell = 17 for p = 2, with 1/ell in Z_(p) outside Z_(ell)."""
    if not is_prime(p):
        raise InputError(f"{p} is not a prime")
    ell = 2 if p != 2 else 17
    if not exclusion_root_test(p, ell):
        raise InvariantViolation(f"root test fails for p = {p}, ell = {ell}")
    params = KochenParams(p)
    rng = random.Random(seed)
    for _ in range(samples):
        x = Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))
        v = gamma_val_ell(params, x, ell)
        if v is not None and v < 0:
            raise InvariantViolation(f"gamma_{p}({x}) is not {ell}-integral")
    witness = Fraction(1, ell)
    return {"p": p, "ell": ell, "witness": fmt_rat(witness), "samples": samples}


@dataclass
class LowerBoundCertificate:
    n: int
    ell: int
    p: int
    a: int
    family_size: int
    report: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "n": self.n,
            "ell": self.ell,
            "p": self.p,
            "a": self.a,
            "family_size": self.family_size,
            "report": self.report,
        }


def _constant_terms(family):
    return {g.constant_term() for g in family}


def pi_lower_bound(n, family=None, samples=1000, seed=0, max_steps=10**5):
    """Primes ell < p and an integer a certifying R_{p,g,+-p,n}(Q) in Z_(ell) for all g.

    With ``family=None`` the family is every polynomial in n variables of
    degree and height at most n; it is closed under g -> g*, which covers
    the uniformizer -p. An explicit family is used as given.
    """
    if n < 1:
        raise InputError("n must be at least 1")
    if family is None:
        coeffs = coefficient_set(n)
        size = len(coeffs) ** len(monomials(n, n))
        constants = set(coeffs)  # constant terms range over the whole coefficient set
        den_lcm = lcm(*range(1, n + 1))
        explicit = None
    else:
        explicit = list(family)
        size = len(explicit)
        constants = _constant_terms(explicit)
        den_lcm = lcm(1, *(c.denominator for g in explicit for c in g.terms.values()))
    ell = next_prime(size + 1)
    while den_lcm % ell == 0:
        ell = next_prime(ell)
    bad = {_residue(c, ell) for c in constants}
    a = 1
    while a % ell == 0 or a % ell in bad:
        a += 1
    r = (-pow(a, -1, ell)) % ell
    # CRT: p = 1 mod (ell - 1) and p = r mod ell
    m = ell * (ell - 1)
    # ell = 1 mod (ell - 1), so c = 1 + (ell - 1)*k with k = 1 - r mod ell
    c = 1 + (ell - 1) * ((1 - r) % ell)
    p = dirichlet_prime(c, m, bound=c + max_steps * m, start=ell + 1)
    if p is None:
        raise NotFoundError(f"no prime p = {c} mod {m} within {max_steps} steps")
    cert = LowerBoundCertificate(n, ell, p, a, size)
    cert.report = verify_certificate(cert, explicit, samples, seed)
    return cert


def verify_certificate(cert, family=None, samples=1000, seed=0):
    """Re-check every invariant of a lower-bound certificate and sample ring elements."""
    ell, p, a, n = cert.ell, cert.p, cert.a, cert.n
    checks = {
        "ell_prime": is_prime(ell),
        "p_prime": is_prime(p),
        "ell_gt_size_plus_1": ell > cert.family_size + 1,
        "p_gt_ell": p > ell,
        "p_1_mod_ell_minus_1": (p - 1) % (ell - 1) == 0,
        "p_is_minus_a_inv": (p * a + 1) % ell == 0,
        "a_nonzero": a % ell != 0,
        "deep_exclusion": deep_exclusion_test(p, ell, samples=min(samples, 200), seed=seed),
    }
    if family is None:
        constants = coefficient_set(n)
    else:
        constants = list(_constant_terms(family))
    checks["a_avoids_constant_terms"] = all(
        c.denominator % ell != 0 and _residue(c, ell) != a % ell for c in constants
    )
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        raise InvariantViolation(f"certificate invariants failed: {bad}")
    sampled = _sample_ring_elements(cert, family, samples, seed)
    return {"checks": sorted(checks), "sampled_elements": sampled}


def _sample_family_member(n, rng):
    coeffs = coefficient_set(n)
    monos = monomials(n, n)
    return MPoly.from_dense(n, [(m, rng.choice(coeffs)) for m in monos])


def _gamma_residue(params, x, ell):
    g = gamma_ell_adic(params, x, ell)
    if g is None:
        return 0
    if g.val < 0:
        raise InvariantViolation(f"gamma_{params.p}({x}) is not {ell}-integral")
    return g.residue()


def _eval_mod(g, point, ell):
    total = 0
    for m, c in g.terms.items():
        term = _residue(c, ell)
        for v, e in m:
            term = term * pow(point[v], e, ell)
        total += term
    return total % ell


def _sample_ring_elements(cert, family, samples, seed):
    """Sample a/(1 + p*b) and check it mod ell.

    Every gamma value must be 0 mod ell, so g(gamma) = g(0) mod ell, the
    denominator 1 + p*b is an ell-unit and the element is ell-integral.
    Values are reduced ell-adically, so large p costs nothing extra.
    """
    rng = random.Random(seed)
    ell, p = cert.ell, cert.p
    params = KochenParams(p)
    checked = 0
    for _ in range(samples):
        g = rng.choice(family) if family is not None else _sample_family_member(cert.n, rng)
        if rng.random() < 0.5:
            g = star(g)
        args = [Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(2 * g.arity)]
        res = [_gamma_residue(params, x, ell) for x in args]
        if any(res):
            raise InvariantViolation("gamma value is not in ell Z_(ell)")
        g0 = _residue(g.constant_term(), ell)
        a_res = _eval_mod(g, res[: g.arity], ell)
        b_res = _eval_mod(g, res[g.arity:], ell)
        if a_res != g0 or b_res != g0:
            raise InvariantViolation("g(gamma) - g(0) is not in ell Z_(ell)")
        if (1 + p * b_res) % ell == 0:
            raise InvariantViolation("1 + p*g(gamma) is not an ell-unit")
        checked += 1
    return checked
