"""Quaternion algebras over Q: Hilbert symbols, ramification, Brauer-class ledgers.

A quaternion algebra (a, b) has basis 1, i, j, k with i^2 = a, j^2 = b and
k = ij = -ji. Places are rational primes (ints) and the real place REAL.
Classes of higher prime index ell are kept as invariant ledgers only.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import isqrt

from .arith.mpoly import MPoly
from .arith.primes import is_prime, prime_factors, primes_up_to
from .arith.rational import fmt_rat, height_rat, int_val, positive_rationals_stern_brocot
from .dioph.family import (
    base,
    check_witness,
    product as fam_product,
    rational_image,
)
from .errors import InputError, InvariantViolation, NotFoundError, UnsupportedError
from .kochen import gamma_eval

REAL = "real"


class ReciprocityError(InputError):
    """Local invariants that do not sum to zero."""


def _place_key(v):
    return (1, 0) if v == REAL else (0, v)


def sort_places(places):
    return sorted(places, key=_place_key)


def fmt_place(v):
    return REAL if v == REAL else str(v)


def parse_place(text):
    text = str(text).strip().lower()
    if text in (REAL, "inf", "infinity", "oo"):
        return REAL
    try:
        v = int(text)
    except ValueError as exc:
        raise InputError(f"bad place {text!r}") from exc
    if not is_prime(v):
        raise InputError(f"{v} is not a prime")
    return v


# -- Hilbert symbols ---------------------------------------------------------


def _square_class_int(x):
    """A nonzero integer in the square class of the rational x."""
    x = Fraction(x)
    if x == 0:
        raise InputError("Hilbert symbols need nonzero arguments")
    return x.numerator * x.denominator


def _legendre(u, p):
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def hilbert_symbol(a, b, v):
    """(a, b)_v in {+1, -1}: +1 iff the quaternion algebra (a, b) splits over Q_v."""
    a, b = _square_class_int(a), _square_class_int(b)
    if v == REAL:
        return -1 if a < 0 and b < 0 else 1
    if not is_prime(v):
        raise InputError(f"{v} is not a place")
    p = v
    alpha, beta = int_val(a, p), int_val(b, p)
    u, w = a // p**alpha, b // p**beta
    if p == 2:
        eps = lambda z: ((z - 1) // 2) % 2
        omg = lambda z: ((z * z - 1) // 8) % 2
        e = (eps(u) * eps(w) + alpha * omg(w) + beta * omg(u)) % 2
        return -1 if e else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= _legendre(u, p)
    if alpha % 2:
        sign *= _legendre(w, p)
    return sign


def relevant_places(a, b):
    primes = {2}
    for x in (Fraction(a), Fraction(b)):
        for n in (x.numerator, x.denominator):
            primes.update(prime_factors(abs(n)))
    return sort_places(primes) + [REAL]


def ramification_set(a, b):
    """Places where (a, b) does not split; re-asserts that there is an even number of them."""
    ram = [v for v in relevant_places(a, b) if hilbert_symbol(a, b, v) == -1]
    if len(ram) % 2:
        raise InvariantViolation(f"odd ramification set {ram} for ({a}, {b})")
    return set(ram)


def symbol_product(a, b):
    """Product of (a, b)_v over all places; reciprocity says +1."""
    out = 1
    for v in relevant_places(a, b):
        out *= hilbert_symbol(a, b, v)
    return out


# -- quaternion arithmetic ---------------------------------------------------


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise InputError("quaternion parameters must be nonzero")

    def ramification(self):
        return ramification_set(self.a, self.b)

    def to_json(self):
        return {
            "a": fmt_rat(self.a),
            "b": fmt_rat(self.b),
            "ramification": [fmt_place(v) for v in sort_places(self.ramification())],
        }


def quat_mul(A, x, y):
    a, b = A.a, A.b
    x0, x1, x2, x3 = (Fraction(c) for c in x)
    y0, y1, y2, y3 = (Fraction(c) for c in y)
    return (
        x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
        x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
        x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
        x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
    )


def nrd(A, x):
    x0, x1, x2, x3 = (Fraction(c) for c in x)
    return x0 * x0 - A.a * x1 * x1 - A.b * x2 * x2 + A.a * A.b * x3 * x3


def trd(A, x):
    return 2 * Fraction(x[0])


def nrd_poly(A, offset=0, arity=4):
    X = [MPoly.var(offset + i, arity) for i in range(4)]
    return X[0] ** 2 - X[1] ** 2 * A.a - X[2] ** 2 * A.b + X[3] ** 2 * (A.a * A.b)


# -- searches for algebras with prescribed ramification -----------------------


def _candidates(primes, max_factors=2):
    out = set()
    for k in range(max_factors + 1):
        for combo in combinations(primes, k):
            n = 1
            for q in combo:
                n *= q
            out.update((n, -n))
    return sorted(out, key=lambda n: (abs(n), n < 0))


def find_quaternion(target, extra_primes=(), aux_bound=50, max_factors=2):
    """Smallest-height (a, b) with ramification set exactly ``target``."""
    target = set(target)
    if len(target) % 2:
        raise InputError("a ramification set has even size")
    finite = sorted(v for v in target if v != REAL)
    primes = sorted(set(finite) | set(extra_primes) | set(primes_up_to(aux_bound)))
    cands = _candidates(primes, max_factors)
    pairs = sorted(
        ((a, b) for i, a in enumerate(cands) for b in cands[i:]),
        key=lambda ab: (max(map(abs, ab)), min(map(abs, ab)), (ab[0] < 0) + (ab[1] < 0), abs(ab[0])),
    )
    for a, b in pairs:
        if ramification_set(a, b) == target:
            return QuaternionAlgebra(a, b)
    raise NotFoundError(f"no algebra with ramification {sort_places(target)} in the search space")


def construct_AB(p, q1, q2, aux_bound=50):
    """Algebras A, B with ramification {p, q1} and {p, q2}; both split at the real place."""
    for v in (p, q1, q2):
        if not is_prime(v):
            raise InputError(f"{v} is not a prime")
    if len({p, q1, q2}) != 3:
        raise InputError("p, q1, q2 must be distinct primes")
    A = find_quaternion({p, q1}, (p, q1, q2), aux_bound)
    B = find_quaternion({p, q2}, (p, q1, q2), aux_bound)
    for alg, want in ((A, {p, q1}), (B, {p, q2})):
        ram = alg.ramification()
        if ram != want or REAL in ram:
            raise InvariantViolation(f"construct_AB produced ramification {ram}")
    return A, B


@dataclass
class BrauerClass:
    ell: int
    invariants: dict
    realization: QuaternionAlgebra = None

    def to_json(self):
        out = {
            "ell": self.ell,
            "invariants": {fmt_place(v): fmt_rat(self.invariants[v]) for v in sort_places(self.invariants)},
        }
        if self.realization is not None:
            out["realization"] = self.realization.to_json()
        return out


def brauer_class_prescribe(ell, assignments, realize=True):
    """Validate a finitely supported invariant assignment and, for ell = 2, realize it."""
    if not is_prime(ell):
        raise InputError(f"{ell} is not a prime")
    inv = {}
    for v, val in assignments.items():
        if v != REAL and not is_prime(v):
            raise InputError(f"{v} is not a place")
        val = Fraction(val) % 1
        if (val * ell).denominator != 1:
            raise InputError(f"invariant {val} at {v} has denominator not dividing {ell}")
        if v == REAL and val not in (0, Fraction(1, 2)):
            raise InputError("the real invariant must be 0 or 1/2")
        if val:
            inv[v] = val
    if sum(inv.values(), Fraction(0)) % 1 != 0:
        raise ReciprocityError(f"invariants sum to {fmt_rat(sum(inv.values()) % 1)}, not 0")
    cls = BrauerClass(ell, inv)
    if ell == 2 and realize:
        cls.realization = find_quaternion(set(inv))
    return cls


# -- S_A and T_A -------------------------------------------------------------


def _rational_sqrt(x):
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def norm_one_elements(A, H):
    """Norm-one quaternions with all coordinates of height <= H, up to the signs of x1, x2, x3."""
    rats = [Fraction(0)] + list(positive_rationals_stern_brocot(H))
    out = []
    for x1, x2, x3 in product(rats, repeat=3):
        rhs = 1 + A.a * x1 * x1 + A.b * x2 * x2 - A.a * A.b * x3 * x3
        x0 = _rational_sqrt(rhs)
        if x0 is not None and height_rat(x0) <= H:
            out.append((x0, x1, x2, x3))
    return out


def sample_S(A, H):
    """Traces of the norm-one quaternions of height <= H, with one witness each."""
    traces = {}
    for x in norm_one_elements(A, H):
        for s in (1, -1):
            y = (s * x[0], x[1], x[2], x[3])
            if nrd(A, y) != 1:
                raise InvariantViolation("norm-one enumeration is wrong")
            traces.setdefault(trd(A, y), y)
    return traces


def sample_T(A, H, check=True):
    """Differences of traces of norm-one quaternions of height <= H, each checked integral at ramified primes."""
    if H < 1:
        raise InputError("height bound must be at least 1")
    S = sample_S(A, H)
    out = {s - r for s in S for r in S}
    if check:
        ram = A.ramification()
        if REAL not in ram:
            finite = [q for q in ram if q != REAL]
            for z in out:
                for q in finite:
                    if z != 0 and int_val(z.numerator, q) < int_val(z.denominator, q):
                        raise InvariantViolation(f"{z} in T_A is not {q}-integral")
    return out


def sample_T_witnesses(A, H):
    S = sample_S(A, H)
    out = {}
    for s, x in S.items():
        for r, y in S.items():
            out.setdefault(s - r, (x, y))
    return out


# -- diophantine families ----------------------------------------------------


def compile_S_family(A):
    norm_one = base(4, 0, [nrd_poly(A) - 1])
    X0 = MPoly.var(0, 4)
    return rational_image(norm_one, [(X0 * 2, MPoly.const(1, 4))])


def compile_T_family(A):
    S = compile_S_family(A)
    X = [MPoly.var(i, 2) for i in range(2)]
    return rational_image(fam_product(S, S), [(X[0] - X[1], MPoly.const(1, 2))])


def s_witness(x):
    return (list(x), [])


def t_witness(x, y):
    return ([trd(None, x), trd(None, y)], (s_witness(x), s_witness(y)))


def t_family_member(D, A, z, H=6):
    """Bounded Q-search for z in the T family; the witness is checked against the polynomials."""
    wits = sample_T_witnesses(A, H)
    z = Fraction(z)
    if z not in wits:
        return None
    x, y = wits[z]
    return check_witness(D, [z], t_witness(x, y))


def compile_D_family(params, A, B):
    """Image of T_A x T_B x T_A x T_B x gamma under (X1 + X2) / (1 + t X5^(e+1) (X3 + X4))."""
    if params.tau != (1, 1):
        raise UnsupportedError(
            f"type {params.tau} needs a prime index ell > e*f = {params.e * params.f}; "
            "quaternion algebras (ell = 2) cover only e*f = 1"
        )
    from .dioph.compile import gamma_family

    TA, TB = compile_T_family(A), compile_T_family(B)
    box = fam_product(fam_product(fam_product(fam_product(TA, TB), TA), TB), gamma_family(params))
    X = [MPoly.var(i, 5) for i in range(5)]
    num = X[0] + X[1]
    den = X[4] ** (params.e + 1) * (X[2] + X[3]) * params.t + 1
    fam = rational_image(box, [(num, den)])
    from .dioph.family import DiophFamily

    meta = {"kind": "D", "params": params, "A": A, "B": B}
    return DiophFamily(fam.n, fam.m, fam.polys, origin=fam.origin, meta=meta)


@dataclass
class DVerdict:
    verdict: str
    details: dict = field(default_factory=dict)

    def to_json(self):
        out = {"verdict": self.verdict}
        out.update(self.details)
        return out


def d_family_member(D, x, H=4):
    """Membership of a rational x in the D family over Q.

    Members: x = s1 + s2 with s1 in T_A, s2 in T_B from bounded samples (the
    other T entries are 0 and the gamma argument is 0), verified on the
    polynomials. Non-members: v_p(x) < 0, since T_A, T_B lie in Z_(p) when
    p ramifies in both, gamma(Q) lies in Z_(p) and the denominator is a p-unit.
    """
    params, A, B = D.meta["params"], D.meta["A"], D.meta["B"]
    p = params.p
    x = Fraction(x)
    if x != 0 and int_val(x.numerator, p) < int_val(x.denominator, p):
        if p not in A.ramification() or p not in B.ramification():
            raise InvariantViolation(f"{p} must ramify in both algebras")
        return DVerdict("NonMember", {"obstruction": {"kind": "valuation", "p": p}})
    TA, TB = sample_T_witnesses(A, H), sample_T_witnesses(B, H)
    zero_a, zero_b = TA[Fraction(0)], TB[Fraction(0)]
    for s1, wa in sorted(TA.items(), key=lambda kv: height_rat(kv[0])):
        s2 = x - s1
        if s2 in TB:
            wb = TB[s2]
            tw = [t_witness(*wa), t_witness(*wb), t_witness(*zero_a), t_witness(*zero_b)]
            g0 = gamma_eval(params, 0)
            xd = [s1, s2, Fraction(0), Fraction(0), g0]
            sub = ((((tw[0], tw[1]), tw[2]), tw[3]), ([Fraction(0)], []))
            check_witness(D, [x], (xd, sub))
            return DVerdict("Member", {"s1": fmt_rat(s1), "s2": fmt_rat(s2)})
    return DVerdict("Unknown", {"bounds": {"height": H}})
