"""Monogenic number fields Q[T]/(h): primes above p, valuations, approximation.

Decomposition of p starts from the factorization h = prod g_i^e_i mod p.
When Dedekind's criterion says Z[theta] is p-maximal, the primes are read
off directly. Otherwise each factor with a linear residue polynomial is
refined by its Newton polygon and residual polynomials (first-order Ore
step); anything beyond that is refused rather than guessed.

Valuations use the p-adic block H_i of h lifted by Hensel from g_i^e_i: for
an element y in Z[theta] the resultant Res(H_i, y) is the local norm of y,
whose p-valuation is f * v_P(y) when the block carries a single prime.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .arith.factor import factor_mod_p, factor_over_Q
from .arith.mpoly import parse_poly
from .arith.primes import is_prime
from .arith.qalgebra import QAlgebra, QElem
from .arith.rational import INF, int_val, is_inf
from .arith.upoly import (
    hensel_lift,
    padd,
    pdivmod,
    pext_gcd,
    pmod,
    pmul,
    ppow,
    pshift,
    psub,
    trim,
)
from .errors import InputError, InvariantViolation, PreconditionError, ResourceError, UnsupportedError

MAX_PRECISION = 4096


class NumberField:
    """Q(theta) with theta a root of the monic integer polynomial h."""

    def __init__(self, h, name="T", check_irreducible=True):
        h = trim([Fraction(c) for c in h])
        if len(h) < 2:
            raise InputError("defining polynomial must be nonconstant")
        if h[-1] != 1 or any(c.denominator != 1 for c in h):
            raise InputError("defining polynomial must be monic with integer coefficients")
        if check_irreducible:
            _, facs = factor_over_Q(h)
            if len(facs) != 1 or facs[0][1] != 1:
                raise InputError("defining polynomial is reducible over Q")
        self.h = [int(c) for c in h]
        self.degree = len(h) - 1
        self.name = name
        self.alg = QAlgebra(h)
        self._primes = {}
        self._blocks = {}

    @classmethod
    def parse(cls, text, name="T"):
        return cls(parse_poly(text, [name]).to_univariate(), name=name)

    def __call__(self, x):
        if isinstance(x, QElem):
            if x.alg != self.alg:
                raise InputError("element of a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return self.alg([x])
        if isinstance(x, str):
            return self.alg(parse_poly(x, [self.name]).to_univariate())
        return self.alg(list(x))

    def gen(self):
        return self.alg.gen()

    def format(self):
        from .arith.mpoly import MPoly

        return MPoly.univariate(self.h).format([self.name])

    def primes_above(self, p):
        if not is_prime(p):
            raise InputError(f"{p} is not a prime")
        if p not in self._primes:
            self._primes[p] = _decompose(self, p)
        return self._primes[p]

    def lifted_blocks(self, p, k):
        """Hensel lifts of the coprime blocks g_i^e_i of h mod p, to precision p^k."""
        key = (p, k)
        if key not in self._blocks:
            blocks = _residue_blocks(self.h, p)
            polys = [b for b, _ in blocks]
            self._blocks[key] = hensel_lift(self.h, polys, p, k) if len(polys) > 1 else [trim(self.h, p**k)]
        return self._blocks[key]


def _residue_blocks(h, p):
    """[(g^e mod p, (g, e))] for the factorization of h mod p, in factor order."""
    out = []
    for g, e in factor_mod_p(h, p):
        out.append((ppow(g, e, p), (g, e)))
    return out


@dataclass
class NumberFieldPrime:
    field: NumberField = field(repr=False)
    p: int
    block: int  # index of the residue factor g among the factors of h mod p
    g: tuple  # residue factor of h mod p
    e: int
    f: int
    dedekind: bool  # Z[theta] is p-maximal at this block
    shares_block: bool  # another prime comes from the same residue factor

    @property
    def type(self):
        return (self.e, self.f)

    def label(self):
        from .arith.mpoly import MPoly

        poly = MPoly.univariate(list(self.g)).format([self.field.name])
        tag = f"({self.p}, {poly})"
        return tag if not self.shares_block else f"{tag}#{self.e}.{self.f}"

    # valuations

    def val(self, x):
        if self.shares_block:
            raise UnsupportedError(
                f"valuations at {self.label()} need a finer decomposition than one Newton step"
            )
        x = self.field(x)
        if x.is_zero():
            return INF
        if x.is_rational():
            r = x.rational()
            return self.e * (int_val(r.numerator, self.p) - int_val(r.denominator, self.p))
        den = 1
        for c in x.coeffs:
            den = lcm(den, c.denominator)
        y = [int(c * den) for c in x.coeffs]
        v_den = self.e * int_val(den, self.p)
        k = 8
        while k <= MAX_PRECISION:
            block = self.field.lifted_blocks(self.p, k)[self.block]
            res = _resultant_monic(block, y)
            if res != 0:
                v = int_val(res, self.p)
                if v < k:
                    if v % self.f:
                        raise InvariantViolation("local norm valuation not divisible by f")
                    return v // self.f - v_den
            k *= 2
        raise ResourceError(f"valuation did not stabilise below precision p^{MAX_PRECISION}")

    # residues

    def _require_residue_field(self):
        if not self.dedekind:
            raise UnsupportedError("residue maps are only implemented for p-maximal blocks")

    def residue(self, x):
        """Residue of a P-integral element as a tuple over F_p[T]/(g)."""
        self._require_residue_field()
        x = self.field(x)
        v = self.val(x)
        if not is_inf(v) and v < 0:
            raise PreconditionError("element is not integral at the prime")
        p = self.p
        den = 1
        for c in x.coeffs:
            den = lcm(den, c.denominator)
        y = [int(c * den) for c in x.coeffs]
        k = int_val(den, p)
        g = list(self.g)
        if k == 0:
            red = pmod(trim([c * pow(den, -1, p) for c in y], p), g, p)
            return tuple(red)
        # multiply by an idempotent killing the other primes above p
        idem = idempotents(self.field, p, k + 1)[self.block]
        prod = pmod(pmul(y, idem), self.field.h)
        coeffs = [Fraction(c, den) for c in prod]
        if any(c.denominator % p == 0 for c in coeffs):
            raise InvariantViolation("idempotent failed to clear the denominator")
        red = [c.numerator * pow(c.denominator, -1, p) for c in coeffs]
        return tuple(pmod(trim(red, p), g, p))

    def residues_equal(self, x, y):
        return self.residue(x) == self.residue(y)

    def residue_degree(self, x):
        """Least d with r^(p^d) = r for the residue r of x."""
        r = list(self.residue(x))
        g = list(self.g)
        cur = r
        for d in range(1, self.f + 1):
            cur = _powmod_fp(cur, self.p, g, self.p)
            if cur == r:
                return d
        raise InvariantViolation("residue not fixed by Frobenius^f")


def _powmod_fp(a, e, mod, p):
    result = [1]
    base = pmod(a, mod, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = pmod(pmul(base, base, p), mod, p)
    return result


def _bareiss_det(m):
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _resultant_monic(H, y):
    """Res(H, y) for monic integer H as the determinant of multiplication by y."""
    d = len(H) - 1
    cols = []
    cur = pmod(y, H)
    for _ in range(d):
        col = list(cur) + [0] * (d - len(cur))
        cols.append([int(c) for c in col])
        cur = pmod(pmul(cur, [0, 1]), H)
    matrix = [[cols[j][i] for j in range(d)] for i in range(d)]
    return _bareiss_det(matrix)


def _dedekind_regular(h, p, g, e):
    """Dedekind's criterion at one factor: True when g does not divide F = (h - prod)/p."""
    if e == 1:
        return True
    prod = [1]
    for gi, ei in factor_mod_p(h, p):
        prod = pmul(prod, ppow(gi, ei))
    diff = psub(h, prod)
    F = trim([c // p for c in diff], p)
    if not F:
        return False
    return bool(pdivmod(F, g, p)[1])


def _lower_hull(points):
    """Lower convex hull of points sorted by x."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _newton_step(h, p, c, mult):
    """Prime types from the Newton polygon of h(x + c) over its first ``mult`` coefficients.

    Returns a list of (e, f) or None when some residual polynomial is not squarefree.
    """
    a = pshift(h, c)
    points = []
    for j in range(mult + 1):
        coef = a[j] if j < len(a) else 0
        if coef != 0:
            points.append((j, int_val(coef, p)))
    hull = _lower_hull(points)
    types = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        length, height = x1 - x0, y0 - y1
        if height <= 0:
            continue
        d = gcd(length, height)
        e_seg, h_seg = length // d, height // d
        residual = []
        for i in range(d + 1):
            j = x0 + i * e_seg
            target = y0 - i * h_seg
            coef = a[j] if j < len(a) else 0
            if coef != 0 and int_val(coef, p) == target:
                residual.append(coef // p**target % p)
            else:
                residual.append(0)
        facs = factor_mod_p(residual, p)
        if any(m > 1 for _, m in facs):
            return None
        for phi, _ in facs:
            types.append((e_seg, len(phi) - 1))
    return types


def _decompose(L, p):
    h = L.h
    out = []
    for idx, (g, e) in enumerate(factor_mod_p(h, p)):
        f = len(g) - 1
        if _dedekind_regular(h, p, g, e):
            out.append(NumberFieldPrime(L, p, idx, tuple(g), e, f, True, False))
            continue
        if f != 1:
            raise UnsupportedError(
                f"p = {p} divides the index at a residue factor of degree {f}; "
                "this needs higher-order Newton polygons"
            )
        c = (-g[0]) % p
        types = _newton_step(h, p, c, e)
        if types is None:
            raise UnsupportedError(f"p = {p} divides the index and the residual polynomial is not squarefree")
        shared = len(types) > 1
        for e_i, f_i in types:
            out.append(NumberFieldPrime(L, p, idx, tuple(g), e_i, f_i, False, shared))
    total = sum(P.e * P.f for P in out)
    if total != L.degree:
        raise InvariantViolation(f"sum of e*f over primes above {p} is {total}, not {L.degree}")
    for P in out:
        if not P.shares_block and P.val(p) != P.e:
            raise InvariantViolation("v_P(p) differs from the ramification index")
    return out


def primes_above(L, p):
    return L.primes_above(p)


def val_at_prime(L, P, x):
    if P.field is not L:
        raise InputError("prime belongs to a different field")
    return P.val(x)


def type_at_most(P, tau):
    e, f = tau
    return P.e <= e and f % P.f == 0


def s_p_tau(L, p, tau):
    return [P for P in L.primes_above(p) if type_at_most(P, tau)]


def s_p_tau_basic(L, p, tau, a):
    out = []
    for P in s_p_tau(L, p, tau):
        v = P.val(a)
        if is_inf(v) or v >= 0:
            out.append(P)
    return out


def holomorphy_member(L, p, tau, x):
    for P in s_p_tau(L, p, tau):
        v = P.val(x)
        if not is_inf(v) and v < 0:
            return False
    return True


@lru_cache(maxsize=None)
def _idempotents_cached(h, p, k):
    L_h = list(h)
    blocks = _residue_blocks(L_h, p)
    polys = [b for b, _ in blocks]
    mod = p**k
    lifted = hensel_lift(L_h, polys, p, k) if len(polys) > 1 else [trim(L_h, mod)]
    out = []
    for i, H in enumerate(lifted):
        M = [1]
        for j, other in enumerate(lifted):
            if j != i:
                M = pmul(M, other, mod)
        if len(lifted) == 1:
            out.append((1,))
            continue
        # inverse of M modulo (H, p): lifted to p^k by Newton iteration
        gcd_, s, _ = pext_gcd(pmod(M, H, p), trim(H, p), p)
        if gcd_ != [1]:
            raise InvariantViolation("blocks are not coprime mod p")
        u = s
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            m2 = p**prec
            Mu = pmod(pmul(M, u, m2), H, m2)
            u = pmod(pmul(u, psub([2], Mu, m2), m2), H, m2)
        E = pmod(pmul(M, u, mod), list(h), mod)
        out.append(tuple(E))
    return tuple(out)


def idempotents(L, p, k):
    """Integer polynomials E_i with E_i = 1 mod (p^k, H_i) and E_i = 0 mod (p^k, H_j), j != i."""
    return [list(E) for E in _idempotents_cached(tuple(L.h), p, k)]


def weak_approx(L, constraints):
    """x with v_P(x - target_P) >= bound_P for every (P, target, bound), all P above one p."""
    if not constraints:
        raise InputError("no constraints given")
    primes = [P for P, _, _ in constraints]
    ps = {P.p for P in primes}
    if len(ps) != 1:
        raise UnsupportedError("weak approximation is implemented for primes above a single p")
    keys = [(P.p, P.block, P.e, P.f) for P in primes]
    if len(set(keys)) != len(keys):
        raise InputError("two constraints at the same prime")
    if any(P.shares_block for P in primes):
        raise UnsupportedError("approximation needs primes with separate residue blocks")
    p = ps.pop()
    targets = [L(t) for _, t, _ in constraints]
    if len(constraints) == 1:
        x = targets[0]
        _verify_approx(constraints, x)
        return x
    vmin = 0
    for P in primes:
        for t in targets:
            v = P.val(t)
            if not is_inf(v):
                vmin = min(vmin, v)
    need = max(b for _, _, b in constraints) - vmin
    emin = min(P.e for P in primes)
    k = max(1, -(-need // emin) + 1)
    while k <= MAX_PRECISION:
        E = idempotents(L, p, k)
        x = L(0)
        for P, t in zip(primes, targets):
            x = x + t * L(E[P.block])
        if _verify_approx(constraints, x, raise_on_fail=False):
            return x
        k *= 2
    raise ResourceError("weak approximation did not converge")


def _verify_approx(constraints, x, raise_on_fail=True):
    for P, t, bound in constraints:
        v = P.val(x - P.field(t))
        if not (is_inf(v) or v >= bound):
            if raise_on_fail:
                raise InvariantViolation(f"approximation misses {P.label()}: v = {v} < {bound}")
            return False
    return True


def g_a_poly(p, tau, a, t=None):
    """Coefficients of t*a^e*((T^Q - T)^2 - 1) - (T^Q - T) with Q = p^f."""
    e, f = tau
    t = p if t is None else t
    Q = p**f
    u = [0] * (Q + 1)
    u[Q] += 1
    u[1] -= 1
    c = Fraction(t) * Fraction(a) ** e
    return padd([c * x for x in psub(pmul(u, u), [1])], [-x for x in u])


def integral_model(phi):
    """Monic integer polynomial whose root is s*theta for a root theta of monic rational phi."""
    n = len(phi) - 1
    s = 1
    while True:
        model = [Fraction(phi[i]) * s ** (n - i) for i in range(n + 1)]
        if all(c.denominator == 1 for c in model):
            return [int(c) for c in model], s
        s += 1


def lemma_kill_check(p, tau, a):
    """Compare S_p^tau(Q; a) with the primes of type <= tau in the factor fields of B_a.

    Returns a report dict; raises InvariantViolation on disagreement.
    """
    a = Fraction(a)
    if not is_prime(p):
        raise InputError(f"{p} is not a prime")
    g = g_a_poly(p, tau, a)
    if len(g) - 1 > 12:
        raise ResourceError(f"g_a has degree {len(g) - 1}, above the factorization cap 12")
    left = a == 0 or int_val(a.numerator, p) - int_val(a.denominator, p) >= 0
    _, facs = factor_over_Q(g)
    fields = []
    right = False
    for phi, mult in facs:
        model, scale = integral_model(phi)
        E = NumberField(model, check_irreducible=False)
        types = [P.type for P in E.primes_above(p)]
        good = [ty for ty in types if ty[0] <= tau[0] and tau[1] % ty[1] == 0]
        right = right or bool(good)
        fields.append({"factor": phi, "multiplicity": mult, "scale": scale, "types": types, "admissible": good})
    if left != right:
        raise InvariantViolation(f"left side nonempty={left} but right side nonempty={right}")
    return {"g_a": g, "left_nonempty": left, "right_nonempty": right, "fields": fields}
