"""Dense univariate polynomials as low-to-high coefficient lists.

The zero polynomial is ``[]``. Every function takes an optional modulus
``m``: with ``m`` given, coefficients are integers reduced into ``[0, m)``;
without it they are rationals (or integers, where the caller guarantees
that divisions stay exact).
"""

from fractions import Fraction

from ..errors import InputError


def trim(a, m=None):
    a = [c % m for c in a] if m else list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a):
    return len(a) - 1  # -1 for the zero polynomial


def padd(a, b, m=None):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return trim(out, m)


def pneg(a, m=None):
    return trim([-c for c in a], m)


def psub(a, b, m=None):
    return padd(a, pneg(b), m)


def pscale(a, c, m=None):
    return trim([x * c for x in a], m)


def pmul(a, b, m=None):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out, m)


def _inv(c, m):
    if m:
        return pow(c, -1, m)
    return 1 / Fraction(c)


def pdivmod(a, b, m=None):
    """Quotient and remainder; the leading coefficient of b must be invertible."""
    b = trim(b, m)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a, m)
    inv = _inv(b[-1], m)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    db = len(b) - 1
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv
        if m:
            c %= m
        if c == 0:
            continue
        q[i - db] = c
        for j in range(db + 1):
            r[i - db + j] -= c * b[j]
        if m:
            for j in range(db + 1):
                r[i - db + j] %= m
    return trim(q, m), trim(r[:db], m)


def pmod(a, b, m=None):
    return pdivmod(a, b, m)[1]


def pmonic(a, m=None):
    if not a:
        return []
    return pscale(a, _inv(a[-1], m), m)


def pgcd(a, b, m=None):
    """Monic gcd over Q or over F_m (m prime)."""
    a, b = trim(a, m), trim(b, m)
    while b:
        a, b = b, pmod(a, b, m)
    return pmonic(a, m)


def pext_gcd(a, b, m=None):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = trim(a, m), trim(b, m)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pdivmod(r0, r1, m)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, m), m)
        t0, t1 = t1, psub(t0, pmul(q, t1, m), m)
    if not r0:
        return [], [], []
    inv = _inv(r0[-1], m)
    return pscale(r0, inv, m), pscale(s0, inv, m), pscale(t0, inv, m)


def pderiv(a, m=None):
    return trim([i * a[i] for i in range(1, len(a))], m)


def peval(a, x, m=None):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
        if m:
            acc %= m
    return acc


def ppowmod(base, e, mod, m=None):
    result = [1]
    base = pmod(base, mod, m)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, m), mod, m)
        e >>= 1
        if e:
            base = pmod(pmul(base, base, m), mod, m)
    return result


def ppow(a, e, m=None):
    result = [1]
    while e:
        if e & 1:
            result = pmul(result, a, m)
        e >>= 1
        if e:
            a = pmul(a, a, m)
    return result


def pshift(a, c, m=None):
    """a(x + c) by Horner's scheme."""
    out = []
    for coef in reversed(a):
        out = padd(pmul(out, [c, 1]), [coef], m)
    return trim(out, m)


def pcompose(a, b, m=None):
    """a(b(x))."""
    out = []
    for coef in reversed(a):
        out = padd(pmul(out, b, m), [coef], m)
    return out


def symmetric(c, m):
    """Representative of c mod m in (-m/2, m/2]."""
    c %= m
    return c - m if c > m // 2 else c


def to_int_primitive(a):
    """Scale a rational polynomial to a primitive integer one with positive lead."""
    from math import gcd, lcm

    a = [Fraction(c) for c in trim(a)]
    if not a:
        return []
    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def hensel_lift(f, factors, p, k):
    """Lift pairwise coprime monic factors of f mod p to factors mod p**k.

    ``f`` is a monic integer polynomial with ``f = prod(factors) mod p``.
    Factors are peeled off one at a time by linear lifting.
    """
    if k < 1:
        raise InputError("precision must be at least 1")
    if trim(f, p)[-1:] != [1] or len(f) != len(trim(f, p)):
        raise InputError("hensel_lift expects a monic integer polynomial")
    mod = p**k
    lifted = []
    rest = trim(f, mod)
    for i, g in enumerate(factors[:-1]):
        h = [1]
        for other in factors[i + 1:]:
            h = pmul(h, other, p)
        g_k, h_k = _lift_pair(rest, g, h, p, k)
        lifted.append(g_k)
        rest = h_k
    lifted.append(rest)
    check = [1]
    for g in lifted:
        check = pmul(check, g, mod)
    if check != trim(f, mod):
        raise AssertionError("Hensel lifting failed to reproduce f")
    return lifted


def _lift_pair(f, g, h, p, k):
    gcd_, s, t = pext_gcd(g, h, p)
    if gcd_ != [1]:
        raise InputError("Hensel factors must be coprime mod p")
    g, h = trim(g, p), trim(h, p)
    pj = p
    for _ in range(1, k):
        diff = psub(f, pmul(g, h), None)
        e = trim([c // pj for c in diff], p)
        if any(c % pj for c in diff):
            raise AssertionError("lifting invariant broken")
        quo, a = pdivmod(pmul(t, e, p), g, p)
        b = padd(pmul(s, e, p), pmul(quo, h, p), p)
        g = padd(g, pscale(a, pj))
        h = padd(h, pscale(b, pj))
        pj *= p
    return trim(g, pj), trim(h, pj)
