"""Univariate factorization over F_p and over Q.

Over F_p: squarefree decomposition, distinct-degree splitting, then
Cantor-Zassenhaus equal-degree splitting with a seeded RNG so results are
reproducible. Over Q: Yun's squarefree decomposition, a monic integer
transform, factoring modulo a good prime, Hensel lifting, and recombination
of modular factors under a Mignotte coefficient bound.
"""

import random
from fractions import Fraction
from itertools import combinations
from math import isqrt

from ..errors import InputError, UnsupportedError
from .primes import is_prime, next_prime
from .upoly import (
    hensel_lift,
    pderiv,
    pdivmod,
    pgcd,
    pmonic,
    pmul,
    ppowmod,
    psub,
    symmetric,
    to_int_primitive,
    trim,
)

MAX_Q_DEGREE = 12


def _sort_key(f):
    return (len(f), list(reversed(f)))


def _pth_root(f, p):
    """g with g(x)**p = f(x) when f' = 0 over F_p (Frobenius is the identity on F_p)."""
    return [f[i] for i in range(0, len(f), p)]


def squarefree_mod_p(f, p):
    """List of (squarefree monic factor, multiplicity) with product f/lc."""
    f = pmonic(trim(f, p), p)
    out = {}

    def rec(f, mult):
        if len(f) <= 1:
            return
        df = pderiv(f, p)
        if not df:
            rec(_pth_root(f, p), mult * p)
            return
        c = pgcd(f, df, p)
        w = pdivmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = pgcd(w, c, p)
            fac = pdivmod(w, y, p)[0]
            if len(fac) > 1:
                out[tuple(fac)] = out.get(tuple(fac), 0) + i * mult
            w = y
            c = pdivmod(c, y, p)[0]
            i += 1
        if len(c) > 1:
            rec(_pth_root(c, p), mult * p)

    rec(f, 1)
    return [(list(k), v) for k, v in out.items()]


def _distinct_degree(f, p):
    out = []
    h = [0, 1]
    d = 0
    rest = f
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = ppowmod(h, p, rest, p)
        g = pgcd(rest, psub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            rest = pdivmod(rest, g, p)[0]
            h = pdivmod(h, rest, p)[1] if len(rest) > 1 else h
    if len(rest) > 1:
        out.append((rest, len(rest) - 1))
    return out


def _equal_degree(f, d, p, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = trim([rng.randrange(p) for _ in range(n)], p)
        if len(a) <= 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1))
            t = a
            acc = a
            for _ in range(d - 1):
                t = pdivmod(pmul(t, t, p), f, p)[1]
                acc = trim([x ^ y for x, y in _zip_pad(acc, t)], p)
            cand = acc
        else:
            cand = psub(ppowmod(a, (p**d - 1) // 2, f, p), [1], p)
        g = pgcd(f, cand, p)
        if 1 < len(g) < len(f):
            h = pdivmod(f, g, p)[0]
            return _equal_degree(g, d, p, rng) + _equal_degree(h, d, p, rng)


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


def factor_squarefree_mod_p(f, p, seed=0):
    """Monic irreducible factors of a squarefree monic polynomial over F_p."""
    rng = random.Random(seed)
    out = []
    for g, d in _distinct_degree(f, p):
        out.extend(_equal_degree(g, d, p, rng))
    return sorted(out, key=_sort_key)


def factor_mod_p(f, p, seed=0):
    """Factor over F_p into monic irreducibles with multiplicities.

    ``f`` is a low-to-high coefficient list of integers or p-integral rationals.
    Output is sorted by degree then coefficients.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not a prime")
    f = trim([_to_fp(c, p) for c in f], p)
    if not f:
        raise InputError("cannot factor the zero polynomial")
    out = []
    for part, mult in squarefree_mod_p(f, p):
        for g in factor_squarefree_mod_p(part, p, seed):
            out.append((g, mult))
    out.sort(key=lambda gm: (_sort_key(gm[0]), gm[1]))
    check = [f[-1]]
    for g, mult in out:
        for _ in range(mult):
            check = pmul(check, g, p)
    if check != f:
        raise AssertionError("factor_mod_p failed to reproduce its input")
    return out


def _to_fp(c, p):
    c = Fraction(c)
    if c.denominator % p == 0:
        raise InputError(f"coefficient {c} is not {p}-integral")
    return c.numerator * pow(c.denominator, -1, p) % p


def yun_squarefree(f):
    """Yun's algorithm over Q: list of (monic squarefree factor, multiplicity)."""
    f = pmonic([Fraction(c) for c in trim(f)])
    out = []
    if len(f) <= 1:
        return out
    df = pderiv(f)
    a = pgcd(f, df)
    b = pdivmod(f, a)[0]
    c = pdivmod(df, a)[0]
    d = psub(c, pderiv(b))
    i = 1
    while len(b) > 1:
        a = pgcd(b, d)
        b = pdivmod(b, a)[0]
        c = pdivmod(d, a)[0]
        d = psub(c, pderiv(b))
        if len(a) > 1:
            out.append((a, i))
        i += 1
    return out


def _factor_squarefree_int(g):
    """Irreducible factors over Z of a primitive squarefree integer polynomial."""
    n = len(g) - 1
    if n <= 1:
        return [g]
    lc = g[-1]
    # monic transform G(y) = lc^(n-1) g(y/lc)
    big = [g[i] * lc ** (n - 1 - i) for i in range(n)] + [1]
    p = 2
    while True:
        if lc % p and len(pgcd(big, pderiv(big, p), p)) == 1:
            break
        p = next_prime(p)
    mods = factor_squarefree_mod_p(trim(big, p), p)
    bound = 2**n * (isqrt(sum(c * c for c in big)) + 1)
    k = 1
    while p**k <= 2 * bound:
        k += 1
    mod = p**k
    lifted = hensel_lift(big, mods, p, k) if len(mods) > 1 else [trim(big, mod)]
    found = []
    remaining = list(range(len(lifted)))
    rest = big
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for combo in combinations(remaining, size):
            cand = [1]
            for i in combo:
                cand = pmul(cand, lifted[i], mod)
            cand = [symmetric(c, mod) for c in cand]
            q, r = pdivmod(rest, cand)
            if not r and all(Fraction(c).denominator == 1 for c in q):
                found.append(cand)
                rest = [int(c) for c in q]
                remaining = [i for i in remaining if i not in combo]
                hit = True
                break
        if not hit:
            size += 1
    found.append(rest)
    # undo the transform: F(lc x) has content dividing a power of lc
    return [to_int_primitive([c * lc**i for i, c in enumerate(F)]) for F in found]


def factor_over_Q(f):
    """Factor a nonzero rational polynomial.

    Returns ``(constant, [(monic irreducible factor, multiplicity), ...])`` with
    factors as Fraction coefficient lists sorted by degree then coefficients.
    """
    f = [Fraction(c) for c in trim(f)]
    if not f:
        raise InputError("cannot factor the zero polynomial")
    if len(f) - 1 > MAX_Q_DEGREE:
        raise UnsupportedError(f"degree {len(f) - 1} exceeds the cap {MAX_Q_DEGREE}")
    const = f[-1]
    out = []
    for part, mult in yun_squarefree(f):
        for g in _factor_squarefree_int(to_int_primitive(part)):
            out.append((pmonic([Fraction(c) for c in g]), mult))
    out.sort(key=lambda gm: (_sort_key(gm[0]), gm[1]))
    check = [const]
    for g, mult in out:
        for _ in range(mult):
            check = pmul(check, g)
    if check != f:
        raise AssertionError("factor_over_Q failed to reproduce its input")
    return const, out


def is_irreducible_over_Q(f):
    _, facs = factor_over_Q(f)
    return len(facs) == 1 and facs[0][1] == 1

