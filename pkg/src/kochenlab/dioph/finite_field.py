"""Finite fields F_q (q <= 64) as lookup tables, plus vectorized algebras over them.

Elements are the integers 0..q-1 read as base-p digit vectors, i.e. the
polynomial a_0 + a_1*th + ... in a root th of the field's modulus. The
prime subfield is 0..p-1. The modulus is the monic irreducible of degree k
with the smallest digit encoding.
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..arith.factor import factor_mod_p
from ..arith.primes import is_prime
from ..errors import InputError

MAX_Q = 64


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                continue
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                raise InputError(f"{q} is not a prime power")
            return p, k
    raise InputError(f"{q} is not a prime power")


def _digits(a, p, k):
    out = []
    for _ in range(k):
        out.append(a % p)
        a //= p
    return out


def _encode(digits, p):
    a = 0
    for d in reversed(digits):
        a = a * p + d
    return a


class GF:
    def __init__(self, q):
        if not 2 <= q <= MAX_Q:
            raise InputError(f"field size must be in [2, {MAX_Q}], got {q}")
        p, k = _prime_power(q)
        self.q, self.p, self.k = q, p, k
        self.modulus = self._find_modulus()
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = _digits(a, p, k)
            for b in range(q):
                db = _digits(b, p, k)
                add[a, b] = _encode([(x + y) % p for x, y in zip(da, db)], p)
                mul[a, b] = _encode(self._mulmod(da, db), p)
        self.add, self.mul = add, mul
        self.neg = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
        self.sub = add[:, self.neg]
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.where(mul[a] == 1)[0][0])
        self.inv = inv

    def _find_modulus(self):
        p, k = self.p, self.k
        if k == 1:
            return [0, 1]
        for code in range(p**k):
            f = _digits(code, p, k) + [1]
            facs = factor_mod_p(f, p)
            if len(facs) == 1 and facs[0][1] == 1:
                return f
        raise AssertionError("no irreducible polynomial found")

    def _mulmod(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i]
            if c:
                for j in range(k + 1):
                    prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
        return prod[:k]

    def __repr__(self):
        return f"GF({self.q})"

    def elements(self):
        return range(self.q)

    def from_rat(self, c):
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise InputError(f"coefficient {c} is not defined in characteristic {self.p}")
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def embeds(self, c):
        return Fraction(c).denominator % self.p != 0

    # scalar helpers on python ints
    def a(self, x, y):
        return int(self.add[x, y])

    def m(self, x, y):
        return int(self.mul[x, y])

    def s(self, x, y):
        return int(self.sub[x, y])

    def power(self, x, e):
        out = 1
        for _ in range(e):
            out = self.m(out, x)
        return out


@lru_cache(maxsize=None)
def field(q):
    return GF(q)


def eval_poly(F, f, columns, size):
    """Evaluate the MPoly f at arrays of field elements (one array per variable).

    ``columns[v]`` is an int64 array of length ``size`` or None when the
    variable is unused. Returns an int64 array.
    """
    total = np.zeros(size, dtype=np.int64)
    powers = {}
    for mono, c in f.terms.items():
        term = np.full(size, F.from_rat(c), dtype=np.int64)
        for v, e in mono:
            key = (v, e)
            pw = powers.get(key)
            if pw is None:
                pw = columns[v]
                for _ in range(e - 1):
                    pw = F.mul[pw, columns[v]]
                powers[key] = pw
            term = F.mul[term, pw]
        total = F.add[total, term]
    return total


# -- polynomials over F_q (python lists of ints, low to high) --------------


def ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def pmul_q(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = F.a(out[i + j], F.m(x, y))
    return ptrim(out)


def pdivmod_q(F, a, b):
    b = ptrim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    a = ptrim(a)
    inv = int(F.inv[b[-1]])
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    r = list(a)
    for i in range(len(r) - 1, db - 1, -1):
        c = F.m(r[i], inv)
        if c == 0:
            continue
        q[i - db] = c
        for j in range(db + 1):
            r[i - db + j] = F.s(r[i - db + j], F.m(c, b[j]))
    return ptrim(q), ptrim(r[:db])


def monic_polys(F, d):
    """All monic polynomials of degree d over F."""
    for code in range(F.q**d):
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % F.q)
            c //= F.q
        yield coeffs + [1]


def is_irreducible_q(F, f):
    f = ptrim(f)
    d = len(f) - 1
    if d < 1:
        return False
    for e in range(1, d // 2 + 1):
        for g in monic_polys(F, e):
            if not pdivmod_q(F, f, g)[1]:
                return False
    return True


def irreducible_factors_q(F, f):
    """Monic irreducible factors of f over F with multiplicities, by trial division."""
    f = ptrim(f)
    if not f:
        raise InputError("cannot factor the zero polynomial")
    lead_inv = int(F.inv[f[-1]])
    f = [F.m(c, lead_inv) for c in f]
    out = []
    d = 1
    while len(f) > 1:
        if 2 * d > len(f) - 1:
            # no factor of degree <= deg/2 is left
            out.append((f, 1))
            break
        for g in monic_polys(F, d):
            mult = 0
            while True:
                quo, rem = pdivmod_q(F, f, g)
                if rem:
                    break
                f, mult = quo, mult + 1
            if mult:
                out.append((g, mult))
        d += 1
    return out


# -- the algebra F_q[T]/(g) on arrays --------------------------------------


class AlgArray:
    """A batch of elements of B = F_q[T]/(g), g monic of degree k; data has shape (N, k)."""

    __slots__ = ("F", "g", "data")

    def __init__(self, F, g, data):
        self.F = F
        self.g = g
        self.data = data

    @classmethod
    def constant(cls, F, g, values, size):
        k = len(g) - 1
        data = np.zeros((size, k), dtype=np.int64)
        data[:, 0] = values
        return cls(F, g, data)

    def _coerce(self, other):
        if isinstance(other, AlgArray):
            return other
        c = self.F.from_rat(other)
        return AlgArray.constant(self.F, self.g, c, self.data.shape[0])

    def __add__(self, other):
        other = self._coerce(other)
        return AlgArray(self.F, self.g, self.F.add[self.data, other.data])

    __radd__ = __add__

    def __neg__(self):
        return AlgArray(self.F, self.g, self.F.neg[self.data])

    def __sub__(self, other):
        other = self._coerce(other)
        return AlgArray(self.F, self.g, self.F.sub[self.data, other.data])

    def __mul__(self, other):
        F = self.F
        if not isinstance(other, AlgArray):
            c = F.from_rat(other)
            return AlgArray(F, self.g, F.mul[self.data, c])
        a, b = self.data, other.data
        n, k = a.shape
        prod = np.zeros((n, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[:, i + j] = F.add[prod[:, i + j], F.mul[a[:, i], b[:, j]]]
        g = self.g
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[:, i]
            for j in range(k):
                prod[:, i - k + j] = F.sub[prod[:, i - k + j], F.mul[c, g[j]]]
        return AlgArray(F, g, prod[:, :k].copy())

    __rmul__ = __mul__

    def __pow__(self, e):
        out = AlgArray.constant(self.F, self.g, 1, self.data.shape[0])
        for _ in range(e):
            out = out * self
        return out

    def is_zero_mask(self):
        return np.all(self.data == 0, axis=1)
