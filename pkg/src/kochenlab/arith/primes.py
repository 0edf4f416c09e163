"""Primality and prime search in arithmetic progressions."""

from math import gcd

from ..errors import InputError

_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n):
    """Miller-Rabin; the fixed base set is deterministic below 3.3e24."""
    if not isinstance(n, int) or n < 2:
        return False
    for p in _SMALL:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n):
    """Smallest prime strictly greater than n."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def primes_up_to(bound):
    return [k for k in range(2, bound + 1) if is_prime(k)]


def prime_factors(n):
    """Distinct prime factors of a nonzero integer (trial division, desk scale)."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def dirichlet_prime(a, m, extra=None, bound=10**6, start=2):
    """Smallest prime ``start <= p <= bound`` with ``p = a (mod m)`` and ``extra(p)``.

    Returns None when the progression is exhausted up to ``bound``.
    """
    if m < 1:
        raise InputError("modulus must be positive")
    if gcd(a, m) != 1:
        raise InputError(f"gcd({a}, {m}) != 1: the progression holds at most one prime")
    r = a % m
    c = r + m * max(0, -(-(start - r) // m))
    while c <= bound:
        if is_prime(c) and (extra is None or extra(c)):
            if c % m != r:
                raise AssertionError("progression bookkeeping broken")
            return c
        c += m
    return None
