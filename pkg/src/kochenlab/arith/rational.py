"""Rationals, extended integers, valuations and residues.

Rationals are plain :class:`fractions.Fraction` values; they are always in
lowest terms with a positive denominator, which is exactly the invariant
needed here.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from ..errors import InputError

Rat = Fraction


class _Infinity:
    """The value +inf of an extended integer; absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "+inf"

    def __hash__(self):
        return hash("+inf")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        if isinstance(other, int) or other is self:
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        raise ArithmeticError("+inf - +inf is undefined")

    def __rsub__(self, other):
        raise ArithmeticError("finite - (+inf) is not an extended integer")

    def __mul__(self, other):
        if isinstance(other, int) and other > 0:
            return self
        if other is self:
            return self
        raise ArithmeticError(f"+inf * {other!r} is undefined")

    __rmul__ = __mul__

    def __neg__(self):
        raise ArithmeticError("-inf is not an extended integer")


INF = _Infinity()


def is_inf(v):
    return v is INF


def fmt_ext(v):
    """JSON-friendly extended integer: ints stay ints, +inf becomes a string."""
    return "+inf" if v is INF else int(v)


def parse_rat(s):
    """Parse ``"a/b"``, ``"a"`` or an int/Fraction into a Fraction."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        text = s.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {s!r}") from exc
    raise InputError(f"not a rational: {s!r}")


def fmt_rat(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _require_prime(p):
    from .primes import is_prime

    if not isinstance(p, int) or not is_prime(p):
        raise InputError(f"{p!r} is not a prime")


def int_val(n, p):
    """Exponent of p in the nonzero integer n."""
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val_p(x, p):
    """p-adic valuation of a rational; INF for zero."""
    _require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return int_val(x.numerator, p) - int_val(x.denominator, p)


def _val_unchecked(x, p):
    if x == 0:
        return INF
    return int_val(x.numerator, p) - int_val(x.denominator, p)


@total_ordering
@dataclass(frozen=True)
class FpElem:
    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.modulus != self.modulus:
                raise InputError("mixing residues of different primes")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.modulus)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElem(pow(self.value, k, self.modulus), self.modulus)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpElem(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FpElem(o, self.modulus).inverse()

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.modulus == 0
        return NotImplemented

    def __lt__(self, other):
        return self.value < self._coerce(other)

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value


def residue_p(x, p):
    """Image of a p-integral rational in F_p."""
    _require_prime(p)
    x = Fraction(x)
    if x.denominator % p == 0:
        raise InputError(f"{fmt_rat(x)} is not {p}-integral")
    return FpElem(x.numerator * pow(x.denominator, -1, p), p)


def height_rat(x):
    x = Fraction(x)
    return max(abs(x.numerator), x.denominator)


def positive_rationals_stern_brocot(max_height):
    """Positive rationals of height <= max_height, level by level in the Stern-Brocot tree.

    Mediants grow in both numerator and denominator, so pruning a node also
    prunes its subtree.
    """
    if max_height < 1:
        return
    queue = deque([(0, 1, 1, 0)])  # left (a/b), right (c/d) bounds
    while queue:
        a, b, c, d = queue.popleft()
        num, den = a + c, b + d
        if max(num, den) > max_height:
            continue
        yield Fraction(num, den)
        queue.append((a, b, num, den))
        queue.append((num, den, c, d))


def rationals_by_height(max_height):
    """0, then +-r for each positive r in Stern-Brocot order."""
    out = [Fraction(0)]
    for r in positive_rationals_stern_brocot(max_height):
        out.append(r)
        out.append(-r)
    return out
