"""Univariate rational functions over Q in lowest terms."""

from fractions import Fraction

from ..errors import InputError
from .rational import fmt_rat
from .upoly import pdivmod, peval, pgcd, pmonic, pmul, trim


class RatFunc:
    """num/den with coprime numerator and monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num = trim([Fraction(c) for c in num])
        den = trim([Fraction(c) for c in den])
        if not den:
            raise InputError("zero denominator")
        g = pgcd(num, den) if num else list(pmonic(den))
        num = pdivmod(num, g)[0] if num else []
        den = pdivmod(den, g)[0]
        lead = den[-1]
        self.num = tuple(c / lead for c in num)
        self.den = tuple(c / lead for c in den)

    def __call__(self, x):
        """Exact value at a rational, or None at a pole."""
        d = peval(self.den, Fraction(x))
        if d == 0:
            return None
        return peval(self.num, Fraction(x)) / d

    def eval_ring(self, x, one):
        """Value at an element of a ring with unit ``one``; raises ZeroDivisionError at poles."""
        num = _horner(self.num, x, one)
        den = _horner(self.den, x, one)
        return num * den.inverse()

    def __mul__(self, other):
        return RatFunc(pmul(self.num, other.num), pmul(self.den, other.den))

    def __eq__(self, other):
        return isinstance(other, RatFunc) and (self.num, self.den) == (other.num, other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({_fmt(self.num)} / {_fmt(self.den)})"


def _horner(coeffs, x, one):
    acc = one * 0
    for c in reversed(coeffs):
        acc = acc * x + one * c
    return acc


def _fmt(coeffs):
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c:
            parts.append(f"{fmt_rat(c)}*X^{k}" if k else fmt_rat(c))
    return " + ".join(parts)
