"""Finite-dimensional algebras Q[T]/(h) and their elements."""

from fractions import Fraction

from ..errors import InputError
from .rational import fmt_rat
from .upoly import padd, pext_gcd, pmod, pmonic, pmul, pneg, trim


class QAlgebra:
    """Q[T]/(h) for a nonconstant h; elements are reduced coefficient tuples."""

    def __init__(self, modulus):
        h = trim([Fraction(c) for c in modulus])
        if len(h) < 2:
            raise InputError("modulus must be nonconstant")
        self.modulus = tuple(pmonic(h))
        self.dim = len(h) - 1

    def __call__(self, coeffs):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = [coeffs]
        return QElem(self, pmod([Fraction(c) for c in coeffs], list(self.modulus)))

    def one(self):
        return self([1])

    def zero(self):
        return self([])

    def gen(self):
        return self([0, 1])

    def __eq__(self, other):
        return isinstance(other, QAlgebra) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)


class QElem:
    __slots__ = ("alg", "coeffs")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = tuple(trim(coeffs))

    def _lift(self, other):
        if isinstance(other, QElem):
            if other.alg != self.alg:
                raise InputError("elements of different algebras")
            return list(other.coeffs)
        if isinstance(other, (int, Fraction)):
            return trim([Fraction(other)])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QElem(self.alg, padd(list(self.coeffs), o))

    __radd__ = __add__

    def __neg__(self):
        return QElem(self.alg, pneg(list(self.coeffs)))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QElem(self.alg, padd(list(self.coeffs), pneg(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QElem(self.alg, pmod(pmul(list(self.coeffs), o), list(self.alg.modulus)))

    __rmul__ = __mul__

    def inverse(self):
        g, s, _ = pext_gcd(list(self.coeffs), list(self.alg.modulus))
        if g != [1]:
            raise ZeroDivisionError("element is not a unit")
        return QElem(self.alg, pmod(s, list(self.alg.modulus)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.alg.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self):
        return not self.coeffs

    def is_rational(self):
        return len(self.coeffs) <= 1

    def rational(self):
        if not self.is_rational():
            raise InputError("element is not in Q")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return list(self.coeffs) == o

    def __hash__(self):
        return hash((self.alg.modulus, self.coeffs))

    def format(self, name="T"):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (name if k == 1 else f"{name}^{k}")
            if not mono:
                parts.append(fmt_rat(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{fmt_rat(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"QElem({self.format()})"
