"""Fixed-precision ell-adic numbers, for valuations of huge powers.

An LAdic is ell**val * unit with the unit known modulo ell**prec (relative
precision). Exponentiation is cheap because x**Q only touches the unit mod
ell**prec, which is what makes gamma_p at large p tractable.
"""

from fractions import Fraction

from .rational import int_val


class PrecisionLoss(ArithmeticError):
    """Cancellation ate every known digit; retry with more precision."""


class LAdic:
    __slots__ = ("ell", "val", "unit", "prec")

    def __init__(self, ell, val, unit, prec):
        self.ell = ell
        self.val = val
        self.prec = prec
        self.unit = unit % ell**prec

    @classmethod
    def from_rat(cls, ell, x, prec):
        x = Fraction(x)
        if x == 0:
            raise PrecisionLoss("exact zero has no finite valuation")
        vn = int_val(x.numerator, ell)
        vd = int_val(x.denominator, ell)
        mod = ell**prec
        unit = (x.numerator // ell**vn) * pow(x.denominator // ell**vd, -1, mod)
        return cls(ell, vn - vd, unit, prec)

    def __mul__(self, other):
        prec = min(self.prec, other.prec)
        return LAdic(self.ell, self.val + other.val, self.unit * other.unit, prec)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return LAdic(self.ell, self.val * k, pow(self.unit, k, self.ell**self.prec), self.prec)

    def inverse(self):
        return LAdic(self.ell, -self.val, pow(self.unit, -1, self.ell**self.prec), self.prec)

    def __truediv__(self, other):
        return self * other.inverse()

    def __neg__(self):
        return LAdic(self.ell, self.val, -self.unit, self.prec)

    def __add__(self, other):
        if not isinstance(other, LAdic):
            if other == 0:
                return self
            other = LAdic.from_rat(self.ell, other, self.prec)
        ell = self.ell
        base = min(self.val, other.val)
        top = min(self.val + self.prec, other.val + other.prec)
        mod = ell ** (top - base)
        s = (self.unit * ell ** (self.val - base) + other.unit * ell ** (other.val - base)) % mod
        if s == 0:
            raise PrecisionLoss("sum vanishes to the known precision")
        shift = int_val(s, ell)
        return LAdic(ell, base + shift, s // ell**shift, top - base - shift)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, LAdic):
            other = LAdic.from_rat(self.ell, other, self.prec) if other != 0 else None
            if other is None:
                return self
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def residue(self):
        """Image in F_ell; requires val >= 0."""
        if self.val < 0:
            raise ValueError("not an ell-adic integer")
        return 0 if self.val > 0 else self.unit % self.ell

    def __repr__(self):
        return f"LAdic({self.ell}^{self.val} * {self.unit} mod {self.ell}^{self.prec})"
