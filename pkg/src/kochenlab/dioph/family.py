"""Existentially defined families and their combinators.

A DiophFamily with ``n`` free and ``m`` auxiliary variables stands for the
set {x in F^n : exists y in F^m with every polynomial vanishing at (x, y)},
for every field F containing Q (or any field in which the coefficients make
sense). Polynomials always list the free variables first.

Each combinator records how its result was built (``origin``), so a witness
for a compound family can be assembled from witnesses of its parts with
``aux_assignment``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from ..arith.mpoly import MPoly
from ..errors import InputError, InvariantViolation


@dataclass(frozen=True, eq=False)
class DiophFamily:
    n: int
    m: int
    polys: tuple
    origin: tuple = field(default=("base",), repr=False)
    linear_aux: frozenset = field(default=frozenset(), repr=False)
    meta: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise InputError("variable counts must be nonnegative")
        object.__setattr__(self, "polys", tuple(self.polys))
        for f in self.polys:
            if f.arity != self.n + self.m:
                raise InputError(f"polynomial arity {f.arity} != n + m = {self.n + self.m}")

    @property
    def arity(self):
        return self.n + self.m

    def size(self):
        return {
            "n": self.n,
            "m": self.m,
            "polys": len(self.polys),
            "terms": sum(len(f.terms) for f in self.polys),
            "max_degree": max((f.total_degree() for f in self.polys), default=0),
        }

    def holds(self, x, aux, one=None):
        """True iff every polynomial vanishes at (x, aux)."""
        point = list(x) + list(aux)
        if len(point) != self.arity:
            raise InputError(f"expected {self.arity} coordinates, got {len(point)}")
        return all(_is_zero(f.eval(point, one)) for f in self.polys)

    def to_json(self):
        return {"n": self.n, "m": self.m, "polys": [f.to_json() for f in self.polys]}

    @classmethod
    def from_json(cls, data):
        try:
            n, m = int(data["n"]), int(data["m"])
            polys = [MPoly.from_json(f) for f in data["polys"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed family JSON: {exc}") from exc
        return cls(n, m, polys)


def _is_zero(value):
    if hasattr(value, "is_zero"):
        return value.is_zero()
    return value == 0


def base(n, m, polys):
    return DiophFamily(n, m, polys)


def full_space(n):
    return DiophFamily(n, 0, [], origin=("base",))


def _shift(f, n_old, m_old, n_new, aux_offset, arity, free_map=None):
    """Move f's free variables by free_map (identity by default) and its aux block to aux_offset."""
    index = []
    for i in range(n_old):
        index.append(free_map[i] if free_map is not None else i)
    for j in range(m_old):
        index.append(n_new + aux_offset + j)
    return f.remap(index, arity)


def union(d1, d2):
    """Pairwise products f_i * g_j with disjoint aux blocks."""
    if d1.n != d2.n:
        raise InputError(f"union needs equal dimensions, got {d1.n} and {d2.n}")
    n, m = d1.n, d1.m + d2.m
    arity = n + m
    left = [_shift(f, n, d1.m, n, 0, arity) for f in d1.polys]
    right = [_shift(g, n, d2.m, n, d1.m, arity) for g in d2.polys]
    polys = [f * g for f in left for g in right]
    return DiophFamily(n, m, polys, origin=("union", d1, d2))


def intersect(d1, d2):
    if d1.n != d2.n:
        raise InputError(f"intersect needs equal dimensions, got {d1.n} and {d2.n}")
    n, m = d1.n, d1.m + d2.m
    arity = n + m
    polys = [_shift(f, n, d1.m, n, 0, arity) for f in d1.polys]
    polys += [_shift(g, n, d2.m, n, d1.m, arity) for g in d2.polys]
    return DiophFamily(n, m, polys, origin=("intersect", d1, d2))


def product(d1, d2):
    """Free variables of d1 then d2; aux of d1 then d2."""
    n, m = d1.n + d2.n, d1.m + d2.m
    arity = n + m
    polys = [_shift(f, d1.n, d1.m, n, 0, arity) for f in d1.polys]
    right_free = [d1.n + i for i in range(d2.n)]
    polys += [_shift(g, d2.n, d2.m, n, d1.m, arity, right_free) for g in d2.polys]
    return DiophFamily(n, m, polys, origin=("product", d1, d2))


def power(d, k):
    if k < 1:
        raise InputError("power needs k >= 1")
    out = d
    for _ in range(k - 1):
        out = product(out, d)
    return out


def section(d, a, r):
    """Substitute the last r free variables by the rationals a."""
    if not 0 <= r < d.n:
        raise InputError(f"section needs 0 <= r < n = {d.n}, got r = {r}")
    if len(a) != r:
        raise InputError(f"expected {r} values, got {len(a)}")
    n = d.n - r
    assignment = {n + i: Fraction(c) for i, c in enumerate(a)}
    # the substituted variables no longer occur, so their slots map anywhere
    index = list(range(n)) + [0] * r + [n + j for j in range(d.m)]
    polys = [f.partial_eval(assignment).remap(index, n + d.m) for f in d.polys]
    return DiophFamily(n, d.m, polys, origin=("section", d, tuple(assignment.values())))


def _coprime(g, h):
    """Numerator and denominator share no nonconstant factor (checked with sympy)."""
    if g.is_zero() or h.is_constant() or g.is_constant():
        return True
    import sympy

    syms = sympy.symbols(f"v0:{g.arity}")
    ge = sympy.Poly(_to_sympy(g, syms), *syms)
    he = sympy.Poly(_to_sympy(h, syms), *syms)
    return ge.gcd(he).total_degree() == 0


def _to_sympy(f, syms):
    import sympy

    total = sympy.Integer(0)
    for mono, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in mono:
            term *= syms[v] ** e
        total += term
    return total


def rational_image(d, maps, check_coprime=True):
    """Image of d under x -> (g_1(x)/h_1(x), ..., g_k(x)/h_k(x)) where all h_i(x) != 0.

    New layout: free z_1..z_k; aux = d's free variables, d's aux, then one
    inverse w_i per denominator. Polynomials: g_i - z_i h_i, w_i h_i - 1 and d's own.
    """
    k = len(maps)
    for g, h in maps:
        if g.arity != d.n or h.arity != d.n:
            raise InputError("map components must be polynomials in the family's free variables")
        if h.is_zero():
            raise InputError("denominator is the zero polynomial")
        if check_coprime and not _coprime(g, h):
            raise InputError(f"numerator {g.format()} and denominator {h.format()} are not coprime")
    m = d.n + d.m + k
    arity = k + m
    to_aux = [k + i for i in range(d.n)]
    polys = []
    for i, (g, h) in enumerate(maps):
        gg = g.remap(to_aux, arity)
        hh = h.remap(to_aux, arity)
        z = MPoly.var(i, arity)
        w = MPoly.var(k + d.n + d.m + i, arity)
        polys.append(gg - z * hh)
        polys.append(w * hh - 1)
    index = [k + i for i in range(d.n + d.m)]
    polys += [f.remap(index, arity) for f in d.polys]
    return DiophFamily(k, m, polys, origin=("image", d, tuple(maps)))


def projection(d, coords):
    """Image under the coordinate projection onto the listed free variables."""
    maps = [(MPoly.var(i, d.n), MPoly.const(1, d.n)) for i in coords]
    return rational_image(d, maps, check_coprime=False)


def union_many(families):
    """Union of several families through binary selector variables.

    Aux layout: b selector bits s_j (with s_j^2 - s_j = 0), then every branch's
    aux block. Branch i's polynomials are multiplied by the indicator
    chi_i(s), which is 1 at the binary code of i and 0 at other codes; codes
    past the last branch are ruled out by chi_c(s) = 0.
    """
    families = list(families)
    if not families:
        raise InputError("union of no families")
    n = families[0].n
    if any(d.n != n for d in families):
        raise InputError("union needs equal dimensions")
    if len(families) == 1:
        return families[0]
    bits = (len(families) - 1).bit_length()
    m = bits + sum(d.m for d in families)
    arity = n + m
    sel = [MPoly.var(n + j, arity) for j in range(bits)]
    one = MPoly.const(1, arity)

    def chi(code):
        out = one
        for j in range(bits):
            out = out * (sel[j] if (code >> j) & 1 else one - sel[j])
        return out

    polys = [s * s - s for s in sel]
    offset = bits
    for i, d in enumerate(families):
        c = chi(i)
        for f in d.polys:
            polys.append(c * _shift(f, n, d.m, n, offset, arity))
        offset += d.m
    for code in range(len(families), 2**bits):
        polys.append(chi(code))
    return DiophFamily(n, m, polys, origin=("union_many", tuple(families), bits))


# -- witnesses -------------------------------------------------------------


def aux_assignment(d, x, witness, one=None):
    """Auxiliary values for the point x of d, assembled from a witness tree.

    Witness shapes follow the origin: a list of aux values for base families,
    (branch, sub) for unions, (sub1, sub2) for intersect and product, (xd, sub)
    for rational images, sub for sections.
    """
    kind = d.origin[0]
    if kind == "base":
        aux = list(witness)
        if len(aux) != d.m:
            raise InputError(f"expected {d.m} aux values, got {len(aux)}")
        return aux
    if kind == "union":
        _, d1, d2 = d.origin
        branch, sub = witness
        zero = _zero(one)
        if branch == 0:
            return aux_assignment(d1, x, sub, one) + [zero] * d2.m
        return [zero] * d1.m + aux_assignment(d2, x, sub, one)
    if kind == "union_many":
        _, families, bits = d.origin
        branch, sub = witness
        zero = _zero(one)
        unit = _one(one)
        out = [unit if (branch >> j) & 1 else zero for j in range(bits)]
        for i, f in enumerate(families):
            out += aux_assignment(f, x, sub, one) if i == branch else [zero] * f.m
        return out
    if kind == "intersect":
        _, d1, d2 = d.origin
        w1, w2 = witness
        return aux_assignment(d1, x, w1, one) + aux_assignment(d2, x, w2, one)
    if kind == "product":
        _, d1, d2 = d.origin
        w1, w2 = witness
        x = list(x)
        return aux_assignment(d1, x[: d1.n], w1, one) + aux_assignment(d2, x[d1.n:], w2, one)
    if kind == "section":
        _, inner, values = d.origin
        full = list(x) + [_lift_const(c, one) for c in values]
        return aux_assignment(inner, full, witness, one)
    if kind == "image":
        _, inner, maps = d.origin
        xd, sub = witness
        xd = list(xd)
        inner_aux = aux_assignment(inner, xd, sub, one)
        inverses = []
        for g, h in maps:
            hv = h.eval(xd, one)
            if _is_zero(hv):
                raise InvariantViolation("witness hits a pole of the rational map")
            inverses.append(_inverse(hv))
        return xd + inner_aux + inverses
    raise InputError(f"no witness lifting for {kind} families")


def _zero(one):
    return Fraction(0) if one is None else one * 0


def _one(one):
    return Fraction(1) if one is None else one


def _lift_const(c, one):
    return Fraction(c) if one is None else one * Fraction(c)


def _inverse(v):
    if isinstance(v, (int, Fraction)):
        return 1 / Fraction(v)
    return v.inverse()


def check_witness(d, x, witness, one=None):
    aux = aux_assignment(d, x, witness, one)
    if not d.holds(x, aux, one):
        raise InvariantViolation("lifted witness does not satisfy the family")
    return aux


def rational_points_naive(d, box):
    """Free points of d among tuples from ``box`` that have an aux solution in ``box`` (tests only)."""
    out = set()
    for x in iproduct(box, repeat=d.n):
        for y in iproduct(box, repeat=d.m):
            if d.holds(x, y):
                out.add(tuple(x))
                break
    return out
