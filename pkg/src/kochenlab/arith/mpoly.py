"""Sparse multivariate polynomials with rational coefficients.

A monomial is stored sparsely as a sorted tuple of ``(variable, exponent)``
pairs; the polynomial records its arity separately. Serialization uses the
dense exponent vector of length ``arity``.
"""

import ast
from fractions import Fraction

from ..errors import InputError
from .rational import fmt_rat, height_rat, parse_rat


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


class MPoly:
    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity, terms=None):
        self.arity = arity
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = Fraction(c)
        self.terms = clean
        self._hash = None

    # construction

    @classmethod
    def const(cls, c, arity):
        return cls(arity, {(): Fraction(c)})

    @classmethod
    def zero(cls, arity):
        return cls(arity)

    @classmethod
    def var(cls, i, arity):
        if not 0 <= i < arity:
            raise InputError(f"variable {i} out of range for arity {arity}")
        return cls(arity, {((i, 1),): Fraction(1)})

    @classmethod
    def from_dense(cls, arity, pairs):
        """Build from ``[(exponent_vector, coefficient), ...]``."""
        terms = {}
        for exps, c in pairs:
            if len(exps) != arity:
                raise InputError("exponent vector length must equal arity")
            mono = tuple((i, e) for i, e in enumerate(exps) if e)
            terms[mono] = terms.get(mono, 0) + Fraction(c)
        return cls(arity, terms)

    @classmethod
    def univariate(cls, coeffs):
        """Arity-1 polynomial from a low-to-high coefficient list."""
        return cls(1, {(((0, k),) if k else ()): c for k, c in enumerate(coeffs)})

    # queries

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not m for m in self.terms)

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def total_degree(self):
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def degree_in(self, variables):
        vs = set(variables)
        return max((sum(e for v, e in m if v in vs) for m in self.terms), default=0)

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def height(self):
        return max((height_rat(c) for c in self.terms.values()), default=0)

    def to_univariate(self):
        """Low-to-high coefficients of an arity-1 polynomial."""
        if self.arity != 1:
            raise InputError("not a univariate polynomial")
        deg = self.total_degree()
        out = [Fraction(0)] * (deg + 1)
        for m, c in self.terms.items():
            out[m[0][1] if m else 0] = c
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    # arithmetic

    def _check(self, other):
        if isinstance(other, MPoly):
            if other.arity != self.arity:
                raise InputError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self.arity)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return MPoly(self.arity, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.arity, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MPoly(self.arity, {m: c * other for m, c in self.terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return MPoly(self.arity, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise InputError("polynomial powers must be non-negative integers")
        result = MPoly.const(1, self.arity)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.arity)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self.terms.items())))
        return self._hash

    # evaluation and substitution

    def eval(self, values, one=None):
        """Evaluate at ``values`` (any ring whose elements accept Fraction scalars).

        ``one`` is the ring's unit, needed when the point values are not
        rationals and the polynomial has a constant term.
        """
        if len(values) != self.arity:
            raise InputError(f"expected {self.arity} values, got {len(values)}")
        total = None
        powers = {}
        for m, c in self.terms.items():
            term = None
            for v, e in m:
                key = (v, e)
                pw = powers.get(key)
                if pw is None:
                    pw = values[v] ** e
                    powers[key] = pw
                term = pw if term is None else term * pw
            if term is None:
                term = c if one is None else one * c
            elif c != 1:
                term = term * c
            total = term if total is None else total + term
        if total is None:
            return Fraction(0) if one is None else one * 0
        return total

    def compose(self, images, arity=None):
        """Substitute variable i by the MPoly ``images[i]`` (all of one arity)."""
        if len(images) != self.arity:
            raise InputError("need one image per variable")
        target = arity if arity is not None else (images[0].arity if images else 0)
        result = MPoly.zero(target)
        cache = {}
        for m, c in self.terms.items():
            term = MPoly.const(c, target)
            for v, e in m:
                key = (v, e)
                if key not in cache:
                    cache[key] = images[v] ** e
                term = term * cache[key]
            result = result + term
        return result

    def remap(self, index_map, arity):
        """Rename variable i to ``index_map[i]`` inside a polynomial of the new arity."""
        terms = {}
        for m, c in self.terms.items():
            new = {}
            for v, e in m:
                j = index_map[v]
                new[j] = new.get(j, 0) + e
            mono = tuple(sorted(new.items()))
            terms[mono] = terms.get(mono, 0) + c
        return MPoly(arity, terms)

    def partial_eval(self, assignment):
        """Substitute constants for some variables; arity is kept."""
        terms = {}
        for m, c in self.terms.items():
            coef = c
            rest = []
            for v, e in m:
                if v in assignment:
                    coef *= Fraction(assignment[v]) ** e
                else:
                    rest.append((v, e))
            if coef:
                mono = tuple(rest)
                terms[mono] = terms.get(mono, 0) + coef
        return MPoly(self.arity, terms)

    def coefficients_in(self, var):
        """Map exponent k -> coefficient polynomial of ``var**k`` (var removed)."""
        out = {}
        for m, c in self.terms.items():
            k = 0
            rest = []
            for v, e in m:
                if v == var:
                    k = e
                else:
                    rest.append((v, e))
            out.setdefault(k, {})
            mono = tuple(rest)
            out[k][mono] = out[k].get(mono, 0) + c
        return {k: MPoly(self.arity, t) for k, t in out.items()}

    # formatting

    def to_json(self):
        terms = []
        for m in sorted(self.terms, key=_mono_sort_key):
            exps = [0] * self.arity
            for v, e in m:
                exps[v] = e
            terms.append({"exps": exps, "coef": fmt_rat(self.terms[m])})
        return {"arity": self.arity, "terms": terms}

    @classmethod
    def from_json(cls, data):
        try:
            arity = int(data["arity"])
            pairs = [(t["exps"], parse_rat(t["coef"])) for t in data["terms"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed polynomial JSON: {exc}") from exc
        return cls.from_dense(arity, pairs)

    def format(self, names=None):
        if not self.terms:
            return "0"
        names = names or [f"X{i + 1}" for i in range(self.arity)]
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key, reverse=True):
            c = self.terms[m]
            mono = "*".join(names[v] if e == 1 else f"{names[v]}^{e}" for v, e in m)
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
        return f"MPoly({self.format()})"


def _mono_sort_key(m):
    return (sum(e for _, e in m), [(-v, e) for v, e in m])


def parse_poly(text, names):
    """Parse an arithmetic expression such as ``"T^2+1"`` in the given variables."""
    arity = len(names)
    index = {n: i for i, n in enumerate(names)}
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse polynomial {text!r}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return MPoly.const(node.value, arity)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise InputError(f"unknown variable {node.id!r}")
            return MPoly.var(index[node.id], arity)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = walk(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise InputError("exponents must be integer literals")
                return walk(node.left) ** exp.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    raise InputError("division only by nonzero constants")
                return left * (1 / right.constant_term())
        raise InputError(f"unsupported syntax in {text!r}")

    return walk(tree)
