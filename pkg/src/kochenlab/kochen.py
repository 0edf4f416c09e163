"""The Kochen operator over Q and its valuation behaviour.

For a prime p, a type tau = (e, f) and a uniformizer t in {p, -p}, with
Q = p**f,

    gamma(X) = (1/t) * ((X**Q - X) / ((X**Q - X)**2 - 1))**e .

Values are exact rationals (or number-field elements). Valuation
predictions follow from the four-way case split on v(x), v(x**Q - x) and
v((x**Q - x)**2 - 1), and are compared against direct evaluation.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith.primes import dirichlet_prime, is_prime
from .arith.rational import INF, _val_unchecked, int_val, is_inf
from .arith.ratfunc import RatFunc
from .errors import InputError, InvariantViolation, NotFoundError, PreconditionError


class _Pole:
    """Result marker for evaluation at a pole."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"

    def __bool__(self):
        return False


POLE = _Pole()


@dataclass(frozen=True)
class KochenParams:
    p: int
    e: int = 1
    f: int = 1
    sign: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not a prime")
        if self.e < 1 or self.f < 1:
            raise InputError("type (e, f) needs e >= 1 and f >= 1")
        if self.sign not in (1, -1):
            raise InputError("uniformizer sign must be +1 or -1")

    @property
    def t(self):
        return self.sign * self.p

    @property
    def q(self):
        return self.p

    @property
    def Q(self):
        return self.p**self.f

    @property
    def tau(self):
        return (self.e, self.f)

    def with_sign(self, sign):
        return KochenParams(self.p, self.e, self.f, sign)


NEG_VAL = "NegVal"
POS_VAL = "PosVal"
RES_ROOT_POS = "ResRootPos"
RES_UNIT = "ResUnit"
POLE_CASE = "Pole"
ZERO = "Zero"


@dataclass(frozen=True)
class GammaCase:
    tag: str
    valuation: object  # int or INF; None for a pole


def _is_rational(x):
    return isinstance(x, (int, Fraction))


def gamma_eval(params, x):
    """gamma(x) exactly, or POLE.

    Rationals go through an integer formula: with x = a/b, N = a**Q - a*b**(Q-1)
    and D = b**Q, gamma = (N*D)**e / (t * (N**2 - D**2)**e).
    """
    if _is_rational(x):
        x = Fraction(x)
        a, b = x.numerator, x.denominator
        Q = params.Q
        N = a**Q - a * b ** (Q - 1)
        D = b**Q
        den = N * N - D * D
        if den == 0:
            return POLE
        return Fraction((N * D) ** params.e, params.t * den**params.e)
    u = x**params.Q - x
    den = u * u - 1
    if den.is_zero():
        return POLE
    return (u * den.inverse()) ** params.e * Fraction(1, params.t)


def gamma_unreduced(params, x):
    """(numerator, denominator) integers of gamma(x) before cancellation, or POLE."""
    x = Fraction(x)
    a, b = x.numerator, x.denominator
    Q = params.Q
    N = a**Q - a * b ** (Q - 1)
    D = b**Q
    den = N * N - D * D
    if den == 0:
        return POLE
    return (N * D) ** params.e, params.t * den**params.e


def gamma_valuation_direct(params, x, ell=None):
    """v_ell(gamma(x)) read off the unreduced integer fraction (ell defaults to p)."""
    ell = params.p if ell is None else ell
    r = gamma_unreduced(params, x)
    if r is POLE:
        return POLE
    num, den = r
    if num == 0:
        return INF
    return int_val(num, ell) - int_val(den, ell)


def gamma_valuation_predict(params, v_x, v_t=1, v_diff=None, v_den=None):
    """Valuation of gamma(x) at a prime above p from valuation data alone.

    ``v_x`` = v(x), ``v_t`` = v(t), ``v_diff`` = v(x**Q - x) and
    ``v_den`` = v((x**Q - x)**2 - 1); the last two are only consulted when
    v(x) = 0. Returns a GammaCase.
    """
    e, Q = params.e, params.Q
    if is_inf(v_t) or v_t < 1:
        raise InputError("v(t) must be a positive integer at a prime above p")
    if is_inf(v_x):
        return GammaCase(ZERO, INF)
    if v_x < 0:
        return GammaCase(NEG_VAL, -e * Q * v_x - v_t)
    if v_x > 0:
        return GammaCase(POS_VAL, e * v_x - v_t)
    if v_diff is None:
        raise InputError("v(x) = 0 needs v(x^Q - x)")
    if is_inf(v_diff):
        if v_den is not None and v_den != 0:
            raise InputError("x^Q - x = 0 forces (x^Q - x)^2 - 1 to be a unit")
        return GammaCase(RES_ROOT_POS, INF)
    if v_diff < 0:
        raise InputError("v(x) = 0 forces v(x^Q - x) >= 0")
    if v_diff > 0:
        if v_den is not None and v_den != 0:
            raise InputError("v(x^Q - x) > 0 forces (x^Q - x)^2 - 1 to be a unit")
        return GammaCase(RES_ROOT_POS, e * v_diff - v_t)
    if v_den is None:
        raise InputError("residue-unit case needs v((x^Q - x)^2 - 1)")
    if is_inf(v_den):
        return GammaCase(POLE_CASE, None)
    if v_den < 0:
        raise InputError("v((x^Q - x)^2 - 1) cannot be negative when x is a unit")
    return GammaCase(RES_UNIT, -e * v_den - v_t)


def gamma_case(params, x):
    """Predicted case and valuation at p for a rational x (valuations computed from x)."""
    x = Fraction(x)
    p = params.p
    v_x = _val_unchecked(x, p)
    if is_inf(v_x) or v_x != 0:
        return gamma_valuation_predict(params, v_x)
    u = x**params.Q - x
    return gamma_valuation_predict(params, 0, 1, _val_unchecked(u, p), _val_unchecked(u * u - 1, p))


def gamma_case_at(params, x, prime):
    """Predicted case at a number-field prime, valuations computed by ``prime.val``."""
    v_t = prime.val(params.t)
    v_x = prime.val(x)
    if is_inf(v_x) or v_x != 0:
        return gamma_valuation_predict(params, v_x, v_t)
    u = x**params.Q - x
    return gamma_valuation_predict(params, 0, v_t, prime.val(u), prime.val(u * u - 1))


def gamma_rational_poles(params):
    """Rational roots of X**Q - X - 1 and X**Q - X + 1 (candidates +-1 only)."""
    Q = params.Q
    return sorted(
        r for r in (Fraction(1), Fraction(-1)) if (r**Q - r) ** 2 == 1
    )


def _require_above_p(params, prime):
    if prime.p != params.p:
        raise PreconditionError(f"prime lies above {prime.p}, not above p = {params.p}")


def gamma_small_certificate(params, x, prime):
    """Check v_P(gamma(x)) <= -v_P(t)/(e+1) under one of the two sufficient hypotheses.

    Returns (True, v_P(gamma(x))). Raises PreconditionError naming the failed
    clause when neither hypothesis holds.
    """
    _require_above_p(params, prime)
    value = gamma_eval(params, x)
    if value is POLE:
        raise PreconditionError("x is a pole of gamma")
    e = params.e
    v_t = prime.val(params.t)
    v_x = prime.val(x)
    clause_i = not is_inf(v_x) and 0 < (e + 1) * v_x <= v_t
    clause_ii = False
    if not clause_i:
        if is_inf(v_x) or v_x != 0:
            raise PreconditionError(
                f"clause (i) fails: need 0 < (e+1)*v(x) <= v(t), have (e+1)*{v_x} vs {v_t}; "
                "clause (ii) needs v(x) = 0"
            )
        d = prime.residue_degree(x)
        clause_ii = params.f % d != 0
        if not clause_ii:
            raise PreconditionError(
                f"clause (ii) fails: residue generates degree {d}, which divides f = {params.f}"
            )
    v_gamma = prime.val(value)
    if is_inf(v_gamma) or Fraction(v_gamma) > Fraction(-v_t, e + 1):
        raise InvariantViolation(f"v(gamma(x)) = {v_gamma} exceeds -v(t)/(e+1) = {-v_t}/{e + 1}")
    return True, v_gamma


def gamma_perturbation_check(params, x, y, prime):
    """If v(gamma(x)) < 0 and v(x - y) >= v(t), confirm y is no pole and v(gamma(y)) < 0."""
    _require_above_p(params, prime)
    gx = gamma_eval(params, x)
    if gx is POLE:
        raise PreconditionError("x is a pole of gamma")
    v_gx = prime.val(gx)
    if is_inf(v_gx) or v_gx >= 0:
        raise PreconditionError(f"v(gamma(x)) = {v_gx} is not negative")
    v_t = prime.val(params.t)
    v_diff = prime.val(x - y)
    if not is_inf(v_diff) and v_diff < v_t:
        raise PreconditionError(f"v(x - y) = {v_diff} < v(t) = {v_t}")
    gy = gamma_eval(params, y)
    if gy is POLE:
        raise InvariantViolation("y is a pole although x - y is t-adically small")
    v_gy = prime.val(gy)
    if is_inf(v_gy) or v_gy >= 0:
        raise InvariantViolation(f"v(gamma(y)) = {v_gy} is not negative")
    return True


def rho_eval(params, x):
    """rho(x) = x / (x**Q - x + 1), or POLE."""
    if _is_rational(x):
        x = Fraction(x)
        den = x**params.Q - x + 1
        return POLE if den == 0 else x / den
    den = x**params.Q - x + 1
    if den.is_zero():
        return POLE
    return x * den.inverse()


def prime_has_type_at_most(prime, tau):
    e, f = tau
    return prime.e <= e and f % prime.f == 0


def rho_check(params, x, prime):
    """Residue-preserving / contracting behaviour of rho at a prime of type <= tau."""
    _require_above_p(params, prime)
    if not prime_has_type_at_most(prime, params.tau):
        raise PreconditionError(f"prime has type ({prime.e},{prime.f}), not at most {params.tau}")
    value = rho_eval(params, x)
    if value is POLE:
        raise InvariantViolation("rho has a pole at a prime of admissible type")
    v_x = prime.val(x)
    v_rho = prime.val(value)
    if not is_inf(v_x) and v_x == 0:
        if v_rho != 0 or not prime.residues_equal(value, x):
            raise InvariantViolation("rho changed the residue of a unit")
    elif not (is_inf(v_rho) or v_rho > 0):
        raise InvariantViolation(f"v(rho(x)) = {v_rho} is not positive")
    return True


@dataclass(frozen=True)
class Omega:
    k: int
    ell: int
    t: int
    func: RatFunc

    def beta(self, x):
        return Fraction(x) ** self.ell / Fraction(self.t) ** self.k

    def __call__(self, x):
        if _is_rational(x):
            return self.func(x)
        num = x**self.ell * Fraction(self.t) ** self.k
        den = x ** (2 * self.ell) + Fraction(self.t) ** (2 * self.k)
        if den.is_zero():
            return POLE
        return num * den.inverse()


def omega_construct(params, tau_prime, bound=10**4):
    """omega = (beta + 1/beta)^(-1) with beta = t^(-k) X^ell, ell = 1 + k*e the least prime > e'."""
    e2, f2 = tau_prime
    if not (params.e <= e2 and f2 % params.f == 0):
        raise InputError(f"type {params.tau} is not at most {tuple(tau_prime)}")
    e = params.e
    ell = dirichlet_prime(1, e, extra=lambda c: c > e2 and (c - 1) // e >= 1, bound=bound)
    if ell is None:
        raise NotFoundError(f"no prime ell = 1 + k*{e} above {e2} up to {bound}")
    k = (ell - 1) // e
    t = params.t
    num = [0] * ell + [t**k]
    den = [t ** (2 * k)] + [0] * (2 * ell - 1) + [1]
    return Omega(k, ell, t, RatFunc(num, den))


def omega_check(params, omega, tau_prime, x, prime):
    """Positive valuation at primes of type <= tau'; valuation 1 at uniformizers of exact type tau."""
    if not prime_has_type_at_most(prime, tau_prime):
        raise PreconditionError("prime type is not at most tau'")
    value = omega(x)
    if value is POLE:
        raise PreconditionError("x is a pole of omega")
    v = prime.val(value)
    if not (is_inf(v) or v > 0):
        raise InvariantViolation(f"v(omega(x)) = {v} is not positive")
    if (prime.e, prime.f) == params.tau and prime.val(x) == 1 and v != 1:
        raise InvariantViolation(f"v(omega(x)) = {v} at a uniformizer of exact type")
    return True

