"""Weil restriction along the algebras B_z = F[T]/(g(z, T)), and the radical-power check.

For polynomials f_s(X, Y) in n + m variables, write each Y_j as
sum_i U_ij T^i and set f^_s = f_s(X, U(T)). Then x lies in the zero set
of the f_s over B_z exactly when every f^_s is divisible by g(z, T), i.e.
when some W_s(T) = sum_l W_sl T^l makes f^_s - g * W_s vanish coefficient
by coefficient. The T-coefficients h_sl of f^_s - g * W_s define the
restricted family. W_s enters linearly, which the oracle exploits.
"""


import numpy as np

from ..arith.mpoly import MPoly
from ..errors import InputError, InvariantViolation
from .family import DiophFamily
from .finite_field import field, irreducible_factors_q, ptrim
from .oracle import direct_algebra_points


def _check_inputs(f_list, n, m):
    if not f_list:
        raise InputError("need at least one polynomial")
    for f in f_list:
        if f.arity != n + m:
            raise InputError(f"polynomial arity {f.arity} != n + m = {n + m}")


def weil_restrict(f_list, n, m, k):
    """Restriction along the monic g = T^k + z_{k-1} T^{k-1} + ... + z_0.

    Free variables: X_1..X_n, z_0..z_{k-1}. Auxiliary: U (k*m) then one W
    block of d + 1 coefficients per input polynomial, d the largest T-degree.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    T = MPoly.var(k, k + 1)
    g = T**k
    for i in range(k):
        g = g + MPoly.var(i, k + 1) * T**i
    return weil_restrict_modulus(f_list, n, m, g, k)


def weil_restrict_modulus(f_list, n, m, G, c):
    """Restriction along F[T]/(G) where G is a polynomial in c parameters and T (last variable).

    G need not be monic. The element representatives have K = deg_T G
    coefficients; the output has free variables X (n) and the c parameters.
    """
    _check_inputs(f_list, n, m)
    if G.arity != c + 1:
        raise InputError("modulus must have arity c + 1")
    K = G.degree_in([c])
    if K < 1:
        raise InputError("modulus must involve T")
    r = len(f_list)
    # layout before W is known: X (n), params (c), U (K*m), T
    pre = n + c + K * m + 1
    t_pre = pre - 1
    Tv = MPoly.var(t_pre, pre)
    images = [MPoly.var(i, pre) for i in range(n)]
    for j in range(m):
        y = MPoly.zero(pre)
        for i in range(K):
            y = y + MPoly.var(n + c + j * K + i, pre) * Tv**i
        images.append(y)
    hats = [f.compose(images, pre) for f in f_list]
    d = max(h.degree_in([t_pre]) for h in hats)
    w_count = r * (d + 1)
    arity = n + c + K * m + w_count + 1
    t_var = arity - 1
    move = list(range(pre - 1)) + [t_var]
    Gm = G.remap([n + i for i in range(c)] + [t_var], arity)
    Tm = MPoly.var(t_var, arity)
    w_start = n + c + K * m
    polys = []
    for s, h in enumerate(hats):
        hh = h.remap(move, arity)
        W = MPoly.zero(arity)
        for l in range(d + 1):
            W = W + MPoly.var(w_start + s * (d + 1) + l, arity) * Tm**l
        diff = hh - Gm * W
        coeffs = diff.coefficients_in(t_var)
        drop_t = list(range(arity - 1)) + [0]
        for l in sorted(coeffs):
            polys.append(coeffs[l].remap(drop_t, arity - 1))
    linear = frozenset(range(w_start, w_start + w_count))
    info = {"n": n, "c": c, "K": K, "m": m, "d": d, "r": r}
    return DiophFamily(n + c, K * m + w_count, polys, origin=("weil", tuple(f_list), G, info), linear_aux=linear)


def weil_points_over_Fq(D, q, z, budget=None):
    """{x : (x, z) in D(F_q)} through the linear-elimination oracle."""
    from .oracle import eval_over_Fq

    info = D.origin[3] if D.origin[0] == "weil" else None
    if info is None:
        raise InputError("not a Weil-restricted family")
    n = info["n"]
    fixed = {n + i: int(v) for i, v in enumerate(z)}
    pts = eval_over_Fq(D, q, fixed=fixed, budget=budget)
    return {x[:n] for x in pts}


# -- the radical-power check ----------------------------------------------


def _power_polys(f_list, l):
    return [f**l for f in f_list]


def radical_power_check(f_list, n, m, l, q, g, budget=None):
    """Compare F^n meet P_{f^l}(B) with the intersection over maximal ideals of F^n meet P_f(B/M).

    B = F_q[T]/(g) with g monic over F_q and dim B <= l. Both sides are
    computed by enumeration; a mismatch raises InvariantViolation.
    """
    _check_inputs(f_list, n, m)
    F = field(q) if isinstance(q, int) else q
    g = ptrim([int(c) for c in g])
    if not g or g[-1] != 1:
        raise InputError("g must be monic")
    if len(g) - 1 > l:
        raise InputError(f"dim B = {len(g) - 1} exceeds l = {l}")
    left = direct_algebra_points(_power_polys(f_list, l), n, m, F, g, budget)
    right = None
    for phi, _ in irreducible_factors_q(F, g):
        pts = direct_algebra_points(f_list, n, m, F, phi, budget)
        right = pts if right is None else right & pts
    if right is None:
        right = set(np.ndindex(*([F.q] * n)))
    if left != right:
        raise InvariantViolation(f"radical-power identity fails: {sorted(left ^ right)[:5]}")
    return True


# -- Weil restriction along the parametric modulus g_a -----------------------


def g_a_modulus(p, tau, t=None):
    """g_a(T) = t a^e ((T^Q - T)^2 - 1) - (T^Q - T) as a polynomial in (a, T)."""
    e, f = tau
    Q = p**f
    t = p if t is None else t
    a = MPoly.var(0, 2)
    T = MPoly.var(1, 2)
    u = T**Q - T
    return a**e * (u * u - 1) * t - u

