"""Brute-force semantics over finite fields.

eval_over_Fq enumerates every assignment of the free and auxiliary
variables with numpy and reduces the existential quantifier. Auxiliary
variables that enter linearly can instead be eliminated by solving the
linear system at every point (vectorized Gaussian elimination), which
keeps Weil-restricted families within reach.

direct_algebra_points is the independent route for Weil restriction: it
enumerates tuples in B = F_q[T]/(g) and evaluates the original polynomials
with algebra arithmetic.
"""

import numpy as np

from ..budget import require_budget
from ..errors import InputError
from .finite_field import AlgArray, eval_poly, field

CHUNK = 1 << 16


def _as_field(q):
    return field(q) if isinstance(q, int) else q


def _grid_columns(q, count, start, stop):
    """Columns of the mixed-radix enumeration of F_q^count for indices [start, stop)."""
    idx = np.arange(start, stop, dtype=np.int64)
    cols = []
    for _ in range(count):
        cols.append(idx % q)
        idx = idx // q
    return cols


def _split_linear(f, linear):
    """Write f = sum_j A_j * w_j + B with w_j the linear variables; None if not linear."""
    coeffs = {}
    rest = {}
    for mono, c in f.terms.items():
        lin = [(v, e) for v, e in mono if v in linear]
        if not lin:
            rest[mono] = c
            continue
        if len(lin) > 1 or lin[0][1] != 1:
            return None
        v = lin[0][0]
        other = tuple((u, e) for u, e in mono if u != v)
        coeffs.setdefault(v, {})[other] = c
    return coeffs, rest


def eval_over_Fq(D, q, fixed=None, linear_aux=None, budget=None):
    """The set of free tuples x in F_q^n with an auxiliary solution.

    ``fixed`` pins some free variables (index -> element); those coordinates
    appear in the output with their pinned values. ``linear_aux`` (default:
    the family's own hint) lists auxiliary indices eliminated by linear
    algebra; their linearity is checked, not trusted.
    """
    F = _as_field(q)
    q = F.q
    fixed = dict(fixed or {})
    linear = set(D.linear_aux if linear_aux is None else linear_aux)
    for i in linear:
        if not D.n <= i < D.arity:
            raise InputError(f"variable {i} is not auxiliary")
    split = None
    if linear:
        split = [_split_linear(f, linear) for f in D.polys]
        if any(s is None for s in split):
            raise InputError("declared linear variables enter nonlinearly")
    free_vars = [i for i in range(D.n) if i not in fixed]
    aux_vars = [i for i in range(D.n, D.arity) if i not in linear]
    lin_vars = sorted(linear)
    n_free, n_aux = len(free_vars), len(aux_vars)
    total = q ** (n_free + n_aux)
    require_budget(total, f"grid of F_{q}^{n_free + n_aux}", budget)
    found = np.zeros(q**n_free, dtype=bool)
    for start in range(0, total, CHUNK):
        stop = min(total, start + CHUNK)
        size = stop - start
        cols = _grid_columns(q, n_free + n_aux, start, stop)
        columns = [None] * D.arity
        for v, c in zip(free_vars + aux_vars, cols):
            columns[v] = c
        for v, val in fixed.items():
            columns[v] = np.full(size, val, dtype=np.int64)
        if split is None:
            ok = np.ones(size, dtype=bool)
            for f in D.polys:
                ok &= eval_poly(F, f, columns, size) == 0
                if not ok.any():
                    break
        else:
            ok = _linear_solvable(F, split, lin_vars, columns, size)
        # free coordinates are the low digits of the flat index
        free_index = np.arange(start, stop, dtype=np.int64) % (q**n_free)
        found[free_index[ok]] = True
    out = set()
    for code in np.nonzero(found)[0]:
        code = int(code)
        x = [0] * D.n
        for v in free_vars:
            x[v] = code % q
            code //= q
        for v, val in fixed.items():
            x[v] = val
        out.add(tuple(x))
    return out


def _linear_solvable(F, split, lin_vars, columns, size):
    """Per point, does sum_j A_ij(pt) w_j = -B_i(pt) have a solution over F_q?"""
    from ..arith.mpoly import MPoly

    rows = len(split)
    cols = len(lin_vars)
    M = np.zeros((size, rows, cols + 1), dtype=np.int64)
    for i, (coeffs, rest) in enumerate(split):
        arity = len(columns)
        for j, v in enumerate(lin_vars):
            if v in coeffs:
                M[:, i, j] = eval_poly(F, MPoly(arity, coeffs[v]), columns, size)
        M[:, i, cols] = F.neg[eval_poly(F, MPoly(arity, rest), columns, size)]
    return solvable_mask(F, M)


def solvable_mask(F, M):
    """Augmented systems M of shape (N, rows, cols + 1); True where consistent."""
    N, rows, width = M.shape
    cols = width - 1
    M = M.copy()
    rank = np.zeros(N, dtype=np.int64)
    pts = np.arange(N)
    row_ids = np.arange(rows)
    for c in range(cols):
        candidates = (M[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has = candidates.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(candidates, axis=1)
        sel = pts[has]
        r, pr = rank[has], piv[has]
        # swap the pivot row into position rank
        top = M[sel, r].copy()
        M[sel, r] = M[sel, pr]
        M[sel, pr] = top
        inv = F.inv[M[sel, r, c]]
        M[sel, r] = F.mul[M[sel, r], inv[:, None]]
        pivot_row = M[sel, r]  # (k, width)
        factor = M[sel, :, c].copy()  # (k, rows)
        factor[np.arange(len(sel)), r] = 0
        M[sel] = F.sub[M[sel], F.mul[factor[:, :, None], pivot_row[:, None, :]]]
        rank[has] += 1
    bad = (M[:, :, cols] != 0) & (row_ids[None, :] >= rank[:, None])
    return ~bad.any(axis=1)


def direct_algebra_points(f_list, n, m, q, g, budget=None):
    """{x in F_q^n : exists y in B^m with f(x, y) = 0 in B = F_q[T]/(g)} by enumeration.

    ``g`` is a monic list of field elements, low to high.
    """
    F = _as_field(q)
    q = F.q
    g = [int(c) for c in g]
    if g[-1] != 1:
        raise InputError("the algebra modulus must be monic")
    k = len(g) - 1
    total = q ** (n + k * m)
    require_budget(total, f"grid of F_{q}^{n} x B^{m}", budget)
    found = np.zeros(q**n, dtype=bool)
    for start in range(0, total, CHUNK):
        stop = min(total, start + CHUNK)
        size = stop - start
        cols = _grid_columns(q, n + k * m, start, stop)
        values = [AlgArray.constant(F, g, cols[i], size) for i in range(n)]
        for j in range(m):
            data = np.stack(cols[n + j * k: n + (j + 1) * k], axis=1)
            values.append(AlgArray(F, g, data))
        one = AlgArray.constant(F, g, 1, size)
        ok = np.ones(size, dtype=bool)
        for f in f_list:
            ok &= f.eval(values, one).is_zero_mask()
        found[(np.arange(start, stop) % (q**n))[ok]] = True
    out = set()
    for code in np.nonzero(found)[0]:
        code = int(code)
        x = []
        for _ in range(n):
            x.append(code % q)
            code //= q
        out.add(tuple(x))
    return out
