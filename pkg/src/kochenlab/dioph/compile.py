"""Compilers for the Kochen-ring families and the holomorphy family over B_a.

compile_R_family builds, from the combinators alone, a 1-dimensional family
whose points over Q are the union over t = +-p, g in P_{p,n} and 1 <= m <= n
of the x satisfying a monic relation of degree m with coefficients in
R_{g,t}. Membership over Q is a bounded witness search: a found witness is
lifted through the construction and every defining polynomial is evaluated
at the lifted point.

compile_holomorphy_family raises the defining polynomials of R to the
power l = 2Q and restricts them along B_a = F[T]/(g_a). The restricted
system is kept implicit: h_{s,l} = 0 for some W exactly when
f_s(x, y)^l = 0 in B_a, which is what membership checks.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from ..arith.factor import factor_over_Q
from ..arith.mpoly import MPoly
from ..arith.qalgebra import QAlgebra
from ..arith.rational import fmt_rat, rationals_by_height, val_p
from ..arith.upoly import padd, pext_gcd, pmod, pmul
from ..budget import require_budget
from ..errors import InputError, InvariantViolation
from ..kochen import POLE, KochenParams, gamma_eval
from ..numberfield import NumberField, g_a_poly, integral_model
from ..rings import (
    DEFAULT_HEIGHT,
    check_obstruction,
    count_P,
    enumerate_P,
    find_obstruction,
    search_relation,
)
from .family import (
    DiophFamily,
    base,
    check_witness,
    full_space,
    intersect,
    power,
    product,
    projection,
    rational_image,
    union_many,
)
from .weil import g_a_modulus, weil_restrict_modulus


def _as_params(params, tau=None):
    if isinstance(params, KochenParams):
        return params
    e, f = tau or (1, 1)
    return KochenParams(params, e, f)


def gamma_family(params):
    """The image of the line under gamma: free z, aux x and 1/den."""
    X = MPoly.var(0, 1)
    u = X**params.Q - X
    num = u**params.e
    den = (u * u - 1) ** params.e * params.t
    return rational_image(full_space(1), [(num, den)])


def gamma_witness(x):
    return ([Fraction(x)], [])


def _nested(ws):
    """Witness for power(d, k): left-nested pairs."""
    out = ws[0]
    for w in ws[1:]:
        out = (out, w)
    return out


def kochen_ring_family(params, g):
    """R_{g,t} = { g(gamma(c)) / (1 + t g(gamma(d))) } as a 1-dimensional family."""
    k = g.arity
    if k == 0:
        raise InputError("g needs at least one variable")
    gammas = power(gamma_family(params), 2 * k)
    num = g.remap(list(range(k)), 2 * k)
    den = g.remap([k + i for i in range(k)], 2 * k) * params.t + 1
    return rational_image(gammas, [(num, den)])


def ring_witness(params, rw):
    """Witness tree for R_{g,t} from a rings.RWitness."""
    args = list(rw.u) + list(rw.w)
    values = [gamma_eval(params, c) for c in args]
    return (values, _nested([gamma_witness(c) for c in args]))


def relation_family(ring, m):
    """{x : x^m + r_{m-1} x^{m-1} + ... + r_0 = 0 for some r_i in the 1-dimensional ring family}."""
    line = full_space(1)
    box = product(line, power(ring, m)) if m > 1 else product(line, ring)
    X = [MPoly.var(i, 1 + m) for i in range(1 + m)]
    rel = X[0] ** m
    for i in range(m):
        rel = rel + X[i + 1] * X[0] ** i
    return projection(intersect(box, base(1 + m, 0, [rel])), [0])


def relation_witness(x, coeff_witnesses):
    """coeff_witnesses: [(r_i, ring witness tree)] for i = 0..m-1."""
    rs = [r for r, _ in coeff_witnesses]
    subs = [w for _, w in coeff_witnesses]
    inner = ([], _nested(subs))
    return ([Fraction(x)] + rs, (inner, []))


def compile_R_family(params, n, tau=None, budget=None):
    """The 1-dimensional family of R_{p,n}: union over t, g in P_{p,n} and m <= n."""
    base_params = _as_params(params, tau).with_sign(1)
    if n < 1:
        raise InputError("n must be at least 1")
    count = count_P(n, base_params.p) * 2 * n
    require_budget(count * 50, f"compiling {count} branches", budget)
    polys = enumerate_P(base_params, n, budget)
    branches = []
    labels = []
    for sign in (1, -1):
        pr = base_params.with_sign(sign)
        for g in polys:
            ring = kochen_ring_family(pr, g)
            for m in range(1, n + 1):
                branches.append(relation_family(ring, m))
                labels.append((pr, g, m))
    fam = union_many(branches)
    meta = {"kind": "R", "p": base_params.p, "tau": base_params.tau, "n": n, "branches": labels}
    return DiophFamily(fam.n, fam.m, fam.polys, origin=fam.origin, meta=meta)


@dataclass
class FamilyVerdict:
    verdict: str
    branch: int = None
    aux: list = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        out = {"verdict": self.verdict}
        out.update(self.details)
        return out


def r_family_member(D, x, height=DEFAULT_HEIGHT):
    """Bounded membership of a rational x in a compiled R family, with exact verification."""
    if not D.meta or D.meta.get("kind") != "R":
        raise InputError("not a compiled R family")
    x = Fraction(x)
    n = D.meta["n"]
    labels = D.meta["branches"]
    obstructions = []
    seen = set()
    for pr, g, _ in labels:
        if (pr.t, g) in seen:
            continue
        seen.add((pr.t, g))
        obs = find_obstruction(pr, g, x)
        if obs is not None:
            check_obstruction(pr, g, x, obs)
            obstructions.append(obs)
            continue
        rel = search_relation(pr, g, x, n, height)
        if rel is None:
            continue
        m = rel.degree
        index = labels.index((pr, g, m))
        from ..rings import check_relation_witness

        check_relation_witness(pr, g, x, rel)
        coeff_ws = [(r, ring_witness(pr, w)) for r, w in zip(rel.coeffs, rel.witnesses)]
        witness = (index, relation_witness(x, coeff_ws))
        aux = check_witness(D, [x], witness)
        details = {
            "t": str(pr.t),
            "g": g.to_json(),
            "m": m,
            "coeffs": [fmt_rat(r) for r in rel.coeffs],
            "aux_count": len(aux),
        }
        return FamilyVerdict("Member", index, aux, details)
    if len(obstructions) == len(seen):
        kinds = sorted({(o["kind"], o.get("ell", D.meta["p"])) for o in obstructions})
        return FamilyVerdict("NonMember", details={"obstructions": [{"kind": k, "prime": q} for k, q in kinds]})
    return FamilyVerdict("Unknown", details={"bounds": {"height": height, "degree": n}})


# -- the holomorphy family over B_a -----------------------------------------


def _crt(residues):
    """y with y = r_i mod phi_i for pairwise coprime phi_i (rational coefficient lists)."""
    y, M = [], [Fraction(1)]
    for r, phi in residues:
        # y' = y + M * k with k = (r - y) * M^{-1} mod phi
        gcd_, s, _ = pext_gcd(pmod(M, phi), phi)
        if gcd_ != [1]:
            raise InvariantViolation("factor moduli are not coprime")
        diff = padd(r, [-c for c in y])
        k = pmod(pmul(diff, s), phi)
        y = padd(y, pmul(M, k))
        M = pmul(M, phi)
        y = pmod(y, M)
    return y


@dataclass
class HolomorphyFamily:
    """The 2-dimensional family {(x, a)} of x in P_{f^l}(B_a), f the R family's polynomials."""

    params: KochenParams
    n_prime: int
    R: DiophFamily
    l: int
    modulus: MPoly

    @property
    def n(self):
        return 2

    def size(self):
        K = self.modulus.degree_in([1])
        return {
            "n": 2,
            "base_polys": len(self.R.polys),
            "base_aux": self.R.m,
            "power": self.l,
            "modulus_degree": K,
            "u_count": K * self.R.m,
        }

    def explicit(self, budget=None):
        """Materialize the restricted system (only sensible for tiny base families)."""
        est = sum(len(f.terms) for f in self.R.polys) * self.l * self.modulus.degree_in([1]) ** 2
        require_budget(est, "explicit holomorphy family", budget)
        f_list = [f**self.l for f in self.R.polys]
        return weil_restrict_modulus(f_list, self.R.n, self.R.m, self.modulus, 1)

    def g_a(self, a):
        return g_a_poly(self.params.p, self.params.tau, a, self.params.p)

    def verify_point(self, x, a, y):
        """f_s(x, y)^l = 0 in B_a for every s; y is a list of coefficient lists in T."""
        B = QAlgebra(self.g_a(a))
        point = [B(Fraction(x))] + [B(c) for c in y]
        one = B.one()
        return all((f.eval(point, one) ** self.l).is_zero() for f in self.R.polys)

    def member(self, x, a, height=DEFAULT_HEIGHT):
        x, a = Fraction(x), Fraction(a)
        g = self.g_a(a)
        _, facs = factor_over_Q(g)
        rational = r_family_member(self.R, x, height)
        if rational.verdict == "Member":
            y = [[c] for c in rational.aux]
            if not self.verify_point(x, a, y):
                raise InvariantViolation("rational witness fails in B_a")
            return FamilyVerdict("Member", details={"route": "rational", "factors": len(facs)})
        field_ws = []
        for phi, _ in facs:
            E, scale = _factor_field(phi)
            bad = _admissible_pole(E, scale, self.params, x)
            if bad is not None:
                return FamilyVerdict(
                    "NonMember",
                    details={"route": "valuation", "factor": [fmt_rat(c) for c in phi], "prime": bad},
                )
            w = _field_witness(self, phi, x)
            if w is None:
                return FamilyVerdict("Unknown", details={"factor": [fmt_rat(c) for c in phi]})
            field_ws.append((w, phi))
        # combine the per-factor aux values by CRT over Q[T]
        y = []
        for j in range(self.R.m):
            y.append(_crt([(list(w[j].coeffs), phi) for w, phi in field_ws]))
        if not self.verify_point(x, a, y):
            raise InvariantViolation("CRT-combined witness fails in B_a")
        return FamilyVerdict("Member", details={"route": "factor fields", "factors": len(facs)})


def _factor_field(phi):
    model, scale = integral_model(phi)
    return NumberField(model, check_irreducible=False), scale


def _admissible_pole(E, scale, params, x):
    """Label of a prime of type <= tau in E where the rational x has negative valuation.

    For rational x, v_P(x) = e(P|p) * v_p(x), so only the types are needed.
    """
    if x == 0 or val_p(x, params.p) >= 0:
        return None
    for P in E.primes_above(params.p):
        if P.e <= params.e and params.f % P.f == 0:
            return P.label()
    return None


def _field_witness(fam, phi, x, pool_height=4):
    """Aux values in E = Q[T]/(phi) placing x in the R family over E, from a small argument pool."""
    E = QAlgebra(phi)
    theta = E.gen()
    one = E.one()
    pool = [E(c) for c in rationals_by_height(pool_height)]
    pool += [theta, -theta, one - theta, theta + 1, theta * 2]
    labels = fam.R.meta["branches"]
    for index, (pr, g, m) in enumerate(labels):
        if m != 1 or g.arity != 1:
            continue
        values = {}
        for u in pool:
            gu = gamma_eval(pr, u)
            if gu is POLE:
                continue
            values.setdefault(g.eval([gu], one), u)
        target = -x
        for b, w in values.items():
            den = b * pr.t + 1
            if den.is_zero():
                continue
            try:
                need = den * target
            except ZeroDivisionError:
                continue
            u = values.get(need)
            if u is None:
                continue
            ring_w = ([gamma_eval(pr, u), gamma_eval(pr, w)], (([u], []), ([w], [])))
            witness = (index, ([one * x, one * target], (([], ring_w), [])))
            try:
                return check_witness(fam.R, [one * x], witness, one)
            except (InvariantViolation, ZeroDivisionError):
                continue
    return None


def compile_holomorphy_family(params, n_prime, tau=None, budget=None):
    params = _as_params(params, tau).with_sign(1)
    R = compile_R_family(params, n_prime, budget=budget)
    l = 2 * params.Q
    G = g_a_modulus(params.p, params.tau, params.p)
    return HolomorphyFamily(params, n_prime, R, l, G)
