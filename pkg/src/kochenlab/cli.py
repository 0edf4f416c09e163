"""The kochenlab command line.

Every command prints one JSON document (or a flat table with --format
table). Exit codes: 0 success, 2 bad input, 3 resource limits, 4 a failed
consistency check.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .arith.mpoly import MPoly, parse_poly
from .arith.rational import fmt_ext, fmt_rat, is_inf, parse_rat
from .errors import InputError, InvariantViolation, KochenlabError, ResourceError

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_INVARIANT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


# -- argument helpers --------------------------------------------------------


def _tau(text):
    try:
        e, f = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"type must look like E,F, got {text!r}") from exc
    return e, f


def _sign(text):
    if text in ("+", "+1", "1", "plus"):
        return 1
    if text in ("-", "-1", "minus"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be + or -, got {text!r}")


def _rat(text):
    try:
        return parse_rat(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _jsonable(obj):
    """Rationals become strings; ints, bools and strings pass through; no floats anywhere."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return fmt_rat(obj)
    if is_inf(obj):
        return fmt_ext(obj)
    if isinstance(obj, MPoly):
        return obj.format()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=lambda v: json.dumps(v))
        return items
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    if isinstance(obj, float):
        raise InvariantViolation("binary floats are not allowed in output")
    return str(obj)


def _read_family(path):
    from .dioph.family import DiophFamily

    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path) as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read family {path!r}: {exc}") from exc
    return DiophFamily.from_json(data)


def _family_summary(D, full):
    out = {"n": D.n, "m": D.m, "size": _jsonable(D.size())}
    if full:
        out["family"] = D.to_json()
    return out


# -- commands ----------------------------------------------------------------


def cmd_gamma(args):
    from .kochen import POLE, KochenParams, gamma_case, gamma_eval, gamma_valuation_direct

    params = KochenParams(args.p, args.tau[0], args.tau[1], args.t)
    value = gamma_eval(params, args.x)
    if value is POLE:
        return {"value": "pole", "valuation": None, "case": "Pole"}
    direct = gamma_valuation_direct(params, args.x)
    case = gamma_case(params, args.x)
    out = {"value": fmt_rat(value), "valuation": _jsonable(direct), "case": case.tag}
    if args.predict:
        out["predicted"] = _jsonable(case.valuation)
        if case.valuation != direct:
            raise InvariantViolation(f"predicted valuation {case.valuation} but computed {direct}")
    return out


def cmd_rings_member(args):
    from .rings import member_R_pn

    v = member_R_pn(args.p, args.n, args.x, tau=args.tau, height=args.height)
    return v.to_json()


def cmd_rings_pi(args):
    from .rings import pi_lower_bound

    family = None
    if args.family:
        names = [f"X{i + 1}" for i in range(args.n)]
        family = [parse_poly(text, names) for text in args.family]
    cert = pi_lower_bound(args.n, family=family, samples=args.samples, seed=args.seed)
    return cert.to_json()


def cmd_dioph_binary(args):
    from .dioph import family as fam

    d1, d2 = _read_family(args.left), _read_family(args.right)
    D = {"union": fam.union, "intersect": fam.intersect, "product": fam.product}[args.op](d1, d2)
    return _family_summary(D, True)


def cmd_dioph_image(args):
    from .dioph.family import rational_image

    d = _read_family(args.family)
    names = [f"X{i + 1}" for i in range(d.n)]
    if args.den and len(args.den) != len(args.num):
        raise InputError("give one --den per --num or none at all")
    dens = args.den or ["1"] * len(args.num)
    maps = [(parse_poly(g, names), parse_poly(h, names)) for g, h in zip(args.num, dens)]
    return _family_summary(rational_image(d, maps), True)


def cmd_dioph_section(args):
    from .dioph.family import section

    d = _read_family(args.family)
    return _family_summary(section(d, args.values, len(args.values)), True)


def cmd_dioph_weil(args):
    from .dioph.weil import weil_restrict

    d = _read_family(args.family)
    D = weil_restrict(d.polys, d.n, d.m, args.k)
    return _family_summary(D, True)


def cmd_dioph_compile_r(args):
    from .dioph.compile import compile_R_family, r_family_member

    D = compile_R_family(args.p, args.n, tau=args.tau)
    out = _family_summary(D, args.full)
    out["branches"] = len(D.meta["branches"])
    if args.x is not None:
        out["membership"] = r_family_member(D, args.x, height=args.height).to_json()
    return out


def cmd_dioph_compile_holo(args):
    from .dioph.compile import compile_holomorphy_family

    H = compile_holomorphy_family(args.p, args.n_prime, tau=args.tau)
    out = {"p": args.p, "tau": list(args.tau), "n_prime": args.n_prime, "size": _jsonable(H.size())}
    if args.x is not None:
        if args.a is None:
            raise InputError("--x needs --a")
        out["membership"] = _jsonable(H.member(args.x, args.a, height=args.height))
    return out


def cmd_dioph_eval(args):
    from .dioph.oracle import eval_over_Fq

    d = _read_family(args.family)
    pts = sorted(eval_over_Fq(d, args.q))
    return {"q": args.q, "n": d.n, "count": len(pts), "points": [list(map(int, x)) for x in pts]}


def cmd_brauer_symbols(args):
    from .brauer import fmt_place, hilbert_symbol, ramification_set, relevant_places, sort_places

    places = relevant_places(args.a, args.b)
    return {
        "a": fmt_rat(args.a),
        "b": fmt_rat(args.b),
        "symbols": {fmt_place(v): hilbert_symbol(args.a, args.b, v) for v in places},
        "ramification": [fmt_place(v) for v in sort_places(ramification_set(args.a, args.b))],
    }


def cmd_brauer_construct(args):
    from .brauer import construct_AB

    A, B = construct_AB(args.p, args.q1, args.q2)
    return {"A": A.to_json(), "B": B.to_json()}


def cmd_brauer_sample_t(args):
    from .brauer import REAL, QuaternionAlgebra, fmt_place, sample_T, sort_places

    A = QuaternionAlgebra(args.a, args.b)
    T = sample_T(A, args.height)
    ram = A.ramification()
    checked = [] if REAL in ram else [fmt_place(v) for v in sort_places(ram)]
    return {
        "algebra": A.to_json(),
        "height": args.height,
        "count": len(T),
        "checked_primes": checked,
        "elements": [fmt_rat(z) for z in sorted(T)],
    }


def cmd_brauer_prescribe(args):
    from .brauer import brauer_class_prescribe, parse_place

    inv = {}
    for item in args.inv:
        place, _, val = item.partition("=")
        if not val:
            raise InputError(f"invariants look like PLACE=VALUE, got {item!r}")
        inv[parse_place(place)] = parse_rat(val)
    return brauer_class_prescribe(args.ell, inv).to_json()


def _nf(text):
    from .numberfield import NumberField

    return NumberField.parse(text)


def _prime_json(P):
    return {"label": P.label(), "e": P.e, "f": P.f}


def cmd_nf_primes(args):
    L = _nf(args.h)
    primes = L.primes_above(args.p)
    return {
        "h": L.format(),
        "p": args.p,
        "primes": [_prime_json(P) for P in primes],
        "sum_ef": sum(P.e * P.f for P in primes),
    }


def cmd_nf_val(args):
    L = _nf(args.h)
    x = L(args.elem)
    rows = []
    for P in L.primes_above(args.p):
        row = _prime_json(P)
        row["valuation"] = _jsonable(P.val(x))
        rows.append(row)
    return {"h": L.format(), "p": args.p, "elem": args.elem, "primes": rows}


def cmd_nf_kill_check(args):
    from .numberfield import lemma_kill_check

    report = lemma_kill_check(args.p, args.tau, args.a)
    fields = []
    for fr in report["fields"]:
        fields.append({
            "factor": [fmt_rat(c) for c in fr["factor"]],
            "multiplicity": fr["multiplicity"],
            "types": [list(t) for t in fr["types"]],
            "admissible": [list(t) for t in fr["admissible"]],
        })
    return {
        "p": args.p,
        "tau": list(args.tau),
        "a": fmt_rat(args.a),
        "holds": report["left_nonempty"] == report["right_nonempty"],
        "left_nonempty": report["left_nonempty"],
        "right_nonempty": report["right_nonempty"],
        "g_a": [fmt_rat(c) for c in report["g_a"]],
        "fields": fields,
    }


def cmd_verify(args):
    from .verify import SUITES, run_suite

    names = SUITES if args.suite == "all" else (args.suite,)
    suites = []
    for name in names:
        checks = run_suite(name, args.seed)
        suites.append({
            "suite": name,
            "passed": all(c.passed for c in checks),
            "checks": [c.to_json() for c in checks],
        })
    out = {"seed": args.seed, "passed": all(s["passed"] for s in suites), "suites": suites}
    if not out["passed"]:
        out["_exit"] = EXIT_INVARIANT
    return out


# -- parser ------------------------------------------------------------------


def build_parser():
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="kochenlab", description="Kochen operators, holomorphy rings and diophantine families over Q.",
                     formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"kochenlab {__version__}")
    parser.add_argument("--format", choices=("json", "table"), default="json", help="output format")
    parser.add_argument("--budget", type=int, default=None,
                        help="enumeration cap (overrides KOCHENLAB_BUDGET; built-in default 10^7)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(subparsers, name, func, help_text, schema=None):
        p = subparsers.add_parser(name, help=help_text, description=help_text, formatter_class=fmt)
        p.set_defaults(func=func, schema=schema)
        return p

    def kochen_args(p, with_sign=False):
        p.add_argument("--p", type=int, required=True, help="the prime p")
        p.add_argument("--tau", type=_tau, default=(1, 1), help="type E,F")
        if with_sign:
            p.add_argument("--t", type=_sign, default=1, help="uniformizer t = +p or -p")

    p = add(sub, "gamma", cmd_gamma, "evaluate the Kochen operator at a rational", "gamma")
    kochen_args(p, True)
    p.add_argument("--x", type=_rat, required=True, help="rational argument a/b")
    p.add_argument("--predict", action="store_true", help="also report and check the case-formula prediction")

    rings = add(sub, "rings", None, "holomorphy ring membership and lower-bound certificates")
    rsub = rings.add_subparsers(dest="rings_command", required=True, parser_class=_Parser)
    p = add(rsub, "member", cmd_rings_member, "bounded membership test in R_{p,n}", "rings_member")
    kochen_args(p)
    p.add_argument("--n", type=int, required=True, help="level n")
    p.add_argument("--x", type=_rat, required=True, help="rational to test")
    p.add_argument("--height", type=int, default=50, help="height bound for Kochen arguments")
    p = add(rsub, "pi-lower-bound", cmd_rings_pi, "certificate that the Pythagoras number exceeds n", "pi_lower_bound")
    p.add_argument("--n", type=int, required=True, help="level n")
    p.add_argument("--family", nargs="*", default=None,
                   help="explicit polynomials in X1..Xn (default: every polynomial of degree and height <= n)")
    p.add_argument("--samples", type=int, default=1000, help="sampled ring elements")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")

    dioph = add(sub, "dioph", None, "diophantine family combinators, compilers and F_q evaluation")
    dsub = dioph.add_subparsers(dest="dioph_command", required=True, parser_class=_Parser)
    for op in ("union", "intersect", "product"):
        p = add(dsub, op, cmd_dioph_binary, f"{op} of two families given as JSON files", "family")
        p.add_argument("left", help="family JSON file ('-' for stdin)")
        p.add_argument("right", help="family JSON file")
        p.set_defaults(op=op)
    p = add(dsub, "image", cmd_dioph_image, "image under a rational map", "family")
    p.add_argument("family", help="family JSON file")
    p.add_argument("--num", action="append", required=True, help="numerator in X1..Xn (repeat per coordinate)")
    p.add_argument("--den", action="append", default=None, help="denominator (default 1)")
    p = add(dsub, "section", cmd_dioph_section, "fix the last coordinates", "family")
    p.add_argument("family", help="family JSON file")
    p.add_argument("--values", type=_rat, nargs="+", required=True, help="values of the last coordinates")
    p = add(dsub, "weil", cmd_dioph_weil, "Weil restriction along a generic monic modulus of degree k", "family")
    p.add_argument("family", help="family JSON file; its polynomials are restricted")
    p.add_argument("--k", type=int, required=True, help="modulus degree")
    p = add(dsub, "compile-r", cmd_dioph_compile_r, "compile R_{p,n} into one family", "compile_r")
    kochen_args(p)
    p.add_argument("--n", type=int, required=True, help="level n")
    p.add_argument("--x", type=_rat, default=None, help="also test membership of this rational")
    p.add_argument("--height", type=int, default=50, help="witness height bound")
    p.add_argument("--full", action="store_true", help="include the polynomials")
    p = add(dsub, "compile-holo", cmd_dioph_compile_holo, "compile the holomorphy family over the parameter a", "compile_holo")
    kochen_args(p)
    p.add_argument("--n-prime", type=int, required=True, help="level of the ring family")
    p.add_argument("--x", type=_rat, default=None, help="rational x to test")
    p.add_argument("--a", type=_rat, default=None, help="parameter a")
    p.add_argument("--height", type=int, default=50, help="witness height bound")
    p = add(dsub, "eval", cmd_dioph_eval, "points of a family over F_q", "dioph_eval")
    p.add_argument("family", help="family JSON file")
    p.add_argument("--q", type=int, required=True, help="field size (prime power <= 64)")

    brauer = add(sub, "brauer", None, "Hilbert symbols, quaternion algebras and invariant ledgers")
    bsub = brauer.add_subparsers(dest="brauer_command", required=True, parser_class=_Parser)
    p = add(bsub, "symbols", cmd_brauer_symbols, "Hilbert symbols of (a, b) at every relevant place", "brauer_symbols")
    p.add_argument("--a", type=_rat, required=True)
    p.add_argument("--b", type=_rat, required=True)
    p = add(bsub, "construct", cmd_brauer_construct, "algebras ramified exactly at {p, q1} and {p, q2}", "brauer_construct")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q1", type=int, required=True)
    p.add_argument("--q2", type=int, required=True)
    p = add(bsub, "sample-t", cmd_brauer_sample_t, "differences of traces of small norm-one quaternions", "brauer_sample_t")
    p.add_argument("--a", type=_rat, required=True)
    p.add_argument("--b", type=_rat, required=True)
    p.add_argument("--height", type=int, default=5, help="coordinate height bound")
    p = add(bsub, "prescribe", cmd_brauer_prescribe, "validate local invariants and realize them for ell = 2", "brauer_prescribe")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--inv", nargs="*", default=[], help="PLACE=VALUE entries, e.g. 2=1/2 real=1/2")

    nf = add(sub, "nf", None, "primes and valuations in monogenic number fields")
    nsub = nf.add_subparsers(dest="nf_command", required=True, parser_class=_Parser)
    p = add(nsub, "primes", cmd_nf_primes, "primes above p with their types (e, f)", "nf_primes")
    p.add_argument("--h", required=True, help="monic defining polynomial in T, e.g. T^2+1")
    p.add_argument("--p", type=int, required=True)
    p = add(nsub, "val", cmd_nf_val, "valuations of an element at the primes above p", "nf_val")
    p.add_argument("--h", required=True, help="monic defining polynomial in T")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--elem", required=True, help="element as a polynomial in T")
    p = add(nsub, "kill-check", cmd_nf_kill_check, "compare S_p(Q; a) with the factor fields of B_a", "nf_kill_check")
    kochen_args(p)
    p.add_argument("--a", type=_rat, required=True)

    p = add(sub, "verify", cmd_verify, "run the sampled consistency suites", "verify")
    p.add_argument("--suite", choices=("all", "kochen", "rings", "dioph", "brauer", "numberfield"), default="all")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    return parser


# -- output ------------------------------------------------------------------


def _table_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _table_lines(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _table_lines(v, f"{prefix}[{i}]")
    else:
        yield f"{prefix}\t{json.dumps(obj)}"


def render(obj, fmt="json"):
    if fmt == "table":
        return "\n".join(_table_lines(obj))
    return json.dumps(obj, indent=2)


def schema_path(name):
    """Path of the shipped JSON schema for an output kind."""
    return os.path.join(os.path.dirname(__file__), "schemas", f"{name}.json")


def output_schema(argv):
    """Name of the schema that the output of ``argv`` follows."""
    return build_parser().parse_args(argv).schema


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.func is None:
            raise InputError("missing subcommand")
        if args.budget is not None:
            if args.budget < 1:
                raise InputError("--budget must be positive")
            os.environ["KOCHENLAB_BUDGET"] = str(args.budget)
        out = _jsonable(args.func(args))
    except InvariantViolation as exc:
        print(json.dumps({"error": "invariant", "message": str(exc)}), file=sys.stderr)
        return EXIT_INVARIANT
    except ResourceError as exc:
        print(json.dumps({"error": "resource", "message": str(exc)}), file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, KochenlabError, ZeroDivisionError) as exc:
        print(json.dumps({"error": "input", "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    code = out.pop("_exit", EXIT_OK) if isinstance(out, dict) else EXIT_OK
    print(render(out, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
