"""Exact arithmetic substrate: rationals, valuations, polynomials, factorization."""

from .factor import factor_mod_p, factor_over_Q
from .mpoly import MPoly, parse_poly
from .primes import dirichlet_prime, is_prime, next_prime, prime_factors
from .qalgebra import QAlgebra, QElem
from .rational import (
    INF,
    FpElem,
    Rat,
    fmt_ext,
    fmt_rat,
    height_rat,
    is_inf,
    parse_rat,
    rationals_by_height,
    residue_p,
    val_p,
)
from .ratfunc import RatFunc


def height_poly(g):
    return g.height()


def total_degree(g):
    return g.total_degree()


__all__ = [
    "INF",
    "FpElem",
    "MPoly",
    "QAlgebra",
    "QElem",
    "Rat",
    "RatFunc",
    "dirichlet_prime",
    "factor_mod_p",
    "factor_over_Q",
    "fmt_ext",
    "fmt_rat",
    "height_poly",
    "height_rat",
    "is_inf",
    "is_prime",
    "next_prime",
    "parse_poly",
    "parse_rat",
    "prime_factors",
    "rationals_by_height",
    "residue_p",
    "total_degree",
    "val_p",
]
