"""Diophantine families: combinators, finite-field semantics, Weil restriction and compilers."""

from .family import (
    DiophFamily,
    aux_assignment,
    base,
    check_witness,
    full_space,
    intersect,
    power,
    product,
    projection,
    rational_image,
    rational_points_naive,
    section,
    union,
    union_many,
)
from .finite_field import GF, AlgArray, field
from .oracle import direct_algebra_points, eval_over_Fq
from .weil import g_a_modulus, radical_power_check, weil_points_over_Fq, weil_restrict, weil_restrict_modulus

__all__ = [
    "AlgArray",
    "DiophFamily",
    "GF",
    "aux_assignment",
    "base",
    "check_witness",
    "direct_algebra_points",
    "eval_over_Fq",
    "field",
    "full_space",
    "g_a_modulus",
    "intersect",
    "power",
    "product",
    "projection",
    "radical_power_check",
    "rational_image",
    "rational_points_naive",
    "section",
    "union",
    "union_many",
    "weil_points_over_Fq",
    "weil_restrict",
    "weil_restrict_modulus",
]
