"""Exact computer algebra for free metabelian Novikov and Lie-admissible algebras."""

from .diffcom import diff_dims, embed, metabelian_reduce
from .lieadm import mla_basis, mla_dims, mla_mul, mla_nf, mla_sym_generators, mlie_nf
from .novikov import nov_basis, nov_dims, nov_lemma_suite, nov_mul, nov_nf, nov_sym_generators
from .oracle import (
    consequence_basis,
    dim_multilinear,
    invariant_basis,
    is_consequence,
    variety,
)
from .terms import Permutation, Poly, apply_permutation, format_term, parse_poly, parse_term

__all__ = [
    "Permutation",
    "Poly",
    "apply_permutation",
    "consequence_basis",
    "diff_dims",
    "dim_multilinear",
    "embed",
    "format_term",
    "invariant_basis",
    "is_consequence",
    "metabelian_reduce",
    "mla_basis",
    "mla_dims",
    "mla_mul",
    "mla_nf",
    "mla_sym_generators",
    "mlie_nf",
    "nov_basis",
    "nov_dims",
    "nov_lemma_suite",
    "nov_mul",
    "nov_nf",
    "nov_sym_generators",
    "parse_poly",
    "parse_term",
    "variety",
]
