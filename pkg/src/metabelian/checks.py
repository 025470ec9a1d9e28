"""Cross-validation suites shared by the ``verify``/``sym`` commands and the tests.

Every suite returns a list of :class:`Check` records instead of raising, so
callers can report each line and decide on an exit status.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, List, NamedTuple

from . import diffcom, lieadm, novikov
from .oracle import (
    JACOBI,
    LEFT_COMMUTATIVE,
    METABELIAN,
    POLARIZED_METABELIAN,
    RIGHT_SYMMETRIC,
    Identity,
    TargetedOrder,
    canonical,
    consequence_basis,
    dim_multilinear,
    eliminate,
    invariant_subspace,
    variety,
)
from .terms import (
    POL_SIG,
    STAR,
    STAR_SIG,
    Permutation,
    Poly,
    add_into,
    apply_permutation,
    degree,
    enumerate_multilinear,
    leaves,
    parse_term,
    substitute,
)

# consequences of the polarized metabelian identities, checked on compound arguments
MLA_DERIVED = (
    "[[[a,b],c],d] - [[[a,b],d],c]",
    "[[{a,b},c],d] - [[{a,b},d],c]",
)
ANTI_COMMUTATIVITY = ("[a,b] + [b,a]", "{a,b} - {b,a}")

ONE = Fraction(1)


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


def _generators(n):
    if n == 1:
        return []
    return [Permutation.transposition(n), Permutation.cycle(n)]


def _splits(n):
    """Ordered pairs of disjoint nonempty letter sets covering 1..n."""
    letters = range(1, n + 1)
    for k in range(1, n):
        for a in combinations(letters, k):
            yield a, tuple(x for x in letters if x not in a)


# -- oracle handles ------------------------------------------------------------------

def nov_oracle(n):
    return consequence_basis(variety("mnov"), n, TargetedOrder.of(novikov.nov_basis(n, n, True)))


def mla_oracle(n):
    return consequence_basis(variety("mlieadm-pol"), n, TargetedOrder.of(lieadm.mla_basis(n, n, True)))


def oracle_column_forms(basis) -> Dict:
    """Reduction of every column term, for fast repeated lookups."""
    return {c: basis.reduce_raw({c: ONE}) for c in basis.order}


# -- free metabelian Novikov -------------------------------------------------------------

def _vanishing(texts, nf_term, basis, max_degree, seed, trials=300):
    """Instances of each identity on random basis arguments; counts nonzero normal forms.

    Argument degrees are drawn first so that every instance fits in ``max_degree``.
    """
    rng = random.Random(seed)
    tried = bad = 0
    for text in texts:
        ident = Identity.parse(text)
        k = ident.arity
        shapes = [ds for ds in product(range(1, max_degree - k + 2), repeat=k) if sum(ds) <= max_degree]
        for _ in range(trials):
            vals = (None,) + tuple(rng.choice(basis(d)) for d in rng.choice(shapes))
            acc = {}
            for t, c in ident.body:
                add_into(acc, nf_term(substitute(t, vals)), c)
            tried += 1
            bad += bool(acc)
    return tried, bad


def nov_identity_checks(max_degree: int = 6) -> List[Check]:
    out = []
    for text, value in novikov.nov_lemma_suite():
        out.append(Check(f"lemma {text} = 0 (nf)", not value, str(value)))
        red = diffcom.metabelian_reduce(diffcom.embed(parse_term(text)))
        out.append(Check(f"lemma {text} = 0 (diff model)", not red, diffcom.format_diff_poly(red)))
    basis = lru_cache(None)(lambda d: novikov.nov_basis(d, 3))
    tried, bad = _vanishing((LEFT_COMMUTATIVE, RIGHT_SYMMETRIC, METABELIAN), novikov.nf_term, basis, max_degree, 1)
    out.append(Check(f"defining identities vanish on basis arguments (total degree <= {max_degree})",
                     bad == 0, f"{tried} instances, {bad} nonzero"))
    return out


def mla_identity_checks(max_degree: int = 6) -> List[Check]:
    basis = lru_cache(None)(lambda d: lieadm.mla_basis(d, 3))
    out = []
    groups = [
        ("anticommutativity", ANTI_COMMUTATIVITY),
        ("Jacobi", (JACOBI,)),
        ("metabelian products", POLARIZED_METABELIAN),
        ("derived right-swap identities", MLA_DERIVED),
    ]
    for i, (name, texts) in enumerate(groups):
        tried, bad = _vanishing(texts, lieadm.nf_term, basis, max_degree, 10 + i)
        out.append(Check(f"{name} vanish on basis arguments (total degree <= {max_degree})",
                         bad == 0, f"{tried} instances, {bad} nonzero"))
    return out


def nov_basis_checks(n: int) -> List[Check]:
    ids = variety("mnov")
    basis = novikov.nov_basis(n, n, True)
    dim = dim_multilinear(ids, n)
    ob = nov_oracle(n)
    return [
        Check(f"|N_{n}| = oracle dim", len(basis) == dim, f"{len(basis)} vs {dim}"),
        Check(f"N_{n} independent modulo consequences", set(ob.free_columns()) == set(basis),
              f"{ob.dim_quotient} free columns"),
        Check(f"diff model dim = {dim}", diffcom.diff_dims(n) == dim, str(diffcom.diff_dims(n))),
    ]


def nov_nf_checks(n: int, sample=None) -> List[Check]:
    ob = nov_oracle(n)
    forms = oracle_column_forms(ob)
    terms = enumerate_multilinear(STAR_SIG, n)
    if sample and len(terms) > sample:
        terms = random.Random(n).sample(terms, sample)
    basis = set(novikov.nov_basis(n, n, True))
    mismatch = unsupported = 0
    for t in terms:
        nf = novikov.nf_term(t)
        if nf != forms[t]:
            mismatch += 1
        if any(b not in basis for b in nf):
            unsupported += 1
    return [
        Check(f"nov_nf = oracle reduce, degree {n}", mismatch == 0, f"{len(terms)} terms, {mismatch} mismatches"),
        Check(f"nov_nf - t is a consequence, degree {n}", mismatch == 0, "equivalent to the line above"),
        Check(f"nov_nf supported on N_{n}", unsupported == 0, f"{unsupported} off-basis"),
    ]


def nov_table_checks(n: int) -> List[Check]:
    """Table products of basis monomials against the oracle reduction of the raw product."""
    ob = nov_oracle(n)
    bad = total = 0
    for a, b in _splits(n):
        for u in [t for t in novikov.nov_basis(len(a), n) if sorted(leaves(t)) == list(a)]:
            for v in [t for t in novikov.nov_basis(len(b), n) if sorted(leaves(t)) == list(b)]:
                total += 1
                if novikov.mul_monomials(u, v) != ob.reduce_raw({(STAR, u, v): ONE}):
                    bad += 1
    out = [Check(f"nov_mul on basis pairs = reduce(raw product), degree {n}", bad == 0,
                 f"{total} products, {bad} mismatches")]
    forms = oracle_column_forms(ob)
    bad = 0
    terms = enumerate_multilinear(STAR_SIG, n)
    for t in terms:
        _, u, v = t
        prod = novikov.nov_mul(Poly._raw(novikov.nf_term(u)), Poly._raw(novikov.nf_term(v)))
        bad += prod.terms != forms[t]
    out.append(Check(f"nov_mul(nf u, nf v) = reduce(u*v), degree {n}", bad == 0,
                     f"{len(terms)} factor pairs, {bad} mismatches"))
    return out


def diffcom_checks(n: int) -> List[Check]:
    terms = enumerate_multilinear(STAR_SIG, n)
    bad = weight = 0
    for t in terms:
        e = diffcom.embed(t)
        if any(diffcom.weight(m) != -1 for m in e):
            weight += 1
        via_nf = diffcom.metabelian_reduce(diffcom.embed_poly(Poly(novikov.nf_term(t))))
        if diffcom.metabelian_reduce(e) != via_nf:
            bad += 1
    return [
        Check(f"embed has weight -1, degree {n}", weight == 0, f"{weight} bad terms"),
        Check(f"reduced embedding factors through nov_nf, degree {n}", bad == 0, f"{bad} mismatches"),
    ]


# -- free metabelian Lie-admissible ----------------------------------------------------------

def mla_basis_checks(n: int) -> List[Check]:
    basis = lieadm.mla_basis(n, n, True)
    dim = dim_multilinear(variety("mlieadm"), n)
    ob = mla_oracle(n)
    return [
        Check(f"|M_{n}| = {dim} (oracle, depolarized)", len(basis) == dim, f"{len(basis)} vs {dim}"),
        Check(f"M_{n} independent modulo consequences", set(ob.free_columns()) == set(basis),
              f"{ob.dim_quotient} free columns"),
    ]


def mla_nf_checks(n: int, sample=None) -> List[Check]:
    ob = mla_oracle(n)
    forms = oracle_column_forms(ob)
    terms = enumerate_multilinear(POL_SIG, n)
    if sample and len(terms) > sample:
        terms = random.Random(n).sample(terms, sample)
    basis = set(lieadm.mla_basis(n, n, True))
    mismatch = unsupported = 0
    for t in terms:
        nf = lieadm.nf_term(t)
        s, u = canonical(t)
        if nf != {k: s * v for k, v in forms[u].items()}:
            mismatch += 1
        if any(b not in basis for b in nf):
            unsupported += 1
    return [
        Check(f"mla_nf = oracle reduce, degree {n}", mismatch == 0, f"{len(terms)} terms, {mismatch} mismatches"),
        Check(f"mla_nf - t is a consequence, degree {n}", mismatch == 0, "equivalent to the line above"),
        Check(f"mla_nf supported on M_{n}", unsupported == 0, f"{unsupported} off-basis"),
    ]


def mla_soundness_checks(n: int, sample=None) -> List[Check]:
    """Checks ``depolarize(mla_nf(t) - t)`` against the single-product oracle."""
    ob = consequence_basis(variety("mlieadm"), n)
    terms = enumerate_multilinear(POL_SIG, n)
    if sample and len(terms) > sample:
        terms = random.Random(n).sample(terms, sample)
    bad = 0
    for t in terms:
        diff = lieadm.mla_nf(Poly.term(t)) - Poly.term(t)
        bad += not ob.contains(lieadm.depolarize(diff))
    return [Check(f"depolarize(mla_nf(t) - t) is a consequence, degree {n}", bad == 0,
                  f"{len(terms)} terms, {bad} failures")]


def mla_table_checks(n: int) -> List[Check]:
    ob = mla_oracle(n)
    by_letters: Dict[tuple, list] = {}
    for d in range(1, n):
        for t in lieadm.mla_basis(d, n):
            ls = tuple(sorted(leaves(t)))
            if len(set(ls)) == d:
                by_letters.setdefault(ls, []).append(t)
    bad = total = 0
    for a, b in _splits(n):
        for u in by_letters.get(a, []):
            for v in by_letters.get(b, []):
                for op in (lieadm.BLACK, lieadm.WHITE):
                    total += 1
                    s, w = canonical((op, u, v))
                    expected = {k: s * c for k, c in ob.reduce_raw({w: ONE}).items()}
                    if lieadm.mul_monomials(u, v, op) != expected:
                        bad += 1
    out = [Check(f"mla_mul on basis pairs = reduce(raw product), degree {n}", bad == 0,
                 f"{total} products, {bad} mismatches")]
    forms = oracle_column_forms(ob)
    bad = 0
    terms = enumerate_multilinear(POL_SIG, n)
    for t in terms:
        op, u, v = t
        prod = lieadm.mla_mul(Poly._raw(lieadm.nf_term(u)), Poly._raw(lieadm.nf_term(v)), op)
        s, w = canonical(t)
        bad += prod.terms != {k: s * c for k, c in forms[w].items()}
    out.append(Check(f"mla_mul(nf u, nf v, op) = reduce(u op v), degree {n}", bad == 0,
                     f"{len(terms)} factor pairs, {bad} mismatches"))
    return out


def mla_component_checks(n: int) -> List[Check]:
    bad = 0
    basis = lieadm.mla_basis(n, n, True)
    for t in basis:
        seq = lieadm.type_sequence(t)
        for i in range(1, n):
            sigma = Permutation.transposition(n, i, i + 1)
            nf = lieadm.mla_nf(apply_permutation(Poly.term(t), sigma))
            if any(lieadm.type_sequence(m) != seq for m in nf.terms):
                bad += 1
    return [Check(f"S_{n} preserves type-sequence components", bad == 0, f"{len(basis)} monomials, {bad} leaks")]


# -- symmetric polynomials -----------------------------------------------------------------------

def nov_sym_checks(n: int, oracle: bool = True) -> List[Check]:
    out = []
    gens = novikov.nov_sym_generators(n)
    for label, p in gens:
        nf = novikov.nov_nf(p)
        inv = all(novikov.nov_nf(apply_permutation(p, g)) == nf for g in _generators(n))
        out.append(Check(f"{label} invariant", inv))
        out.append(Check(f"{label} nonzero", bool(nf)))
    if oracle:
        inv = invariant_subspace(nov_oracle(n))
        images = [novikov.nov_nf(p) for _, p in gens]
        out.append(Check(f"generators span the invariants (dim {len(inv)})",
                         _rank(images) == len(inv) == _rank(images + inv),
                         f"rank {_rank(images)}"))
    return out


def _rank(polys) -> int:
    index = {}
    return eliminate({index.setdefault(t, len(index)): c for t, c in p.terms.items()} for p in polys).rank


def mla_sym_checks(n: int, oracle: bool = True) -> List[Check]:
    out = []
    gens = lieadm.mla_sym_generators(n)
    ob = mla_oracle(n) if oracle else None
    basis = lieadm.mla_basis(n, n, True)
    total = 0
    for seq, label, p in gens:
        nf = lieadm.mla_nf(p)
        inv = all(lieadm.mla_nf(apply_permutation(p, g)) == nf for g in _generators(n))
        out.append(Check(f"{label} invariant", inv))
        out.append(Check(f"{label} nonzero", bool(nf)))
        if ob is not None and n >= 3:
            comp = [b for b in basis if lieadm.type_sequence(b) == seq]
            inv = invariant_subspace(ob, comp)
            total += len(inv)
            out.append(Check(f"{label} component has a 1-dim invariant space", len(inv) == 1, f"dim {len(inv)}"))
            out.append(Check(f"{label} spans its component's invariants", len(inv) == 1 and _rank([nf] + inv) == 1))
    if ob is not None:
        dim = total if n >= 3 else len(invariant_subspace(ob))
        expect = 2 ** (n - 1) if n >= 3 else 1
        out.append(Check(f"total invariant dimension = {expect}", dim == expect, f"oracle: {dim}"))
    return out
