from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metabelian import checks
from metabelian.novikov import (
    classify,
    is_basis_monomial,
    left_comb,
    mul_monomials,
    nf_term,
    nov_basis,
    nov_dims,
    nov_lemma_suite,
    nov_mul,
    nov_nf,
    nov_sym_generators,
)
from metabelian.oracle import consequence_basis, dim_multilinear, variety
from metabelian.terms import STAR, STAR_SIG, Permutation, Poly, apply_permutation, enumerate_multilinear, parse_poly, parse_term


def term(text):
    return Poly.term(parse_term(text))


def nf(text):
    return nov_nf(term(text))


def passed(found):
    bad = [c for c in found if not c.passed]
    assert not bad, bad


# -- basis --------------------------------------------------------------------------------

@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 6), (4, 5), (5, 5), (6, 6)])
def test_multilinear_basis_sizes(n, count):
    assert len(nov_basis(n, n, multilinear=True)) == count == nov_dims(n)


def test_degree_four_basis_shape():
    lefts = [t for t in nov_basis(4, 4, True) if classify(t) == "LeftComb4"]
    rights = [t for t in nov_basis(4, 4, True) if classify(t) == "RightComb4"]
    assert len(lefts) == 4 and rights == [parse_term("(x1*(x2*(x3*x4)))")]


def test_repeated_letters_allowed():
    assert nov_basis(2, 1) == [(STAR, 1, 1)]
    assert parse_term("((x2*x1)*x1)") in nov_basis(3, 2)
    assert all(is_basis_monomial(t) for t in nov_basis(5, 2))


def test_classify_rejects_non_basis():
    assert not is_basis_monomial(parse_term("((x1*x3)*x2)"))
    assert not is_basis_monomial(parse_term("(x1*(x2*x3))"))
    with pytest.raises(ValueError):
        classify(parse_term("((x1*x2)*(x3*x4))"))


@pytest.mark.parametrize("n", range(1, 7))
def test_basis_matches_oracle(n):
    assert nov_dims(n) == dim_multilinear(variety("mnov"), n)


# -- normal form ----------------------------------------------------------------------------

def test_nf_examples():
    assert nf("(x1*(x2*x3))") == term("(x2*(x1*x3))")
    assert not nf("(x1*(x2*(x3*(x4*x5))))")
    assert nf("((x1*x3)*x2)") == parse_poly("((x1*x2)*x3) + (x3*(x1*x2)) - (x2*(x1*x3))")
    assert not nf("((x1*x2)*(x3*x4))")


def test_lemma_suite():
    suite = nov_lemma_suite()
    assert len(suite) == 7
    assert all(not value for _, value in suite)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_nf_agrees_with_oracle(n):
    passed(checks.nov_nf_checks(n))


def test_nf_agrees_with_oracle_sampled_at_six():
    passed(checks.nov_nf_checks(6, sample=1500))


def test_basis_is_independent_modulo_consequences():
    for n in range(1, 6):
        passed(checks.nov_basis_checks(n))


@pytest.mark.parametrize("n", [4, 5])
def test_nf_minus_term_is_a_consequence(n):
    basis = consequence_basis(variety("mnov"), n)
    for t in enumerate_multilinear(STAR_SIG, n):
        assert basis.contains(nov_nf(Poly.term(t)) - Poly.term(t))


def test_defining_identities_vanish_on_compound_arguments():
    passed(checks.nov_identity_checks(6))


@st.composite
def star_polys(draw, n):
    pool = enumerate_multilinear(STAR_SIG, n)
    terms = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=5))
    coefs = draw(st.lists(st.fractions(max_denominator=5).filter(bool), min_size=len(terms), max_size=len(terms)))
    return Poly(list(zip(terms, coefs)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(star_polys(n), star_polys(n))), st.fractions(max_denominator=7))
def test_nf_is_idempotent_and_linear(pq, a):
    p, q = pq
    assert nov_nf(nov_nf(p)) == nov_nf(p)
    assert nov_nf(p * a + q) == nov_nf(p) * a + nov_nf(q)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(
    lambda n: st.tuples(st.sampled_from(enumerate_multilinear(STAR_SIG, n)),
                        st.permutations(list(range(1, n + 1))).map(Permutation))))
def test_nf_is_equivariant(args):
    t, sigma = args
    p = Poly.term(t)
    assert nov_nf(apply_permutation(p, sigma)) == nov_nf(apply_permutation(nov_nf(p), sigma))


# -- multiplication ---------------------------------------------------------------------------

def test_mul_examples():
    long = parse_term("((((x1*x2)*x3)*x3)*x4)")
    assert mul_monomials(long, 1) == {parse_term("(((((x1*x1)*x2)*x3)*x3)*x4)"): 1}
    assert mul_monomials(5, long) == {}
    assert nov_mul(term("(x1*x2)"), term("(x3*x4)")) == Poly()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_mul_consistency(n):
    for t in enumerate_multilinear(STAR_SIG, n):
        _, u, v = t
        assert nov_mul(nov_nf(Poly.term(u)), nov_nf(Poly.term(v))) == nov_nf(Poly.term(t))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_table_rows_match_oracle(n):
    passed(checks.nov_table_checks(n))


def test_insertion_keeps_tail_sorted():
    for head in range(1, 4):
        u = left_comb((head, 1, 2, 3, 3))
        for j in range(1, 5):
            (w,) = mul_monomials(u, j)
            assert is_basis_monomial(w)


# -- symmetric generators ------------------------------------------------------------------------

def test_generator_examples():
    gens = dict(nov_sym_generators(3))
    assert gens["p3,1"] == parse_poly("(x2*(x1*x3)) + (x3*(x2*x1)) + (x3*(x1*x2))")
    assert dict(nov_sym_generators(4))["p4,1"] == term("(x1*(x2*(x3*x4)))")
    (label, p5), = nov_sym_generators(5)
    assert label == "p5" and len(p5.terms) == 5
    heads = sorted(_head(t) for t in p5.terms)
    assert heads == [1, 2, 3, 4, 5]


def _head(t):
    while type(t) is not int:
        t = t[1]
    return t


def test_printed_left_comb_sum_is_not_symmetric():
    # the left-comb sum alone; the emitted p3,2 adds the right-comb correction
    xs = (1, 2, 3)
    lefts = Poly([(left_comb((i, a, b)), 1) for i in xs for a, b in combinations([x for x in xs if x != i], 2)])
    swap = Permutation.transposition(3)
    assert nov_nf(apply_permutation(lefts, swap)) != nov_nf(lefts)


@pytest.mark.parametrize("n", range(1, 8))
def test_generators_are_symmetric(n):
    passed(checks.nov_sym_checks(n, oracle=False))


@pytest.mark.parametrize("n", range(1, 7))
def test_generators_span_invariants(n):
    passed(checks.nov_sym_checks(n))


def test_nf_term_caches_are_consistent():
    t = parse_term("(((x2*x1)*x3)*(x1*x1))")
    assert nf_term(t) == {} == nf_term(t)
