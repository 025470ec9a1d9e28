import random

import pytest

from metabelian import lieadm, novikov
from metabelian.oracle import (
    JACOBI,
    LEFT_COMMUTATIVE,
    METABELIAN,
    DefaultOrder,
    Identity,
    IdentitySet,
    TargetedOrder,
    consequence_basis,
    dim_multilinear,
    generate_consequences,
    invariant_basis,
    is_consequence,
    parse_identity_file,
    row_reduce,
    variety,
)
from metabelian.terms import (
    POL_SIG,
    STAR,
    STAR_SIG,
    DegreeCapError,
    Permutation,
    Poly,
    apply_permutation,
    parse_poly,
    parse_term,
)


def single(name, *texts):
    return IdentitySet(name, STAR_SIG, tuple(Identity.parse(t) for t in texts))


def term(text):
    return Poly.term(parse_term(text))


def random_permutation(n, rng):
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(images)


# -- generation and elimination ------------------------------------------------------------

def test_metabelian_identity_alone_at_degree_four():
    rows = generate_consequences(single("metabelian", METABELIAN), 4)
    assert row_reduce(rows, DefaultOrder(), 4).rank == 24
    assert {t for r in rows for t in r.terms} == {
        t for t in consequence_basis(single("metabelian", METABELIAN), 4).pivot_columns()
    }


def test_left_commutativity_alone_at_degree_three():
    ids = single("lcom", LEFT_COMMUTATIVE)
    rows = generate_consequences(ids, 3)
    basis = row_reduce(rows, DefaultOrder(), 3)
    assert basis.rank == 3
    assert basis.contains(parse_poly("(x1*(x2*x3)) - (x2*(x1*x3))"))


def test_empty_identity_set():
    ids = IdentitySet("free", STAR_SIG, ())
    assert generate_consequences(ids, 3) == []
    assert dim_multilinear(ids, 3) == 12


def test_row_reduce_examples():
    p = parse_poly("(x1*x2) - (x2*x1)")
    assert row_reduce([p, p * 2], DefaultOrder(), 2).rank == 1
    assert row_reduce([], DefaultOrder(), 2).rank == 0


@pytest.mark.parametrize("name, n", [("mnov", 4), ("mlieadm", 4), ("novikov", 4), ("lieadm", 3), ("mlieadm-pol", 4)])
def test_lifted_rows_match_literal_generation(name, n):
    ids = variety(name)
    literal = row_reduce(generate_consequences(ids, n), DefaultOrder(), n, ids)
    lifted = consequence_basis(ids, n)
    assert literal.rank == lifted.rank
    assert all(lifted.contains(r) for r in literal.rows())


@pytest.mark.parametrize("name, dims", [
    ("novikov", [1, 2, 6, 20, 70]),
    ("mnov", [1, 2, 6, 5, 5]),
    ("lieadm", [1, 2, 11, 101]),
    ("mlieadm", [1, 2, 11, 77, 679]),
    ("mlieadm-pol", [1, 2, 11, 77, 679]),
    ("lieadm-pol", [1, 2, 11, 101]),
])
def test_dimensions(name, dims):
    assert [dim_multilinear(variety(name), n) for n in range(1, len(dims) + 1)] == dims


def test_oracle_degree_cap():
    with pytest.raises(DegreeCapError):
        dim_multilinear(variety("mnov"), 7)


@pytest.mark.parametrize("small, large", [("novikov", "mnov"), ("lieadm", "mlieadm")])
def test_monotonicity(small, large):
    for n in range(1, 5):
        assert dim_multilinear(variety(large), n) <= dim_multilinear(variety(small), n)


# -- reduce and membership ------------------------------------------------------------------------

def test_generating_rows_reduce_to_zero():
    ids = variety("mnov")
    basis = consequence_basis(ids, 4)
    for r in generate_consequences(ids, 4):
        assert not basis.reduce(r)


def test_reduce_examples():
    targeted = consequence_basis(variety("mnov"), 3, TargetedOrder.of(novikov.nov_basis(3, 3, True)))
    assert targeted.reduce(term("(x1*(x2*x3))")) == term("(x2*(x1*x3))")
    for ranking in (DefaultOrder(), TargetedOrder.of(novikov.nov_basis(5, 5, True))):
        assert not consequence_basis(variety("mnov"), 5, ranking).reduce(term("(x1*(x2*(x3*(x4*x5))))"))


def test_is_consequence_examples():
    assert is_consequence(variety("mnov"), term("((x1*x2)*(x3*x4))"))
    assert not is_consequence(variety("mnov"), term("(x1*x2)"))
    jacobi = lieadm.depolarize(parse_poly("[[x1,x2],x3] + [[x2,x3],x1] + [[x3,x1],x2]"))
    assert is_consequence(variety("lieadm"), jacobi)
    with pytest.raises(ValueError):
        is_consequence(variety("mnov"), term("(x1*(x1*x2))"))


@pytest.mark.parametrize("name, n", [("mnov", 4), ("mnov", 5), ("mlieadm", 4), ("mlieadm-pol", 5)])
def test_row_space_is_permutation_stable(name, n):
    basis = consequence_basis(variety(name), n)
    rows = basis.rows()
    rng = random.Random(n)
    for sigma in (Permutation.transposition(n), Permutation.cycle(n)):
        for r in rng.sample(rows, min(60, len(rows))):
            assert not basis.reduce(apply_permutation(r, sigma))


@pytest.mark.parametrize("n", [4, 5])
def test_consequences_vanish_under_structured_forms(n):
    for r in generate_consequences(variety("mnov"), n)[:400]:
        assert not novikov.nov_nf(r)
    for r in consequence_basis(variety("mlieadm-pol"), n).rows()[:400]:
        assert not lieadm.mla_nf(r)


def test_reduce_is_deterministic():
    a = consequence_basis.__wrapped__(variety("mlieadm"), 4).reduce(term("(((x1*x2)*x3)*x4)"))
    b = consequence_basis.__wrapped__(variety("mlieadm"), 4).reduce(term("(((x1*x2)*x3)*x4)"))
    assert a == b and str(a) == str(b)


# -- invariants ----------------------------------------------------------------------------------

def test_invariant_examples():
    assert len(invariant_basis(variety("mnov"), 3)) == 2
    (v,) = invariant_basis(variety("mnov"), 2)
    assert v[(STAR, 1, 2)] == v[(STAR, 2, 1)] != 0
    (w,) = invariant_basis(variety("mlieadm-pol"), 2)
    assert set(w.terms) == {parse_term("{x1,x2}")}


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 1), (3, 2), (4, 2), (5, 1)])
def test_mnov_invariant_dimensions(n, expected):
    assert len(invariant_basis(variety("mnov"), n)) == expected


@pytest.mark.parametrize("name, n", [("mnov", 4), ("mlieadm-pol", 4)])
def test_invariant_vectors_are_fixed(name, n):
    basis = consequence_basis(variety(name), n)
    rng = random.Random(7)
    for v in invariant_basis(variety(name), n):
        for _ in range(50):
            sigma = random_permutation(n, rng)
            assert basis.reduce(apply_permutation(v, sigma)) == basis.reduce(v)


def test_identity_files():
    ids = parse_identity_file("# comment\n\n((a*b)*(c*d))\n(a*(b*c)) - (b*(a*c))\n")
    assert [i.arity for i in ids.identities] == [4, 3]
    assert ids.signature == STAR_SIG
    assert parse_identity_file(JACOBI).signature == POL_SIG
    with pytest.raises(ValueError):
        parse_identity_file("(a*(a*b))")
