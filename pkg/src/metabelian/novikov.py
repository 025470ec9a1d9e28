"""The free metabelian Novikov algebra in the N-basis.

Basis monomials are plain ``'*'`` terms of the shapes below (``i``, ``j``
are generator indices):

* degree 1, 2: ``x_i`` and ``x_i x_j``
* degree 3: ``(x_a x_b) x_c`` and ``x_c (x_b x_a)`` with ``b <= c``
* degree 4: ``((x_a x_b) x_c) x_d`` with ``b <= c <= d`` and the right comb
  ``x_a (x_b (x_c x_d))`` with ``a <= b <= c <= d``
* degree >= 5: left combs with a free head and a sorted tail.

The normal form is computed innermost first: both factors of a product are
normalized and then multiplied with :func:`mul_monomials`, whose low-degree
rows are the consequences of the defining identities worked out by hand.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Dict, List, Tuple

from .terms import STAR, Poly, Term, add_into, degree, leaves, term_key

ONE = Fraction(1)


def left_comb(letters) -> Term:
    it = iter(letters)
    t = next(it)
    for x in it:
        t = (STAR, t, x)
    return t


def right_comb(letters) -> Term:
    letters = list(letters)
    t = letters[-1]
    for x in reversed(letters[:-1]):
        t = (STAR, x, t)
    return t


def _is_left_comb(t) -> bool:
    while type(t) is not int:
        if type(t[2]) is not int:
            return False
        t = t[1]
    return True


def _is_right_comb(t) -> bool:
    while type(t) is not int:
        if type(t[1]) is not int:
            return False
        t = t[2]
    return True


def classify(t: Term) -> str:
    """Name of the N-basis variant ``t`` belongs to; raises if it is not a basis monomial."""
    d = degree(t)
    if d == 1:
        return "Gen"
    if d == 2:
        if type(t[1]) is int and type(t[2]) is int:
            return "Pair"
    elif d == 3:
        if _is_left_comb(t):
            _, (_, a, b), c = t
            if b <= c:
                return "LeftComb3"
        elif _is_right_comb(t):
            _, c, (_, b, a) = t
            if b <= c:
                return "RightComb3"
    elif d == 4:
        ls = leaves(t)
        if _is_left_comb(t) and ls[1] <= ls[2] <= ls[3]:
            return "LeftComb4"
        if _is_right_comb(t) and ls == sorted(ls):
            return "RightComb4"
    else:
        ls = leaves(t)
        if _is_left_comb(t) and ls[1:] == sorted(ls[1:]):
            return "LeftComb"
    raise ValueError(f"not an N-basis monomial: {t!r}")


def is_basis_monomial(t: Term) -> bool:
    try:
        classify(t)
    except ValueError:
        return False
    return True


def nov_basis(n: int, m: int, multilinear: bool = False) -> List[Term]:
    """The set N_n over x_1..x_m, sorted by term order.

    With ``multilinear`` only monomials using each of x_1..x_n once are kept.
    """
    if n < 1 or m < 1:
        raise ValueError("degree and alphabet size must be positive")
    gens = range(1, m + 1)
    out = []
    if n == 1:
        out = list(gens)
    elif n == 2:
        out = [(STAR, a, b) for a in gens for b in gens]
    elif n == 3:
        for a in gens:
            for b, c in combinations_with_replacement(gens, 2):
                out.append(left_comb((a, b, c)))
                out.append((STAR, c, (STAR, b, a)))
    elif n == 4:
        for a in gens:
            for tail in combinations_with_replacement(gens, 3):
                out.append(left_comb((a,) + tail))
        for js in combinations_with_replacement(gens, 4):
            out.append(right_comb(js))
    else:
        for a in gens:
            for tail in combinations_with_replacement(gens, n - 1):
                out.append(left_comb((a,) + tail))
    if multilinear:
        full = list(range(1, n + 1))
        out = [t for t in out if sorted(leaves(t)) == full]
    return sorted(set(out), key=term_key)


def nov_dims(n: int) -> int:
    return len(nov_basis(n, n, multilinear=True))


# -- multiplication ---------------------------------------------------------------

def _right3(a, b, c) -> Dict[Term, Fraction]:
    """Normal form of ``x_a (x_b x_c)``: left commutativity lets a and b swap."""
    if b <= a:
        return {(STAR, a, (STAR, b, c)): ONE}
    return {(STAR, b, (STAR, a, c)): ONE}


def _insert_tail(head, tail, j) -> Term:
    return left_comb((head,) + tuple(sorted(tail + (j,))))


@lru_cache(maxsize=1 << 16)
def _mul(u: Term, v: Term) -> Tuple[Tuple[Term, Fraction], ...]:
    du, dv = degree(u), degree(v)
    if du > 1 and dv > 1:
        return ()
    if du == 1 and dv == 1:
        return (((STAR, u, v), ONE),)
    if du == 1:
        j = u
        if dv == 2:
            _, a, b = v
            return tuple(_right3(j, a, b).items())
        if dv == 3 and type(v[1]) is int:
            # x_j (x_c (x_b x_a)): right combs of degree 4 are fully symmetric
            return ((right_comb(sorted(leaves(v) + [j])), ONE),)
        # x_j ((ab)c) = (ab)(x_j c) = 0, and x_j * (anything of degree >= 4) = 0
        return ()
    j = v
    if du == 2:
        _, a, b = u
        if b <= j:
            return (((STAR, u, j), ONE),)
        # (ab)j = (aj)b + a(bj) - a(jb)
        acc = {left_comb((a, j, b)): ONE}
        add_into(acc, _right3(a, b, j))
        add_into(acc, _right3(a, j, b), -1)
        return tuple(acc.items())
    if du == 3:
        if type(u[2]) is int:
            ls = leaves(u)
            return ((_insert_tail(ls[0], tuple(ls[1:]), j), ONE),)
        # (x_c (x_b x_a)) x_j = -x_c (x_j (x_b x_a))
        return ((right_comb(sorted(leaves(u) + [j])), -ONE),)
    if _is_left_comb(u):
        ls = leaves(u)
        return ((_insert_tail(ls[0], tuple(ls[1:]), j), ONE),)
    # the degree-4 right comb times a generator vanishes
    return ()


def mul_monomials(u: Term, v: Term) -> Dict[Term, Fraction]:
    """Product of two N-basis monomials, written in the N-basis."""
    return dict(_mul(u, v))


def nov_mul(u: Poly, v: Poly) -> Poly:
    """Bilinear extension of the monomial table."""
    acc: Dict[Term, Fraction] = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            add_into(acc, dict(_mul(a, b)), ca * cb)
    return Poly._raw(acc)


# -- normal form --------------------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def _nf_term(t: Term) -> Tuple[Tuple[Term, Fraction], ...]:
    if type(t) is int:
        return ((t, ONE),)
    if t[0] != STAR:
        raise ValueError("the Novikov normal form takes '*' terms only")
    left = _nf_term(t[1])
    right = _nf_term(t[2])
    acc: Dict[Term, Fraction] = {}
    for a, ca in left:
        for b, cb in right:
            add_into(acc, dict(_mul(a, b)), ca * cb)
    return tuple(acc.items())


def nf_term(t: Term) -> Dict[Term, Fraction]:
    return dict(_nf_term(t))


def nov_nf(p: Poly) -> Poly:
    """Image of ``p`` in the free metabelian Novikov algebra, in the N-basis."""
    acc: Dict[Term, Fraction] = {}
    for t, c in p.terms.items():
        add_into(acc, dict(_nf_term(t)), c)
    return Poly._raw(acc)


# -- identities ------------------------------------------------------------------------

LEMMA_EXPRESSIONS = [
    "(((x1*(x2*x3))*x4)*x5)",
    "((x1*((x2*x3)*x4))*x5)",
    "((x1*(x2*(x3*x4)))*x5)",
    "(x1*(((x2*x3)*x4)*x5))",
    "(x1*((x2*(x3*x4))*x5))",
    "(x1*(x2*((x3*x4)*x5)))",
    "(x1*(x2*(x3*(x4*x5))))",
]


def nov_lemma_suite() -> List[Tuple[str, Poly]]:
    """The seven degree-5 monomials that vanish in the algebra, with their normal forms."""
    from .terms import parse_term

    return [(text, nov_nf(Poly.term(parse_term(text)))) for text in LEMMA_EXPRESSIONS]


# -- symmetric polynomials ------------------------------------------------------------------

def nov_sym_generators(n: int) -> List[Tuple[str, Poly]]:
    """The symmetric generators of the degree-n multilinear part, with labels.

    Each is built from its summation formula over x_1..x_n, keeping the
    multilinear terms only.
    """
    if n < 1:
        raise ValueError("degree must be positive")
    xs = range(1, n + 1)

    def total(terms):
        acc: Dict[Term, Fraction] = {}
        for t in terms:
            acc[t] = acc.get(t, 0) + ONE
        return Poly(acc)

    def others(*used):
        return [x for x in xs if x not in used]

    if n == 1:
        return [("p1", total(xs))]
    if n == 2:
        return [("p2", total((STAR, i, j) for i in xs for j in xs if i != j))]
    if n == 3:
        p31 = total((STAR, j2, (STAR, j1, i)) for i in xs for j1, j2 in combinations(others(i), 2))
        # image of the symmetric sum of x_i''x_j x_k, plus p3,1; the left combs alone are not symmetric
        p32 = total(left_comb((i, j1, j2)) for i in xs for j1, j2 in combinations(others(i), 2))
        p32 = p32 - total((STAR, i, (STAR, j1, j2)) for i in xs for j1, j2 in combinations(others(i), 2)) + p31
        return [("p3,1", p31), ("p3,2", p32)]
    if n == 4:
        p41 = total(right_comb(js) for js in combinations(xs, 4))
        p42 = total(left_comb((i,) + js) for i in xs for js in combinations(others(i), 3))
        return [("p4,1", p41), ("p4,2", p42)]
    return [(f"p{n}", total(left_comb((i,) + js) for i in xs for js in combinations(others(i), n - 1)))]
