"""The free metabelian Lie-admissible algebra in commutator/anticommutator form.

Basis monomials are right-normed two-coloured trees
``x_{i1} *1 (x_{i2} *2 (... (x_{i(n-1)} *(n-1) x_{in})))``, each ``*`` a
commutator ``[,]`` (black) or an anticommutator ``{,}`` (white), subject to

1. every maximal black run not reaching the last vertex has weakly
   decreasing leaves;
2. if the last vertex is white, ``i(n-1) <= in``;
3. a trailing black run of length > 2 has ``ik >= ... >= i(n-1) < in``;
4. a trailing black run of length 1 is ``[a, b]`` with ``a < b``, of length 2
   is ``[a, [b, c]]`` with ``b < c`` and ``a <= c``.

Normal forms are computed by normalizing factors and multiplying basis
monomials.  Every product reduces to prepending one generator to a basis
monomial, because products of two compound elements vanish.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Dict, List, NamedTuple, Optional, Tuple

from .oracle import canonical
from .terms import BRACE, BRACKET, STAR, Poly, Term, add_into, degree, leaves, term_key

ONE = Fraction(1)
HALF = Fraction(1, 2)

BLACK = BRACKET
WHITE = BRACE
_GLYPH = {BLACK: "•", WHITE: "○"}


# -- polarization ----------------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def _polarize(t: Term) -> Tuple[Tuple[Term, Fraction], ...]:
    if type(t) is int:
        return ((t, ONE),)
    if t[0] != STAR:
        raise ValueError("polarize takes '*' terms")
    acc: Dict[Term, Fraction] = {}
    for a, ca in _polarize(t[1]):
        for b, cb in _polarize(t[2]):
            c = ca * cb * HALF
            for op in (BRACKET, BRACE):
                s, u = canonical((op, a, b))
                if s:
                    add_into(acc, {u: s * c})
    return tuple(acc.items())


def polarize(p: Poly) -> Poly:
    """Rewrite ``uv`` as ``1/2 [u,v] + 1/2 {u,v}`` throughout.

    Output terms are canonical: children in term order, commutators signed.
    """
    acc: Dict[Term, Fraction] = {}
    for t, c in p.terms.items():
        add_into(acc, dict(_polarize(t)), c)
    return Poly._raw(acc)


@lru_cache(maxsize=1 << 18)
def _depolarize(t: Term) -> Tuple[Tuple[Term, Fraction], ...]:
    if type(t) is int:
        return ((t, ONE),)
    op, l, r = t
    if op == STAR:
        raise ValueError("depolarize takes bracket/brace terms")
    sign = -1 if op == BRACKET else 1
    acc: Dict[Term, Fraction] = {}
    for a, ca in _depolarize(l):
        for b, cb in _depolarize(r):
            c = ca * cb
            add_into(acc, {(STAR, a, b): c})
            add_into(acc, {(STAR, b, a): c * sign})
    return tuple(acc.items())


def depolarize(p: Poly) -> Poly:
    """``[u,v] -> uv - vu`` and ``{u,v} -> uv + vu`` throughout."""
    acc: Dict[Term, Fraction] = {}
    for t, c in p.terms.items():
        add_into(acc, dict(_depolarize(t)), c)
    return Poly._raw(acc)


# -- tree monomials -----------------------------------------------------------------------

class TreeMonomial(NamedTuple):
    seq: Tuple[str, ...]
    leaves: Tuple[int, ...]

    def term(self) -> Term:
        t = self.leaves[-1]
        for op, x in zip(reversed(self.seq), reversed(self.leaves[:-1])):
            t = (op, x, t)
        return t

    @classmethod
    def of(cls, t: Term) -> "TreeMonomial":
        seq, lv = [], []
        while type(t) is not int:
            op, l, t = t
            if type(l) is not int:
                raise ValueError("term is not right-normed")
            seq.append(op)
            lv.append(l)
        lv.append(t)
        return cls(tuple(seq), tuple(lv))

    def label(self) -> str:
        return "(" + ",".join(_GLYPH[o] for o in self.seq) + ")"


def right_normed(seq, lv) -> Term:
    return TreeMonomial(tuple(seq), tuple(lv)).term()


def is_right_normed(t: Term) -> bool:
    while type(t) is not int:
        if type(t[1]) is not int:
            return False
        t = t[2]
    return True


def type_sequence(t: Term) -> Tuple[str, ...]:
    return TreeMonomial.of(t).seq


def _runs(seq):
    """Maximal runs as ``(op, start, stop)``."""
    out = []
    i = 0
    while i < len(seq):
        j = i
        while j < len(seq) and seq[j] == seq[i]:
            j += 1
        out.append((seq[i], i, j))
        i = j
    return out


def check_conditions(tm: TreeMonomial) -> Tuple[bool, Optional[int]]:
    """``(True, None)`` for a basis monomial, else ``(False, first violated condition)``."""
    seq, lv = tm.seq, tm.leaves
    n = len(lv)
    if len(seq) != n - 1:
        raise ValueError("type sequence must be one shorter than the leaves")
    if n == 1:
        return True, None
    for op, a, b in _runs(seq):
        if op != BLACK or b == n - 1:
            continue
        if any(lv[i] < lv[i + 1] for i in range(a, b - 1)):
            return False, 1
    if seq[-1] == WHITE:
        if lv[-2] > lv[-1]:
            return False, 2
        return True, None
    op, a, b = _runs(seq)[-1]
    r = b - a
    if r > 2:
        if any(lv[i] < lv[i + 1] for i in range(a, n - 2)) or not lv[-2] < lv[-1]:
            return False, 3
    elif r == 1:
        if not lv[-2] < lv[-1]:
            return False, 4
    else:
        x, y, z = lv[-3:]
        if not (y < z and x <= z):
            return False, 4
    return True, None


def is_basis_monomial(t: Term) -> bool:
    if not is_right_normed(t):
        return False
    return check_conditions(TreeMonomial.of(t))[0]


def all_sequences(n: int) -> List[Tuple[str, ...]]:
    """All 2^(n-1) type sequences, black before white at each position."""
    return [tuple(s) for s in product((BLACK, WHITE), repeat=n - 1)]


def mla_basis(n: int, m: int, multilinear: bool = False) -> List[Term]:
    """All basis monomials of degree n over x_1..x_m, sorted by term order."""
    if n < 1 or m < 1:
        raise ValueError("degree and alphabet size must be positive")
    if multilinear:
        if m < n:
            return []
        assignments = list(permutations(range(1, n + 1)))
    else:
        assignments = list(product(range(1, m + 1), repeat=n))
    out = []
    for seq in all_sequences(n):
        for lv in assignments:
            tm = TreeMonomial(seq, lv)
            if check_conditions(tm)[0]:
                out.append(tm.term())
    return sorted(out, key=term_key)


def _count_sequence(seq: Tuple[str, ...], n: int) -> int:
    """Multilinear basis monomials of one type sequence, counted without enumeration.

    Leaves split into independent blocks: each black run off the end is a
    set (one order), every white vertex off the end is a single free slot,
    and the trailing block contributes its own count.
    """
    from math import comb, factorial

    if n == 1:
        return 1
    runs = _runs(seq)
    op, a, b = runs[-1]
    if op == WHITE:
        tail_size, tail_count = 2, 1
        body = [(o, s, e) for o, s, e in runs[:-1]] + [(WHITE, a, b - 1)]
    else:
        r = b - a
        tail_size = r + 1
        tail_count = 1 if r == 1 else (2 if r == 2 else r)
        body = runs[:-1]
    blocks = [tail_size]
    for o, s, e in body:
        if e <= s:
            continue
        if o == BLACK:
            blocks.append(e - s)
        else:
            blocks.extend([1] * (e - s))
    ways = factorial(n)
    for k in blocks:
        ways //= factorial(k)
    return ways * tail_count


def mla_dims(n: int) -> int:
    """Number of multilinear basis monomials of degree n (no linear algebra)."""
    if n < 1:
        raise ValueError("degree must be positive")
    return sum(1 for _ in _multilinear_basis_iter(n))


def _multilinear_basis_iter(n):
    letters = range(1, n + 1)
    for seq in all_sequences(n):
        for lv in permutations(letters):
            if check_conditions(TreeMonomial(seq, lv))[0]:
                yield seq, lv


# -- the free metabelian Lie algebra -------------------------------------------------------

def _lie_render(prefix: Tuple[int, ...], a: int, b: int) -> Dict[Term, Fraction]:
    """Normal form of ``[p1,[p2,...,[a,b]]]`` where the prefix letters commute."""
    if a == b:
        return {}
    sign = ONE
    if a > b:
        a, b, sign = b, a, -ONE
    if not prefix:
        return {(BRACKET, a, b): sign}
    if len(prefix) == 1:
        (c,) = prefix
        if c <= b:
            return {(BRACKET, c, (BRACKET, a, b)): sign}
        # Jacobi: [c,[a,b]] = -[a,[b,c]] + [b,[a,c]]
        return {
            (BRACKET, a, (BRACKET, b, c)): -sign,
            (BRACKET, b, (BRACKET, a, c)): sign,
        }
    m = min(prefix)
    if m >= a:
        return {right_normed((BRACKET,) * (len(prefix) + 1), sorted(prefix, reverse=True) + [a, b]): sign}
    rest = list(prefix)
    rest.remove(m)
    # m[a,b] = a[m,b] - b[m,a], with the remaining prefix letters commuting past
    acc: Dict[Term, Fraction] = {}
    add_into(acc, _lie_render(tuple(rest + [a]), m, b), sign)
    add_into(acc, _lie_render(tuple(rest + [b]), m, a), -sign)
    return acc


def _lie_parts(tm: TreeMonomial):
    """Split a pure-commutator right-normed monomial into (prefix, a, b)."""
    lv = tm.leaves
    return tuple(lv[:-2]), lv[-2], lv[-1]


# -- multiplication ----------------------------------------------------------------------------

def _prepend(op: str, j: int, v: Term) -> Dict[Term, Fraction]:
    """Normal form of ``x_j op V`` for a basis monomial ``V``."""
    if type(v) is int:
        if op == WHITE:
            return {(WHITE, min(j, v), max(j, v)): ONE}
        if j == v:
            return {}
        return {(BLACK, j, v): ONE} if j < v else {(BLACK, v, j): -ONE}
    if op == WHITE or v[0] == WHITE:
        return {(op, j, v): ONE}
    tm = TreeMonomial.of(v)
    seq, lv = tm.seq, tm.leaves
    r = 0
    while r < len(seq) and seq[r] == BLACK:
        r += 1
    if r < len(seq):
        # black run followed by a white vertex: [a,[b,C]] = [b,[a,C]] for compound C
        run = sorted((j,) + lv[:r], reverse=True)
        return {right_normed((BLACK,) + seq, tuple(run) + lv[r:]): ONE}
    prefix, a, b = _lie_parts(tm)
    return _lie_render((j,) + prefix, a, b)


@lru_cache(maxsize=1 << 18)
def _mul(u: Term, v: Term, op: str) -> Tuple[Tuple[Term, Fraction], ...]:
    du, dv = degree(u), degree(v)
    if du > 1 and dv > 1:
        return ()
    if du == 1:
        return tuple(_prepend(op, u, v).items())
    out = _prepend(op, v, u)
    if op == BLACK:
        return tuple((t, -c) for t, c in out.items())
    return tuple(out.items())


def mul_monomials(u: Term, v: Term, op: str) -> Dict[Term, Fraction]:
    return dict(_mul(u, v, op))


def mla_mul(u: Poly, v: Poly, op: str) -> Poly:
    """Product of two basis polynomials under ``[,]`` (op ``'['``) or ``{,}`` (op ``'{'``)."""
    if op not in (BLACK, WHITE):
        raise ValueError(f"unknown operation {op!r}")
    acc: Dict[Term, Fraction] = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            add_into(acc, dict(_mul(a, b, op)), ca * cb)
    return Poly._raw(acc)


@lru_cache(maxsize=1 << 20)
def _nf_term(t: Term) -> Tuple[Tuple[Term, Fraction], ...]:
    if type(t) is int:
        return ((t, ONE),)
    op = t[0]
    if op == STAR:
        raise ValueError("mla_nf takes bracket/brace terms; polarize first")
    acc: Dict[Term, Fraction] = {}
    for a, ca in _nf_term(t[1]):
        for b, cb in _nf_term(t[2]):
            for m, c in _mul(a, b, op):
                v = acc.get(m, 0) + ca * cb * c
                if v:
                    acc[m] = v
                else:
                    del acc[m]
    return tuple(acc.items())


def nf_term(t: Term) -> Dict[Term, Fraction]:
    return dict(_nf_term(t))


def mla_nf(p: Poly) -> Poly:
    """Normal form in the free metabelian Lie-admissible algebra."""
    acc: Dict[Term, Fraction] = {}
    for t, c in p.terms.items():
        add_into(acc, dict(_nf_term(t)), c)
    return Poly._raw(acc)


def mlie_nf(p: Poly) -> Poly:
    """Normal form of a pure-commutator polynomial in the free metabelian Lie algebra."""
    for t in p.terms:
        if type(t) is not int and not _only_brackets(t):
            raise ValueError("mlie_nf takes commutator-only polynomials")
    return mla_nf(p)


def _only_brackets(t):
    if type(t) is int:
        return True
    return t[0] == BRACKET and _only_brackets(t[1]) and _only_brackets(t[2])


# -- symmetric polynomials ------------------------------------------------------------------------

def _fits_pattern(seq, lv) -> bool:
    n = len(lv)
    runs = _runs(seq)
    for op, a, b in runs[:-1]:
        if op == BLACK and any(lv[i] <= lv[i + 1] for i in range(a, b - 1)):
            return False
    op, a, b = runs[-1]
    if op == WHITE:
        return lv[-2] < lv[-1]
    r = b - a
    if r == 1:
        return lv[-2] < lv[-1]
    # head of the trailing run is free, the remaining tail leaves ascend
    return all(lv[i] < lv[i + 1] for i in range(a + 1, n - 1))


def sym_label(seq, n) -> str:
    return "p(" + ",".join(_GLYPH[o] for o in seq) + f",{n})"


def mla_sym_generators(n: int) -> List[Tuple[Tuple[str, ...], str, Poly]]:
    """One candidate symmetric polynomial per type sequence: ``(seq, label, poly)``."""
    if n < 1:
        raise ValueError("degree must be positive")
    xs = range(1, n + 1)
    if n == 1:
        return [((), "p(1)", Poly({x: ONE for x in xs}))]
    if n == 2:
        return [((WHITE,), "p(2)", Poly({(WHITE, i, j): Fraction(2) for i in xs for j in xs if i < j}))]
    out = []
    for seq in all_sequences(n):
        acc = {}
        for lv in permutations(xs):
            if _fits_pattern(seq, lv):
                acc[right_normed(seq, lv)] = ONE
        out.append((seq, sym_label(seq, n), Poly(acc)))
    return out
