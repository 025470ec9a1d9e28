"""Brute-force ground truth for varieties defined by multilinear identities.

For a degree ``n`` the oracle spans the multilinear consequence space of an
identity set, brings it to reduced row-echelon form over the rationals and
answers dimension, membership, reduction and invariant-subspace queries.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .terms import (
    BRACE,
    BRACKET,
    POL_SIG,
    STAR,
    STAR_SIG,
    DegreeCapError,
    Permutation,
    Poly,
    Term,
    TermError,
    check_cap,
    degree,
    leaves,
    multilinear_count,
    parse_poly,
    permute_term,
    relabel,
    signature_of,
    term_key,
)

HOLE = 0
ORACLE_DEGREE_CAP = 6


# -- identities ----------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    """A multilinear identity ``body = 0``; leaves of ``body`` are slots 1..arity."""

    body: Tuple[Tuple[Term, Fraction], ...]
    arity: int

    @classmethod
    def from_poly(cls, p: Poly) -> "Identity":
        if not p:
            raise TermError("identity body must be nonzero")
        arity = None
        for t, _ in p.items():
            ls = leaves(t)
            if sorted(ls) != list(range(1, len(ls) + 1)):
                raise TermError(f"identity term is not multilinear in its slots: {t}")
            if arity is None:
                arity = len(ls)
            elif arity != len(ls):
                raise TermError("identity terms have different degrees")
        return cls(tuple(p.items()), arity)

    @classmethod
    def parse(cls, text: str) -> "Identity":
        return cls.from_poly(parse_poly(text, slots=True))

    @property
    def poly(self) -> Poly:
        return Poly(dict(self.body))

    @property
    def signature(self) -> frozenset:
        sig = frozenset()
        for t, _ in self.body:
            sig = sig | signature_of(t)
        return sig


@dataclass(frozen=True)
class IdentitySet:
    """A named list of identities over one signature.

    With ``symmetric_ops`` the commutator is antisymmetric and the
    anticommutator symmetric by construction: columns are canonical terms
    and every polynomial is canonicalized before use.
    """

    name: str
    signature: frozenset
    identities: Tuple[Identity, ...]
    symmetric_ops: bool = False

    def __post_init__(self):
        for ident in self.identities:
            if ident.signature and not ident.signature <= self.signature:
                raise TermError(f"identity uses ops outside the signature of {self.name}")
        if self.symmetric_ops and self.signature != POL_SIG:
            raise ValueError("symmetric_ops requires the bracket/brace signature")

    @property
    def max_arity(self):
        return max((i.arity for i in self.identities), default=1)

    @property
    def min_arity(self):
        return min((i.arity for i in self.identities), default=1)


def parse_identity_file(text: str, name: str = "custom") -> IdentitySet:
    """One identity per line over slots a..h; ``#`` starts a comment line."""
    idents = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            idents.append(Identity.parse(line))
        except TermError as exc:
            raise TermError(f"line {lineno}: {exc}") from None
    sigs = {i.signature for i in idents} - {frozenset()}
    if len(sigs) > 1:
        raise TermError("identities mix '*' with brackets/braces")
    sig = sigs.pop() if sigs else STAR_SIG
    return IdentitySet(name, sig, tuple(idents))


LEFT_COMMUTATIVE = "(a*(b*c)) - (b*(a*c))"
RIGHT_SYMMETRIC = "((a*b)*c) - (a*(b*c)) - ((a*c)*b) + (a*(c*b))"
METABELIAN = "((a*b)*(c*d))"
LIE_ADMISSIBLE = (
    "((a*b)*c) - ((b*a)*c) - (c*(a*b)) + (c*(b*a)) + ((b*c)*a) - ((c*b)*a)"
    " - (a*(b*c)) + (a*(c*b)) + ((c*a)*b) - ((a*c)*b) - (b*(c*a)) + (b*(a*c))"
)
JACOBI = "[[a,b],c] + [[b,c],a] + [[c,a],b]"
POLARIZED_METABELIAN = (
    "[[a,b],[c,d]]",
    "[[a,b],{c,d}]",
    "[{a,b},{c,d}]",
    "{{a,b},{c,d}}",
    "{{a,b},[c,d]}",
    "{[a,b],[c,d]}",
)


def _set(name, sig, texts, symmetric=False):
    return IdentitySet(name, sig, tuple(Identity.parse(t) for t in texts), symmetric)


VARIETIES: Dict[str, IdentitySet] = {
    "novikov": _set("novikov", STAR_SIG, [LEFT_COMMUTATIVE, RIGHT_SYMMETRIC]),
    "mnov": _set("mnov", STAR_SIG, [LEFT_COMMUTATIVE, RIGHT_SYMMETRIC, METABELIAN]),
    "lieadm": _set("lieadm", STAR_SIG, [LIE_ADMISSIBLE]),
    "mlieadm": _set("mlieadm", STAR_SIG, [LIE_ADMISSIBLE, METABELIAN]),
    # polarized presentations; (anti)commutativity lives in the column space
    "lieadm-pol": _set("lieadm-pol", POL_SIG, [JACOBI], symmetric=True),
    "mlieadm-pol": _set("mlieadm-pol", POL_SIG, [JACOBI, *POLARIZED_METABELIAN], symmetric=True),
}


def variety(name: str) -> IdentitySet:
    try:
        return VARIETIES[name]
    except KeyError:
        raise ValueError(f"unknown variety {name!r}; choose from {', '.join(VARIETIES)}") from None


# -- canonical forms for the polarized column space ------------------------------

@lru_cache(maxsize=1 << 20)
def canonical(t: Term) -> Tuple[int, Optional[Term]]:
    """``(sign, term)`` with every node's children in term order.

    A commutator with equal children is zero: returns ``(0, None)``.
    """
    if type(t) is int:
        return 1, t
    op, l, r = t
    sl, l = canonical(l)
    if not sl:
        return 0, None
    sr, r = canonical(r)
    if not sr:
        return 0, None
    sign = sl * sr
    if op == STAR:
        return sign, (op, l, r)
    kl, kr = term_key(l), term_key(r)
    if kl == kr:
        if op == BRACKET:
            return 0, None
        return sign, (op, l, r)
    if kl > kr:
        l, r = r, l
        if op == BRACKET:
            sign = -sign
    return sign, (op, l, r)


def canonicalize(p: Dict[Term, Fraction], ids: IdentitySet) -> Dict[Term, Fraction]:
    if not ids.symmetric_ops:
        return p
    out: Dict[Term, Fraction] = {}
    for t, c in p.items():
        s, u = canonical(t)
        if s:
            v = out.get(u, 0) + s * c
            if v:
                out[u] = v
            else:
                del out[u]
    return out


@lru_cache(maxsize=None)
def _canonical_over(letters: Tuple[int, ...]) -> Tuple[Term, ...]:
    if len(letters) == 1:
        return (letters[0],)
    out = []
    n = len(letters)
    for mask in range(1, (1 << n) - 1):
        a = tuple(letters[i] for i in range(n) if mask >> i & 1)
        b = tuple(letters[i] for i in range(n) if not mask >> i & 1)
        for x in _canonical_over(a):
            kx = term_key(x)
            for y in _canonical_over(b):
                if kx < term_key(y):
                    out.append((BRACKET, x, y))
                    out.append((BRACE, x, y))
    return tuple(out)


def monomials_over(letters: Sequence[int], ids: IdentitySet) -> Tuple[Term, ...]:
    """Column monomials on a letter set (canonical ones when ops are symmetric)."""
    from .terms import multilinear_monomials

    letters = tuple(sorted(letters))
    if ids.symmetric_ops:
        return _canonical_over(letters)
    return multilinear_monomials(letters, ids.signature)


def columns(ids: IdentitySet, n: int) -> List[Term]:
    """All degree-n multilinear column terms, in term order."""
    return sorted(monomials_over(range(1, n + 1), ids), key=term_key)


# -- consequence generation -------------------------------------------------------

def _ordered_partitions(items: Sequence[int], k: int):
    """Ordered partitions of ``items`` into ``k`` nonempty blocks."""
    items = list(items)
    for labels in product(range(k), repeat=len(items)):
        blocks = [[] for _ in range(k)]
        for it, lab in zip(items, labels):
            blocks[lab].append(it)
        if all(blocks):
            yield blocks


def _instances(ident: Identity, letters: Sequence[int], ids: IdentitySet):
    """All substitutions of monomials on a partition of ``letters`` into the slots."""
    for blocks in _ordered_partitions(letters, ident.arity):
        choices = [monomials_over(b, ids) for b in blocks]
        for mons in product(*choices):
            vals = (None,) + mons
            row: Dict[Term, Fraction] = {}
            for t, c in ident.body:
                s = relabel(t, vals)
                v = row.get(s, 0) + c
                if v:
                    row[s] = v
                else:
                    row.pop(s, None)
            if row:
                yield row


def _plug(ctx: Term, filler: Term) -> Term:
    if type(ctx) is int:
        return filler if ctx == HOLE else ctx
    return (ctx[0], _plug(ctx[1], filler), _plug(ctx[2], filler))


def generate_consequences(ids: IdentitySet, n: int, cap: Optional[int] = None) -> List[Poly]:
    """Every context/partition/monomial/identity combination at degree ``n``.

    This is the literal enumeration; duplicates are kept.  Each context is a
    multilinear term over a hole and ``s`` of the variables.
    """
    check_cap(n, ORACLE_DEGREE_CAP if cap is None else cap)
    variables = list(range(1, n + 1))
    out: List[Poly] = []
    ctx_ids = IdentitySet("ctx", ids.signature, ())
    for ident in ids.identities:
        k = ident.arity
        for s in range(0, n - k + 1):
            for ctx_vars in combinations(variables, s):
                rest = [v for v in variables if v not in ctx_vars]
                contexts = monomials_over((HOLE,) + ctx_vars, ctx_ids)
                inst = list(_instances(ident, rest, ids))
                for ctx in contexts:
                    for row in inst:
                        plugged: Dict[Term, Fraction] = {}
                        for t, c in row.items():
                            u = _plug(ctx, t)
                            plugged[u] = plugged.get(u, 0) + c
                        plugged = canonicalize(plugged, ids)
                        out.append(Poly(plugged))
    return out


def _lifted_rows(ids: IdentitySet, n: int) -> List[Dict[Term, Fraction]]:
    """Spanning rows built from lower-degree echelon bases.

    A consequence with a nontrivial context is ``L op R`` with the hole in
    one factor, so the degree-n space is spanned by the plain substitutions
    plus products of lower-degree consequence bases with monomials.
    """
    rows: List[Dict[Term, Fraction]] = []
    variables = tuple(range(1, n + 1))
    for ident in ids.identities:
        if ident.arity <= n:
            for row in _instances(ident, variables, ids):
                rows.append(canonicalize(row, ids))
    ops = sorted(ids.signature)
    for k in range(ids.min_arity, n):
        base = _basis_rows(ids, k)
        if not base:
            continue
        for a in combinations(variables, k):
            mapping = (0,) + a
            b = tuple(v for v in variables if v not in a)
            moved = [{relabel(t, mapping): c for t, c in r.items()} for r in base]
            mons = monomials_over(b, ids)
            for r in moved:
                for m in mons:
                    for op in ops:
                        left = {(op, t, m): c for t, c in r.items()}
                        rows.append(canonicalize(left, ids))
                        if not ids.symmetric_ops:
                            rows.append({(op, m, t): c for t, c in r.items()})
    return rows


@lru_cache(maxsize=None)
def _basis_rows(ids: IdentitySet, n: int) -> Tuple[Dict[Term, Fraction], ...]:
    basis = consequence_basis(ids, n)
    return tuple(basis.row_polys_raw())


# -- exact sparse elimination --------------------------------------------------------

class Echelon:
    """Incremental reduced row-echelon form over integer column ids.

    Each pivot row has pivot coefficient 1, its pivot is its smallest column,
    and no pivot column occurs in any other row.  The result is the unique
    RREF of the row space for the given column order.
    """

    def __init__(self):
        self.pivots: Dict[int, Dict[int, Fraction]] = {}
        self._occ: Dict[int, set] = defaultdict(set)

    @property
    def rank(self):
        return len(self.pivots)

    def reduce_vec(self, vec: Dict[int, Fraction]) -> Dict[int, Fraction]:
        r = dict(vec)
        pivots = self.pivots
        for c in [c for c in r if c in pivots]:
            a = r.pop(c)
            for cc, v in pivots[c].items():
                if cc == c:
                    continue
                w = r.get(cc, 0) - a * v
                if w:
                    r[cc] = w
                else:
                    del r[cc]
        return r

    def add(self, vec: Dict[int, Fraction]) -> bool:
        r = self.reduce_vec(vec)
        if not r:
            return False
        p = min(r)
        inv = 1 / Fraction(r[p])
        if inv != 1:
            r = {c: v * inv for c, v in r.items()}
        occ = self._occ
        pivots = self.pivots
        for q in occ.pop(p, ()):
            qrow = pivots[q]
            a = qrow.pop(p)
            for cc, v in r.items():
                if cc == p:
                    continue
                w = qrow.get(cc, 0) - a * v
                if w:
                    if cc not in qrow:
                        occ[cc].add(q)
                    qrow[cc] = w
                else:
                    if cc in qrow:
                        del qrow[cc]
                        occ[cc].discard(q)
        pivots[p] = r
        for cc in r:
            if cc != p:
                occ[cc].add(p)
        return True


def eliminate(rows: Iterable[Dict[int, Fraction]]) -> Echelon:
    """Row-reduce integer-keyed sparse rows.

    Single-entry rows are applied first: they zero their column outright,
    which for metabelian identities removes most of the matrix cheaply.
    """
    rows = [r for r in rows if r]
    dead: set = set()
    changed = True
    while changed:
        changed = False
        keep = []
        for r in rows:
            if dead and not dead.isdisjoint(r):
                r = {c: v for c, v in r.items() if c not in dead}
            if len(r) == 1:
                dead.update(r)
                changed = True
            elif r:
                keep.append(r)
        rows = keep
    ech = Echelon()
    for c in sorted(dead):
        ech.pivots[c] = {c: Fraction(1)}
    for r in rows:
        ech.add(r)
    return ech


@dataclass(frozen=True)
class DefaultOrder:
    pass


@dataclass(frozen=True)
class TargetedOrder:
    """Ranks every non-preferred column before every preferred one."""

    preferred: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, terms: Iterable[Term]) -> "TargetedOrder":
        return cls(frozenset(terms))


def rank_columns(cols: Sequence[Term], ranking) -> List[Term]:
    cols = sorted(cols, key=term_key)
    if isinstance(ranking, TargetedOrder):
        pref = ranking.preferred
        return [c for c in cols if c not in pref] + [c for c in cols if c in pref]
    return cols


class ConsequenceBasis:
    """Reduced echelon basis of the degree-n consequence space."""

    def __init__(self, ids: IdentitySet, n: int, order: List[Term], ech: Echelon):
        self.ids = ids
        self.n = n
        self.order = order
        self.index = {t: i for i, t in enumerate(order)}
        self.ech = ech

    @property
    def rank(self) -> int:
        return self.ech.rank

    @property
    def dim_quotient(self) -> int:
        return len(self.order) - self.ech.rank

    def free_columns(self) -> List[Term]:
        piv = self.ech.pivots
        return [t for i, t in enumerate(self.order) if i not in piv]

    def pivot_columns(self) -> List[Term]:
        return [self.order[i] for i in sorted(self.ech.pivots)]

    def row_polys_raw(self) -> List[Dict[Term, Fraction]]:
        order = self.order
        return [{order[c]: v for c, v in row.items()} for _, row in sorted(self.ech.pivots.items())]

    def rows(self) -> List[Poly]:
        return [Poly(r) for r in self.row_polys_raw()]

    def _vec(self, p: Dict[Term, Fraction]) -> Dict[int, Fraction]:
        p = canonicalize(p, self.ids)
        out = {}
        for t, c in p.items():
            try:
                out[self.index[t]] = c
            except KeyError:
                raise ValueError(f"term {t!r} is not a degree-{self.n} multilinear column") from None
        return out

    def reduce_raw(self, p: Dict[Term, Fraction]) -> Dict[Term, Fraction]:
        r = self.ech.reduce_vec(self._vec(p))
        order = self.order
        return {order[c]: v for c, v in r.items()}

    def reduce(self, p: Poly) -> Poly:
        """Canonical representative of ``p`` modulo the consequence space."""
        return Poly(self.reduce_raw(p.terms))

    def contains(self, p: Poly) -> bool:
        return not self.ech.reduce_vec(self._vec(p.terms))

    def coordinates(self, p: Poly) -> Dict[Term, Fraction]:
        """Coefficients of ``reduce(p)`` on the free columns."""
        return self.reduce_raw(p.terms)


def row_reduce(rows: Iterable[Poly], ranking, n: int, ids: Optional[IdentitySet] = None) -> ConsequenceBasis:
    rows = [r.terms if isinstance(r, Poly) else r for r in rows]
    if ids is None:
        sig = frozenset()
        for r in rows:
            for t in r:
                sig |= signature_of(t)
        ids = IdentitySet("rows", sig or STAR_SIG, ())
    for r in rows:
        for t in r:
            if degree(t) != n:
                raise ValueError(f"row term of degree {degree(t)} in a degree-{n} reduction")
    order = rank_columns(columns(ids, n), ranking)
    index = {t: i for i, t in enumerate(order)}
    vecs = []
    for r in rows:
        r = canonicalize(r, ids)
        vecs.append({index[t]: Fraction(c) for t, c in r.items()})
    return ConsequenceBasis(ids, n, order, eliminate(vecs))


@lru_cache(maxsize=None)
def consequence_basis(ids: IdentitySet, n: int, ranking=DefaultOrder(), cap: Optional[int] = None) -> ConsequenceBasis:
    """Echelon basis of the degree-n consequence space (lifted construction)."""
    if n < 1:
        raise ValueError("degree must be positive")
    check_cap(n, ORACLE_DEGREE_CAP if cap is None else cap)
    if not isinstance(ranking, DefaultOrder):
        base = consequence_basis(ids, n, DefaultOrder(), cap)
        return row_reduce(base.row_polys_raw(), ranking, n, ids)
    return row_reduce(_lifted_rows(ids, n), ranking, n, ids)


def dim_multilinear(ids: IdentitySet, n: int, cap: Optional[int] = None) -> int:
    """Dimension of the degree-n multilinear component of the free algebra."""
    total = len(columns(ids, n)) if ids.symmetric_ops else multilinear_count(ids.signature, n)
    return total - consequence_basis(ids, n, DefaultOrder(), cap).rank


def reduce(basis: ConsequenceBasis, p: Poly) -> Poly:
    return basis.reduce(p)


def _degree_of(p: Poly) -> int:
    degs = p.degrees()
    if len(degs) != 1:
        raise ValueError("polynomial must be homogeneous and nonzero")
    return degs.pop()


def is_consequence(ids: IdentitySet, p: Poly, cap: Optional[int] = None) -> bool:
    if not p:
        return True
    n = _degree_of(p)
    for t in p.terms:
        if sorted(leaves(t)) != list(range(1, n + 1)):
            raise ValueError("is_consequence needs a multilinear polynomial in x1..xn")
    return consequence_basis(ids, n, DefaultOrder(), cap).contains(p)


# -- invariants -------------------------------------------------------------------------

def act_on_quotient(basis: ConsequenceBasis, sigma: Permutation, cols: Optional[List[Term]] = None):
    """Matrix of ``sigma`` on the quotient, as {free col: {free col: coef}} (column images)."""
    cols = basis.free_columns() if cols is None else cols
    out = {}
    for f in cols:
        out[f] = basis.reduce_raw({permute_term(f, sigma): Fraction(1)})
    return out


def kernel(rows: List[Dict[int, Fraction]], nvars: int) -> List[Dict[int, Fraction]]:
    """Basis of ``{v : row . v = 0 for all rows}``; one vector per free variable."""
    ech = eliminate(rows)
    piv = ech.pivots
    basis = []
    for f in range(nvars):
        if f in piv:
            continue
        v = {f: Fraction(1)}
        for p, row in piv.items():
            a = row.get(f)
            if a:
                v[p] = -a
        basis.append(v)
    return basis


def invariant_subspace(basis: ConsequenceBasis, cols: Optional[List[Term]] = None) -> List[Poly]:
    """Vectors in span(cols) of the quotient fixed by (1 2) and the n-cycle.

    ``cols`` must span an S_n-stable subspace of free columns; by default all.
    """
    n = basis.n
    cols = basis.free_columns() if cols is None else cols
    pos = {t: i for i, t in enumerate(cols)}
    gens = [Permutation.identity(1)] if n == 1 else [Permutation.transposition(n), Permutation.cycle(n)]
    equations: List[Dict[int, Fraction]] = []
    for sigma in gens:
        images = act_on_quotient(basis, sigma, cols)
        # (M - I) v = 0, one equation per output coordinate
        eq = defaultdict(dict)
        for f, img in images.items():
            j = pos[f]
            for g, c in img.items():
                if g not in pos:
                    raise ValueError("column set is not stable under the group action")
                i = pos[g]
                eq[i][j] = eq[i].get(j, 0) + c
            eq[j][j] = eq[j].get(j, 0) - 1
        for row in eq.values():
            row = {k: v for k, v in row.items() if v}
            if row:
                equations.append(row)
    return [Poly({cols[i]: c for i, c in v.items()}) for v in kernel(equations, len(cols))]


def invariant_basis(ids: IdentitySet, n: int, ranking=DefaultOrder(), cap: Optional[int] = None) -> List[Poly]:
    """Basis of the S_n-fixed subspace of the degree-n multilinear quotient."""
    return invariant_subspace(consequence_basis(ids, n, ranking, cap))
