"""Commutative algebra with a derivation, and its metabelian Novikov quotient.

A monomial is a sorted tuple of ``(generator, order)`` factors, where
``order`` counts applications of the derivation.  Polynomials are plain
``dict`` objects from monomials to ``Fraction``.  Novikov terms embed via
``u o v = D(u) v``; every embedded monomial has weight -1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Tuple

from .terms import STAR, Term, add_into, degree

DiffMonomial = Tuple[Tuple[int, int], ...]
DiffPoly = Dict[DiffMonomial, Fraction]

ONE = Fraction(1)


class WeightError(ValueError):
    pass


def monomial(*factors) -> DiffMonomial:
    """``monomial((1, 2), (2, 0))`` is x1''·x2."""
    if not factors:
        raise ValueError("a monomial needs at least one factor")
    for g, d in factors:
        if g < 1 or d < 0:
            raise ValueError(f"bad factor {(g, d)}")
    return tuple(sorted(factors))


def weight(m: DiffMonomial) -> int:
    return sum(d for _, d in m) - len(m)


def times(a: DiffMonomial, b: DiffMonomial) -> DiffMonomial:
    return tuple(sorted(a + b))


def mul(p: DiffPoly, q: DiffPoly) -> DiffPoly:
    acc: DiffPoly = {}
    for a, ca in p.items():
        for b, cb in q.items():
            m = times(a, b)
            v = acc.get(m, 0) + ca * cb
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
    return acc


def derive(p: DiffPoly) -> DiffPoly:
    """Leibniz rule: bump one factor's order, summed over factors."""
    acc: DiffPoly = {}
    for m, c in p.items():
        for i, (g, d) in enumerate(m):
            if i and m[i - 1] == (g, d):
                continue
            mult = sum(1 for f in m if f == (g, d))
            new = tuple(sorted(m[:i] + ((g, d + 1),) + m[i + 1:]))
            v = acc.get(new, 0) + c * mult
            if v:
                acc[new] = v
            else:
                acc.pop(new, None)
    return acc


def circ(u: DiffPoly, v: DiffPoly) -> DiffPoly:
    return mul(derive(u), v)


@lru_cache(maxsize=1 << 16)
def _embed(t: Term) -> Tuple[Tuple[DiffMonomial, Fraction], ...]:
    if type(t) is int:
        return ((((t, 0),), ONE),)
    if t[0] != STAR:
        raise ValueError("only '*' terms embed into the differential model")
    return tuple(circ(dict(_embed(t[1])), dict(_embed(t[2]))).items())


def embed(t: Term) -> DiffPoly:
    return dict(_embed(t))


def embed_poly(p) -> DiffPoly:
    acc: DiffPoly = {}
    for t, c in p.terms.items():
        add_into(acc, embed(t), c)
    return acc


def _canonical_triple_prime(factors) -> DiffMonomial:
    # x'x'x'x monomials are all equal; keep the largest generator unprimed
    gens = sorted(g for g, _ in factors)
    return monomial(*[(g, 1) for g in gens[:-1]], (gens[-1], 0))


def _reduce_monomial(m: DiffMonomial):
    """Returns ``(sign, monomial)`` or ``None`` for zero."""
    n = len(m)
    if n <= 3:
        return 1, m
    if n == 4:
        orders = sorted((d for _, d in m), reverse=True)
        if orders == [3, 0, 0, 0]:
            return 1, m
        if orders == [1, 1, 1, 0]:
            return 1, _canonical_triple_prime(m)
        if orders == [2, 1, 0, 0]:
            # x''_a x'_b x_c x_d = -x'_a x'_b x'_c x_d, promoting the smaller plain factor
            plain = sorted(g for g, d in m if d == 0)
            rest = [(g, 1) for g, d in m if d > 0]
            return -1, _canonical_triple_prime(rest + [(plain[0], 1), (plain[1], 0)])
        raise WeightError(f"unexpected derivative orders {orders}")
    top = max(d for _, d in m)
    if top == n - 1:
        return 1, m
    return None


def metabelian_reduce(p: DiffPoly) -> DiffPoly:
    """Normal form modulo the metabelian relations, weight -1 input only."""
    acc: DiffPoly = {}
    for m, c in p.items():
        if weight(m) != -1:
            raise WeightError(f"monomial {format_monomial(m)} has weight {weight(m)}, expected -1")
        if max(d for _, d in m) > len(m) - 1:
            raise WeightError(f"derivative order too high in {format_monomial(m)}")
        r = _reduce_monomial(m)
        if r is None:
            continue
        s, u = r
        v = acc.get(u, 0) + s * c
        if v:
            acc[u] = v
        else:
            acc.pop(u, None)
    return acc


def weight_minus_one_monomials(n: int):
    """All multilinear weight -1 monomials in x_1..x_n."""
    for orders in product(range(n), repeat=n):
        if sum(orders) == n - 1:
            yield monomial(*zip(range(1, n + 1), orders))


def diff_dims(n: int) -> int:
    """Dimension of the span of reduced multilinear weight -1 monomials."""
    from .oracle import eliminate

    index: Dict[DiffMonomial, int] = {}
    rows = []
    for m in weight_minus_one_monomials(n):
        r = metabelian_reduce({m: ONE})
        rows.append({index.setdefault(k, len(index)): v for k, v in r.items()})
    return eliminate(rows).rank


def format_monomial(m: DiffMonomial) -> str:
    parts = []
    for g, d in m:
        if d <= 3:
            parts.append(f"x{g}" + "'" * d)
        else:
            parts.append(f"x{g}^({d})")
    # highest derivative first reads naturally: x1''·x2·x3
    order = sorted(range(len(m)), key=lambda i: (-m[i][1], m[i][0]))
    return "·".join(parts[i] for i in order)


def format_diff_poly(p: DiffPoly) -> str:
    if not p:
        return "0"
    items = sorted(p.items(), key=lambda kv: (sorted((-d, g) for g, d in kv[0]), kv[0]))
    out = []
    for i, (m, c) in enumerate(items):
        a = abs(c)
        coef = "" if a == 1 else (f"{a.numerator}/{a.denominator} " if a.denominator != 1 else f"{a.numerator} ")
        body = coef + format_monomial(m)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def parse_monomial(text: str) -> DiffMonomial:
    """Inverse of :func:`format_monomial`."""
    import re

    factors = []
    for part in text.replace("*", "·").split("·"):
        part = part.strip()
        mt = re.fullmatch(r"x([1-9][0-9]*)(?:\^\((\d+)\)|('*))", part)
        if not mt:
            raise ValueError(f"bad differential factor {part!r}")
        g = int(mt.group(1))
        d = int(mt.group(2)) if mt.group(2) is not None else len(mt.group(3))
        factors.append((g, d))
    return monomial(*factors)
