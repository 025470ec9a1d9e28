"""Binary term trees, sparse rational polynomials, and the shared text grammar.

A term is either a positive ``int`` (the generator ``x_i``) or a tuple
``(op, left, right)`` where ``op`` is one of ``'*'`` (the single product),
``'['`` (commutator) or ``'{'`` (anticommutator).  Plain tuples keep hashing
and comparison cheap, which matters for the large multilinear spaces the
oracle builds.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

STAR = "*"
BRACKET = "["
BRACE = "{"

STAR_SIG = frozenset({STAR})
POL_SIG = frozenset({BRACKET, BRACE})

Term = Union[int, Tuple[str, "Term", "Term"]]

DEFAULT_DEGREE_CAP = 8

_CLOSE = {STAR: ")", BRACKET: "]", BRACE: "}"}
_OPEN = {STAR: "(", BRACKET: "[", BRACE: "{"}


class TermError(ValueError):
    """Raised for malformed terms and polynomials."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class DegreeCapError(ValueError):
    pass


def check_cap(n, cap=None):
    cap = DEFAULT_DEGREE_CAP if cap is None else cap
    if n > cap:
        raise DegreeCapError(f"degree {n} exceeds the cap {cap}; raise it explicitly to proceed")


# -- term helpers -----------------------------------------------------------

def is_leaf(t: Term) -> bool:
    return type(t) is int


def node(op: str, left: Term, right: Term) -> Term:
    return (op, left, right)


def degree(t: Term) -> int:
    if type(t) is int:
        return 1
    return degree(t[1]) + degree(t[2])


def leaves(t: Term) -> List[int]:
    out = []
    stack = [t]
    while stack:
        s = stack.pop()
        if type(s) is int:
            out.append(s)
        else:
            stack.append(s[2])
            stack.append(s[1])
    return out


def ops(t: Term) -> set:
    if type(t) is int:
        return set()
    return {t[0]} | ops(t[1]) | ops(t[2])


def signature_of(t: Term) -> frozenset:
    found = ops(t)
    if not found:
        return frozenset()
    if found <= STAR_SIG:
        return STAR_SIG
    if found <= POL_SIG:
        return POL_SIG
    raise TermError("term mixes '*' with brackets/braces")


def relabel(t: Term, mapping) -> Term:
    """Replace every leaf ``i`` by ``mapping[i]`` (any indexable)."""
    if type(t) is int:
        return mapping[t]
    return (t[0], relabel(t[1], mapping), relabel(t[2], mapping))


def substitute(t: Term, values) -> Term:
    """Replace leaf ``i`` by the term ``values[i]``."""
    return relabel(t, values)


def is_multilinear(t: Term, n: Optional[int] = None) -> bool:
    ls = leaves(t)
    n = len(ls) if n is None else n
    return len(ls) == n and sorted(ls) == list(range(1, n + 1))


# -- ordering -----------------------------------------------------------------

def _shape_ops_leaves(t, shape, opseq, leafseq):
    if type(t) is int:
        leafseq.append(t)
        return 1
    i = len(shape)
    shape.append(0)
    opseq.append(t[0])
    dl = _shape_ops_leaves(t[1], shape, opseq, leafseq)
    dr = _shape_ops_leaves(t[2], shape, opseq, leafseq)
    shape[i] = -dl
    return dl + dr


@lru_cache(maxsize=1 << 20)
def term_key(t: Term):
    """Sort key realizing the deterministic total order on terms.

    Degree first, then shape (preorder left-subtree degrees, larger first),
    then the preorder op tags, then the in-order leaf indices.
    """
    shape: List[int] = []
    opseq: List[str] = []
    leafseq: List[int] = []
    d = _shape_ops_leaves(t, shape, opseq, leafseq)
    return (d, tuple(shape), "".join(opseq), tuple(leafseq))


def term_order(a: Term, b: Term) -> int:
    """Three-way comparison: negative, zero or positive."""
    ka, kb = term_key(a), term_key(b)
    return (ka > kb) - (ka < kb)


# -- formatting and parsing -----------------------------------------------------

def format_term(t: Term) -> str:
    if type(t) is int:
        return f"x{t}"
    op, l, r = t
    sep = "*" if op == STAR else ","
    return f"{_OPEN[op]}{format_term(l)}{sep}{format_term(r)}{_CLOSE[op]}"


def format_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class _Parser:
    def __init__(self, text: str, slots: bool = False):
        self.text = text
        self.pos = 0
        self.slots = slots

    def skip(self):
        text = self.text
        while self.pos < len(text) and text[self.pos] in " \t\r\n":
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise TermError(f"expected {ch!r}, got {got!r}", self.pos)
        self.pos += 1

    def term(self) -> Term:
        ch = self.peek()
        start = self.pos
        if ch == "x" and not self.slots:
            self.pos += 1
            j = self.pos
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            digits = self.text[self.pos:j]
            if not digits:
                raise TermError("generator needs an index", start)
            if digits[0] == "0":
                raise TermError("generator index must be a positive integer without leading zeros", start)
            self.pos = j
            return int(digits)
        if self.slots and "a" <= ch <= "h":
            self.pos += 1
            return ord(ch) - ord("a") + 1
        if ch in ("(", "[", "{"):
            op = {"(": STAR, "[": BRACKET, "{": BRACE}[ch]
            self.pos += 1
            left = self.term()
            self.expect("*" if op == STAR else ",")
            right = self.term()
            self.expect(_CLOSE[op])
            t = (op, left, right)
            try:
                signature_of(t)
            except TermError:
                raise TermError("term mixes '*' with brackets/braces", start) from None
            return t
        raise TermError(f"unexpected {ch or 'end of input'!r}", self.pos)

    def coef(self) -> Optional[Fraction]:
        self.skip()
        j = self.pos
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.pos:
            return None
        num = int(self.text[self.pos:j])
        self.pos = j
        if self.peek() == "/":
            self.pos += 1
            self.skip()
            k = self.pos
            while k < len(self.text) and self.text[k].isdigit():
                k += 1
            if k == self.pos:
                raise TermError("expected denominator", self.pos)
            den = int(self.text[self.pos:k])
            if den == 0:
                raise TermError("zero denominator", self.pos)
            self.pos = k
            return Fraction(num, den)
        return Fraction(num)

    def done(self):
        self.skip()
        if self.pos != len(self.text):
            raise TermError(f"trailing input {self.text[self.pos]!r}", self.pos)


def _check_sig(t, signature, offset=0):
    if signature is None:
        return
    sig = signature_of(t)
    if sig and sig != frozenset(signature) and not sig <= frozenset(signature):
        raise TermError("term does not use the requested signature", offset)


def parse_term(text: str, signature=None) -> Term:
    """Parse one fully parenthesized term.

    >>> parse_term("(x1*(x2*x3))")
    ('*', 1, ('*', 2, 3))
    """
    p = _Parser(text)
    t = p.term()
    p.done()
    _check_sig(t, signature)
    return t


# -- polynomials ------------------------------------------------------------------

Coef = Fraction


class Poly:
    """Finite formal sum of terms with exact rational coefficients.

    Zero coefficients are never stored.  Instances are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            self.terms: Dict[Term, Fraction] = {}
        elif isinstance(terms, dict):
            self.terms = {t: Fraction(c) for t, c in terms.items() if c != 0}
        else:
            acc: Dict[Term, Fraction] = {}
            for t, c in terms:
                acc[t] = acc.get(t, 0) + c
            self.terms = {t: Fraction(c) for t, c in acc.items() if c != 0}

    @classmethod
    def _raw(cls, d):
        p = cls.__new__(cls)
        p.terms = d
        return p

    @classmethod
    def term(cls, t: Term, c=1) -> "Poly":
        return cls({t: Fraction(c)}) if c else cls()

    def __iter__(self) -> Iterator[Tuple[Term, Fraction]]:
        return iter(self.items())

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: term_key(kv[0]))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __getitem__(self, t):
        return self.terms.get(t, Fraction(0))

    def __add__(self, other: "Poly") -> "Poly":
        d = dict(self.terms)
        add_into(d, other.terms)
        return Poly._raw(d)

    def __neg__(self):
        return Poly._raw({t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        d = dict(self.terms)
        add_into(d, other.terms, -1)
        return Poly._raw(d)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if scalar == 0:
            return Poly()
        return Poly._raw({t: c * scalar for t, c in self.terms.items()})

    __rmul__ = __mul__

    def map_terms(self, fn) -> "Poly":
        """Apply ``fn`` to every term (a term-to-term map), merging collisions."""
        d: Dict[Term, Fraction] = {}
        for t, c in self.terms.items():
            s = fn(t)
            v = d.get(s, 0) + c
            if v:
                d[s] = v
            else:
                d.pop(s, None)
        return Poly._raw(d)

    def degrees(self):
        return {degree(t) for t in self.terms}

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def add_into(acc: dict, other: dict, scale=1):
    """In-place ``acc += scale * other`` on raw coefficient dicts."""
    for t, c in other.items():
        v = acc.get(t, 0) + scale * c
        if v:
            acc[t] = v
        else:
            acc.pop(t, None)
    return acc


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for i, (t, c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_term(t) if a == 1 else f"{format_coef(a)} {format_term(t)}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def parse_poly(text: str, signature=None, slots: bool = False) -> Poly:
    """Parse ``[sign] [coef] term (sign [coef] term)*``; ``"0"`` is the zero polynomial."""
    p = _Parser(text, slots=slots)
    if text.strip() == "0":
        return Poly()
    acc: Dict[Term, Fraction] = {}
    first = True
    while True:
        ch = p.peek()
        sign = 1
        if ch in "+-" and ch:
            sign = -1 if ch == "-" else 1
            p.pos += 1
        elif not first:
            if ch == "":
                break
            raise TermError(f"expected '+' or '-', got {ch!r}", p.pos)
        start = p.pos
        c = p.coef()
        t = p.term()
        _check_sig(t, signature, start)
        acc[t] = acc.get(t, 0) + sign * (c if c is not None else 1)
        first = False
        if p.peek() == "":
            break
    sigs = {signature_of(t) for t in acc} - {frozenset()}
    if len(sigs) > 1:
        raise TermError("polynomial mixes '*' terms with bracket/brace terms", 0)
    return Poly(acc)


# -- permutations ---------------------------------------------------------------------

class Permutation(tuple):
    """``images[i-1] = sigma(i)``; a bijection on ``{1..n}``."""

    def __new__(cls, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation: {images}")
        return super().__new__(cls, images)

    @property
    def n(self):
        return len(self)

    def __call__(self, i: int) -> int:
        return self[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``(self o other)(i) = self(other(i))``."""
        return Permutation(self[other[i] - 1] for i in range(len(other)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, j in enumerate(self, 1):
            inv[j - 1] = i
        return Permutation(inv)

    @classmethod
    def identity(cls, n):
        return cls(range(1, n + 1))

    @classmethod
    def transposition(cls, n, i=1, j=2):
        im = list(range(1, n + 1))
        im[i - 1], im[j - 1] = j, i
        return cls(im)

    @classmethod
    def cycle(cls, n):
        """The n-cycle ``i -> i+1 (mod n)``."""
        return cls([i % n + 1 for i in range(1, n + 1)])


def permute_term(t: Term, sigma: Permutation) -> Term:
    if type(t) is int:
        if t > len(sigma):
            raise ValueError(f"generator x{t} outside the range of a permutation of size {len(sigma)}")
        return sigma[t - 1]
    return (t[0], permute_term(t[1], sigma), permute_term(t[2], sigma))


def apply_permutation(p: Poly, sigma: Permutation) -> Poly:
    """Replace every leaf ``x_i`` by ``x_sigma(i)``."""
    return Poly._raw({permute_term(t, sigma): c for t, c in p.terms.items()})


# -- enumeration -------------------------------------------------------------------

def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def multilinear_count(signature, n: int) -> int:
    from math import factorial
    return len(signature) ** (n - 1) * catalan(n - 1) * factorial(n)


def terms_over(letters: Tuple[int, ...], signature) -> List[Term]:
    """All terms using each of ``letters`` exactly once, every shape and op."""
    return list(_terms_over(tuple(sorted(letters)), tuple(sorted(signature))))


@lru_cache(maxsize=None)
def _terms_over(letters: Tuple[int, ...], sig: Tuple[str, ...]) -> Tuple[Term, ...]:
    if len(letters) == 1:
        return (letters[0],)
    out = []
    n = len(letters)
    # ordered splits (A, B): A gets the letters picked by a nonempty proper mask
    for mask in range(1, (1 << n) - 1):
        a = tuple(letters[i] for i in range(n) if mask >> i & 1)
        b = tuple(letters[i] for i in range(n) if not mask >> i & 1)
        la = _terms_over(a, sig)
        lb = _terms_over(b, sig)
        for op in sig:
            for x in la:
                for y in lb:
                    out.append((op, x, y))
    return tuple(out)


def shapes(n: int) -> List[Term]:
    """All bracketings of n leaves, leaves numbered 1..n left to right, op '*'."""
    return list(_shapes(1, n))


@lru_cache(maxsize=None)
def _shapes(lo, hi):
    if lo == hi:
        return (lo,)
    out = []
    for mid in range(lo, hi):
        for l in _shapes(lo, mid):
            for r in _shapes(mid + 1, hi):
                out.append((STAR, l, r))
    return tuple(out)


def enumerate_multilinear(signature, n: int, cap: Optional[int] = None) -> List[Term]:
    """Every degree-n term using x1..xn once each, sorted by :func:`term_key`."""
    if n < 1:
        raise ValueError("degree must be positive")
    check_cap(n, cap)
    return sorted(_terms_over(tuple(range(1, n + 1)), tuple(sorted(signature))), key=term_key)


def multilinear_monomials(letters: Iterable[int], signature) -> Tuple[Term, ...]:
    return _terms_over(tuple(sorted(letters)), tuple(sorted(signature)))
