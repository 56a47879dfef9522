"""Terms over a single commutative product, their canonical forms and reduction.

A term is either a variable ``x<i>`` (``i >= 1``) or a product of two terms.
Two terms are equivalent (``~``) when one is obtained from the other by
swapping the factors of some products.  Every class has a canonical
representative in which the two factors of each product are ordered by
``(length, rank, text)``; equivalence is decided by comparing canonical forms.
"""
from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterator, Mapping

__all__ = [
    "Term",
    "Var",
    "Prod",
    "ParseError",
    "CapExceeded",
    "parse",
    "format_term",
    "canonicalize",
    "equiv",
    "rank",
    "length",
    "is_reduced",
    "reduce",
    "substitute",
    "substitute_many",
    "variables",
    "count_var",
    "subterms",
    "enumerate_reduced",
    "reduced_by_rank",
    "DEFAULT_MAX_CLASSES",
    "DEFAULT_MAX_RANK",
]

DEFAULT_MAX_CLASSES = 10**6
DEFAULT_MAX_RANK = 6


class ParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class CapExceeded(RuntimeError):
    """A configured resource limit was hit; results are never silently truncated."""


class Term:
    """Immutable term node.  Equality is structural (not up to ``~``)."""

    __slots__ = ("length", "rank", "text", "_canon")

    length: int
    rank: int
    text: str

    def __eq__(self, other):
        return isinstance(other, Term) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __lt__(self, other: "Term") -> bool:
        return self.sort_key < other.sort_key

    def __mul__(self, other: "Term") -> "Prod":
        return Prod(self, other)

    def __str__(self):
        return self.text

    @property
    def sort_key(self):
        return (self.length, self.rank, self.text)

    @property
    def is_var(self) -> bool:
        return isinstance(self, Var)


class Var(Term):
    __slots__ = ("index",)

    def __init__(self, index: int):
        if not isinstance(index, int) or index < 1:
            raise ValueError(f"variable index must be a positive integer, got {index!r}")
        self.index = index
        self.length = 1
        self.rank = 0
        self.text = f"x{index}"
        self._canon = self

    def __repr__(self):
        return f"Var({self.index})"


class Prod(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self.length = left.length + right.length
        self.rank = max(left.rank, right.rank) + 1
        self.text = f"({left.text}*{right.text})"
        self._canon = None

    def __repr__(self):
        return f"parse({self.text!r})"

    @property
    def children(self) -> tuple[Term, Term]:
        return (self.left, self.right)


# -- parsing and printing ---------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\*)|(\()|(\))|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(1) if m.group(1) else m.start(m.lastindex)
        if m.group(1):
            tokens.append(("var", int(m.group(2)), start))
        elif m.group(3):
            tokens.append(("*", None, start))
        elif m.group(4):
            tokens.append(("(", None, start))
        elif m.group(5):
            tokens.append((")", None, start))
        else:
            raise ParseError(f"unexpected character {m.group(6)!r}", text, start)
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse(text: str) -> Term:
    """Parse ``term := factor {'*' factor}`` (left-associative)."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def term() -> Term:
        nonlocal pos
        result = factor()
        while peek()[0] == "*":
            pos += 1
            result = Prod(result, factor())
        return result

    def factor() -> Term:
        nonlocal pos
        kind, value, where = peek()
        if kind == "var":
            if value < 1:
                raise ParseError("variable index must be >= 1", text, where)
            pos += 1
            return Var(value)
        if kind == "(":
            pos += 1
            inner = term()
            if peek()[0] != ")":
                raise ParseError("expected ')'", text, peek()[2])
            pos += 1
            return inner
        what = "end of input" if kind == "end" else repr(kind)
        raise ParseError(f"expected variable or '(', found {what}", text, where)

    result = term()
    if peek()[0] != "end":
        raise ParseError(f"unexpected {peek()[0]!r}", text, peek()[2])
    return result


def format_term(t: Term) -> str:
    """Fully parenthesized rendering; ``parse(format_term(t)) == t``."""
    return t.text


def _as_term(t) -> Term:
    return parse(t) if isinstance(t, str) else t


# -- equivalence ------------------------------------------------------------

def canonicalize(t: Term) -> Term:
    """Canonical representative of the ``~``-class of ``t``."""
    if t._canon is not None:
        return t._canon
    a = canonicalize(t.left)
    b = canonicalize(t.right)
    if b.sort_key < a.sort_key:
        a, b = b, a
    if a is t.left and b is t.right:
        c = t
    else:
        c = Prod(a, b)
        c._canon = c
    t._canon = c
    return c


def _cprod(a: Term, b: Term) -> Term:
    """Product of two canonical terms, already in canonical form."""
    if b.sort_key < a.sort_key:
        a, b = b, a
    c = Prod(a, b)
    c._canon = c
    return c


def equiv(t: Term, r: Term) -> bool:
    return canonicalize(t) == canonicalize(r)


def rank(t: Term) -> int:
    return t.rank


def length(t: Term) -> int:
    return t.length


def subterms(t: Term) -> Iterator[Term]:
    """All subterm occurrences, pre-order (root first)."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, Prod):
            stack.append(s.right)
            stack.append(s.left)


def variables(t: Term) -> set[int]:
    return {s.index for s in subterms(t) if isinstance(s, Var)}


def count_var(t: Term, v: int) -> int:
    return sum(1 for s in subterms(t) if isinstance(s, Var) and s.index == v)


# -- reducedness and reduction ------------------------------------------------

def _absorbs(a: Term, b: Term) -> bool:
    """True when canonical ``b`` is a factor of canonical ``a`` (``a ~ r*b``)."""
    return isinstance(a, Prod) and (a.left == b or a.right == b)


def is_reduced(t: Term) -> bool:
    """No subterm of shape ``t1 t2`` (t1~t2), ``t1 (t2 t3)`` or ``(t1 t2) t3``
    with the outer factor equivalent to one of the inner ones."""
    c = canonicalize(t)
    for s in subterms(c):
        if isinstance(s, Prod):
            a, b = s.left, s.right
            if a == b or _absorbs(a, b) or _absorbs(b, a):
                return False
    return True


def _reduce_pair(a: Term, b: Term) -> Term:
    # a, b canonical and reduced
    if a == b:
        return a
    if _absorbs(a, b):
        return a.right if a.left == b else a.left
    if _absorbs(b, a):
        return b.right if b.left == a else b.left
    return _cprod(a, b)


@lru_cache(maxsize=1 << 18)
def _reduce_cached(t: Term) -> Term:
    return _reduce_pair(reduce(t.left), reduce(t.right))


def reduce(t: Term) -> Term:
    """Reduced canonical form, computed child-first.

    On a product the reduced factors are compared: equal classes collapse to
    one factor, a factor of shape ``r*other`` cancels to ``r``, and otherwise
    the (canonical) product is formed.  The result is equal to ``t`` in every
    Steiner quasigroup.
    """
    if isinstance(t, Var):
        return t
    return _reduce_cached(t)


# -- substitution -----------------------------------------------------------

def substitute(t: Term, v: int, r: Term) -> Term:
    """Replace every occurrence of ``x<v>`` by ``r``; purely syntactic."""
    return substitute_many(t, {v: r})


def substitute_many(t: Term, mapping: Mapping[int, Term]) -> Term:
    """Simultaneous substitution; variables missing from ``mapping`` stay."""
    memo: dict[Term, Term] = {}

    def go(s: Term) -> Term:
        if isinstance(s, Var):
            return mapping.get(s.index, s)
        out = memo.get(s)
        if out is None:
            left, right = go(s.left), go(s.right)
            out = s if (left is s.left and right is s.right) else Prod(left, right)
            memo[s] = out
        return out

    return go(t)


# -- enumeration ------------------------------------------------------------

def reduced_by_rank(
    num_vars: int,
    max_rank: int,
    *,
    max_classes: int = DEFAULT_MAX_CLASSES,
    rank_cap: int = DEFAULT_MAX_RANK,
) -> list[list[Term]]:
    """Canonical reduced terms over ``x1..x<num_vars>`` grouped by exact rank.

    ``result[k]`` is sorted by the canonical order.  Raises ``CapExceeded``
    rather than truncating.
    """
    if num_vars < 1:
        raise ValueError("num_vars must be >= 1")
    if max_rank < 0:
        raise ValueError("max_rank must be >= 0")
    if max_rank > rank_cap:
        raise CapExceeded(f"max_rank {max_rank} exceeds the configured cap {rank_cap}")
    if num_vars > max_classes:
        raise CapExceeded(f"{num_vars} variables exceed the class cap {max_classes}")
    groups = [[Var(i) for i in range(1, num_vars + 1)]]
    total = num_vars
    below: list[Term] = []  # all classes of rank < k-1
    for k in range(1, max_rank + 1):
        top = groups[k - 1]
        new = []
        # a rank-k product needs one factor of rank exactly k-1
        for i, a in enumerate(top):
            for b in below:
                if not (_absorbs(a, b) or _absorbs(b, a)):
                    new.append(_cprod(a, b))
            for b in top[i + 1:]:
                if not (_absorbs(a, b) or _absorbs(b, a)):
                    new.append(_cprod(a, b))
            if total + len(new) > max_classes:
                raise CapExceeded(
                    f"enumeration of rank {k} exceeds the class cap {max_classes}"
                )
        new.sort(key=lambda s: s.sort_key)
        total += len(new)
        below.extend(top)
        groups.append(new)
    return groups


def enumerate_reduced(num_vars: int, max_rank: int, **caps) -> list[Term]:
    """All reduced classes of rank ``<= max_rank``, as a sorted list of canonical terms."""
    out: list[Term] = []
    for group in reduced_by_rank(num_vars, max_rank, **caps):
        out.extend(group)
    return out

