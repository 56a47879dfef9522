"""Slow, independent reference implementations used to cross-check the library.

Terms here are plain nested tuples: an int ``i`` is the variable ``x<i>`` and
a pair ``(a, b)`` is the product ``a*b``.  Nothing in this file imports the
package under test except the two converters at the bottom.
"""
from __future__ import annotations

import itertools
from functools import lru_cache


def flips(t):
    """Every term obtainable from ``t`` by commuting factors anywhere."""
    return _flips(t)


@lru_cache(maxsize=None)
def _flips(t):
    if isinstance(t, int):
        return frozenset([t])
    out = set()
    for a in _flips(t[0]):
        for b in _flips(t[1]):
            out.add((a, b))
            out.add((b, a))
    return frozenset(out)


def same(a, b) -> bool:
    return b in _flips(a)


def subterms(t):
    yield t
    if not isinstance(t, int):
        yield from subterms(t[0])
        yield from subterms(t[1])


def rank(t) -> int:
    return 0 if isinstance(t, int) else 1 + max(rank(t[0]), rank(t[1]))


def length(t) -> int:
    return 1 if isinstance(t, int) else length(t[0]) + length(t[1])


def is_reduced(t) -> bool:
    """Scan every subterm for the three forbidden shapes."""
    for s in subterms(t):
        if isinstance(s, int):
            continue
        a, b = s
        if same(a, b):
            return False
        if not isinstance(b, int) and (same(a, b[0]) or same(a, b[1])):
            return False
        if not isinstance(a, int) and (same(b, a[0]) or same(b, a[1])):
            return False
    return True


def reduce(t):
    """Rewrite innermost-first with ``xx -> x`` and ``x(xy) -> y`` up to commuting."""
    if isinstance(t, int):
        return t
    a, b = reduce(t[0]), reduce(t[1])
    if same(a, b):
        return a
    if not isinstance(b, int):
        if same(a, b[0]):
            return b[1]
        if same(a, b[1]):
            return b[0]
    if not isinstance(a, int):
        if same(b, a[0]):
            return a[1]
        if same(b, a[1]):
            return a[0]
    return (a, b)


def all_terms(n: int, max_rank: int) -> list[list]:
    """All raw terms over ``x1..xn`` grouped by exact rank."""
    groups = [list(range(1, n + 1))]
    below = list(groups[0])
    for _ in range(max_rank):
        top = groups[-1]
        lower = below[: len(below) - len(top)]
        new = [(a, b) for a in top for b in below] + [(a, b) for a in lower for b in top]
        groups.append(new)
        below = below + new
    return groups


def reduced_class_counts(n: int, max_rank: int) -> list[int]:
    """Number of ``~``-classes of reduced terms of each exact rank, by brute force."""
    counts = []
    for group in all_terms(n, max_rank):
        seen = set()
        for t in group:
            if is_reduced(t):
                seen.add(min(_flips(t), key=repr))
        counts.append(len(seen))
    return counts


def steiner_table(points, blocks) -> dict:
    table = {(p, p): p for p in points}
    for blk in blocks:
        for a, b in itertools.permutations(blk, 2):
            (c,) = set(blk) - {a, b}
            table[a, b] = c
    return table


def evaluate(t, assignment, table):
    if isinstance(t, int):
        return assignment[t - 1]
    return table[evaluate(t[0], assignment, table), evaluate(t[1], assignment, table)]


FANO_BLOCKS = [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)]


def affine_plane_blocks():
    """Lines of the affine plane over GF(3) on points 1..9."""
    pts = [(x, y) for x in range(3) for y in range(3)]
    name = {p: 3 * p[0] + p[1] + 1 for p in pts}
    lines = set()
    for p, q in itertools.combinations(pts, 2):
        r = ((-p[0] - q[0]) % 3, (-p[1] - q[1]) % 3)
        lines.add(frozenset((name[p], name[q], name[r])))
    return [tuple(sorted(b)) for b in lines]


# -- converters ----------------------------------------------------------------

def to_tuple(t):
    from steinerq.terms import Var

    if isinstance(t, Var):
        return t.index
    return (to_tuple(t.left), to_tuple(t.right))


def from_tuple(t):
    from steinerq.terms import Prod, Var

    if isinstance(t, int):
        return Var(t)
    return Prod(from_tuple(t[0]), from_tuple(t[1]))
