"""Finite Steiner quasigroups and the free Steiner quasigroup on n generators.

Elements of :class:`FreeModel` are canonical reduced terms over ``x1..xn``;
the generator ``a_i`` is the term ``x_i`` and the product of two elements is
the reduced form of their formal product.  Non-equivalent reduced terms name
distinct elements, so no quotienting is needed.
"""
from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .formats import fixture_path, load_blocks, loads_blocks
from .terms import (
    CapExceeded,
    DEFAULT_MAX_CLASSES,
    Prod,
    Term,
    Var,
    _absorbs,
    _cprod,
    _reduce_pair,
    canonicalize,
    is_reduced,
    reduce,
    reduced_by_rank,
    subterms,
)

DEFAULT_MAX_GENERATORS = 5
DEFAULT_LEVEL_CAP = 6
DEFAULT_MAX_ELEMENTS = 200_000


class ModelError(ValueError):
    pass


class FiniteModel:
    """A finite Steiner quasigroup given by its product table.

    The table is built from a complete Steiner triple system and the three
    laws (``x*x = x``, ``x*y = y*x``, ``x*(x*y) = y``) are checked
    exhaustively on construction.
    """

    __slots__ = ("points", "index", "table", "name")

    def __init__(self, points, table, name: str = ""):
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.table = np.asarray(table, dtype=np.intp)
        self.name = name
        self._check_laws()

    @classmethod
    def from_blocks(cls, points, blocks, name: str = "") -> "FiniteModel":
        points = list(points)
        index = {p: i for i, p in enumerate(points)}
        if len(index) != len(points):
            raise ModelError("duplicate point names")
        n = len(points)
        table = np.full((n, n), -1, dtype=np.intp)
        np.fill_diagonal(table, np.arange(n))
        for block in blocks:
            try:
                ids = [index[p] for p in block]
            except KeyError as exc:
                raise ModelError(f"block {block} references unknown point {exc.args[0]!r}")
            if len(ids) != 3 or len(set(ids)) != 3:
                raise ModelError(f"block {block} must have three distinct points")
            for a, b, c in itertools.permutations(ids):
                if table[a, b] not in (-1, c):
                    raise ModelError(
                        f"pair ({points[a]}, {points[b]}) lies in more than one block"
                    )
                table[a, b] = c
        missing = np.argwhere(table < 0)
        if len(missing):
            a, b = missing[0]
            raise ModelError(
                f"pair ({points[a]}, {points[b]}) lies in no block; not a Steiner triple system"
            )
        return cls(points, table, name=name)

    @classmethod
    def loads(cls, text: str, name: str = "") -> "FiniteModel":
        return cls.from_blocks(*loads_blocks(text), name=name)

    @classmethod
    def load(cls, path) -> "FiniteModel":
        return cls.from_blocks(*load_blocks(path), name=str(path))

    def _check_laws(self):
        t = self.table
        n = len(self.points)
        if t.shape != (n, n) or t.min(initial=0) < 0 or t.max(initial=0) >= n:
            raise ModelError("product table is not a total operation on the points")
        ar = np.arange(n)
        if not np.array_equal(t[ar, ar], ar):
            raise ModelError("idempotence x*x = x fails")
        if not np.array_equal(t, t.T):
            raise ModelError("commutativity x*y = y*x fails")
        # t[x, t[x, y]] == y for all x, y
        if not np.array_equal(t[ar[:, None], t], np.broadcast_to(ar, (n, n))):
            raise ModelError("x*(x*y) = y fails")

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"FiniteModel({self.name or len(self.points)})"

    def mul(self, a, b):
        return self.points[self.table[self.index[a], self.index[b]]]

    def blocks(self) -> list[tuple]:
        out = []
        n = len(self.points)
        for a in range(n):
            for b in range(a + 1, n):
                c = self.table[a, b]
                if c > b:
                    out.append((self.points[a], self.points[b], self.points[c]))
        return out

    def evaluate_indices(self, t: Term, values: Mapping[int, np.ndarray]) -> np.ndarray:
        """Vectorized fold: ``values`` maps variable index to arrays of point indices."""
        memo: dict[Term, np.ndarray] = {}

        def go(s: Term):
            if isinstance(s, Var):
                try:
                    return values[s.index]
                except KeyError:
                    raise ModelError(f"variable x{s.index} is unassigned") from None
            out = memo.get(s)
            if out is None:
                out = self.table[go(s.left), go(s.right)]
                memo[s] = out
            return out

        return np.asarray(go(t))

    def evaluate_all(self, t: Term, num_vars: int) -> np.ndarray:
        """Values of ``t`` under every assignment of ``x1..x<num_vars>``.

        The result has shape ``(order,) * num_vars``; entry ``[i1, ..., ik]``
        is the index of the value when ``x_j`` is the ``i_j``-th point.
        """
        grids = np.meshgrid(*([np.arange(len(self.points))] * num_vars), indexing="ij")
        values = {j + 1: g for j, g in enumerate(grids)}
        return np.broadcast_to(self.evaluate_indices(t, values), grids[0].shape)


def builtin_model(order: int) -> FiniteModel:
    """Fano plane (order 7) or the affine plane AG(2,3) (order 9)."""
    names = {7: "fano.psts", 9: "sts9.psts"}
    if order not in names:
        raise ModelError(f"no built-in Steiner triple system of order {order}; available: 7, 9")
    return FiniteModel.load(fixture_path(names[order]))


# -- the free model --------------------------------------------------------

@dataclass(frozen=True)
class Dependent:
    """Certificate of dependence: non-equivalent reduced terms with equal values."""

    left: Term
    right: Term
    value: Term


@dataclass(frozen=True)
class NoWitnessUpTo:
    bound: float


@dataclass
class Closure:
    elements: frozenset
    saturated: bool
    length_cap: int
    provenance: dict | None = field(default=None, repr=False)

    def __contains__(self, e):
        return e in self.elements

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class Construction:
    """Abstract standard free construction: ``labels[e]`` is the canonical term
    built for element ``e`` and ``step[e]`` the stage at which it was added."""

    levels: list
    labels: list
    step: list
    blocks: list


Element = Term
Model = Union["FreeModel", FiniteModel]


@dataclass(frozen=True)
class FreeModel:
    num_generators: int

    def __post_init__(self):
        if self.num_generators < 1:
            raise ModelError("a free model needs at least one generator")

    def generators(self) -> tuple[Term, ...]:
        return tuple(Var(i) for i in range(1, self.num_generators + 1))

    def element(self, t) -> Term:
        """Coerce a term (or its text) to the element it denotes."""
        from .terms import parse

        if isinstance(t, str):
            t = parse(t)
        self._check_vars(t)
        return reduce(t)

    def _check_vars(self, t: Term):
        for s in subterms(t):
            if isinstance(s, Var) and s.index > self.num_generators:
                raise ModelError(
                    f"variable x{s.index} exceeds the {self.num_generators} generators"
                )

    def is_element(self, e: Term) -> bool:
        try:
            self._check_vars(e)
        except ModelError:
            return False
        return canonicalize(e) == e and is_reduced(e)

    def _require(self, e: Term) -> Term:
        if not self.is_element(e):
            raise ModelError(f"{e} is not an element of {self}")
        return e

    def mul(self, a: Term, b: Term) -> Term:
        return _reduce_pair(self._require(a), self._require(b))

    def evaluate(self, t: Term, asg=None) -> Term:
        """Value of ``t`` at ``asg`` (the generators when omitted)."""
        if asg is None:
            asg = self.generators()
        return evaluate(t, asg, self)

    # levels --------------------------------------------------------------

    def _check_level_cap(self, k: int, level_cap: int, max_generators: int):
        if k < 0:
            raise ValueError("level index must be >= 0")
        if k > level_cap:
            raise CapExceeded(f"level {k} exceeds the configured cap {level_cap}")
        if self.num_generators > max_generators:
            raise CapExceeded(
                f"{self.num_generators} generators exceed the cap {max_generators} "
                "for exhaustive operations"
            )

    def levels(
        self,
        k: int,
        method: str = "enumerate",
        *,
        level_cap: int = DEFAULT_LEVEL_CAP,
        max_generators: int = DEFAULT_MAX_GENERATORS,
        max_classes: int = DEFAULT_MAX_CLASSES,
    ) -> list[frozenset]:
        """Levels ``S_0 .. S_k`` over the base.

        ``method`` is ``"enumerate"`` (reduced terms by rank), ``"closure"``
        (``S_{i+1} = {a*b : a, b in S_i}``), ``"construction"`` (abstract
        standard free construction, term labels attached afterwards) or
        ``"both"`` (enumerate and closure, checked equal).
        """
        self._check_level_cap(k, level_cap, max_generators)
        if method == "enumerate":
            return self._levels_enumerate(k, max_classes)
        if method == "closure":
            return self._levels_closure(k, max_classes)
        if method == "construction":
            c = standard_construction(self.num_generators, k, max_classes=max_classes)
            return [frozenset(c.labels[e] for e in level) for level in c.levels]
        if method == "both":
            a = self._levels_enumerate(k, max_classes)
            b = self._levels_closure(k, max_classes)
            if a != b:
                raise AssertionError("level constructions disagree")
            return a
        raise ValueError(f"unknown method {method!r}")

    def _levels_enumerate(self, k, max_classes):
        groups = reduced_by_rank(self.num_generators, k, max_classes=max_classes, rank_cap=k)
        out, acc = [], set()
        for g in groups:
            acc.update(g)
            out.append(frozenset(acc))
        return out

    def _levels_closure(self, k, max_classes):
        cur = list(self.generators())
        seen = set(cur)
        out = [frozenset(cur)]
        for _ in range(k):
            nxt = list(cur)
            for i, a in enumerate(cur):
                for b in cur[i + 1:]:
                    c = _reduce_pair(a, b)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
                if len(seen) > max_classes:
                    raise CapExceeded(f"level closure exceeds the class cap {max_classes}")
            cur = nxt
            out.append(frozenset(cur))
        return out

    def level_of(self, e: Term) -> int:
        return self._require(e).rank

    # closure and independence ----------------------------------------------

    def closure(
        self,
        gens: Sequence[Term],
        length_cap: int | None = None,
        *,
        max_elements: int = DEFAULT_MAX_ELEMENTS,
        track: bool = False,
    ) -> Closure:
        """Close ``gens`` under the product, discarding elements longer than ``length_cap``.

        ``saturated`` is true iff a fixpoint was reached without discarding
        anything, in which case the result is the whole generated subalgebra.
        With ``track=True`` each element carries a term over ``x1..xk``
        (``x_i`` standing for the i-th generator) that evaluates to it.
        The default cap is four times the longest generator.
        """
        gens = [self._require(g) for g in gens]
        if not gens:
            raise ValueError("closure needs at least one generator")
        cap = length_cap if length_cap is not None else 4 * max(g.length for g in gens)
        if cap < 1:
            raise ValueError("length_cap must be positive")
        prov: dict[Term, Term | None] = {}
        by_len: dict[int, list[Term]] = defaultdict(list)
        parents: dict[Term, list[Term]] = defaultdict(list)
        queue: deque[Term] = deque()

        def add(e: Term, how):
            if e in prov:
                return
            prov[e] = how() if track else None
            by_len[e.length].append(e)
            queue.append(e)
            if isinstance(e, Prod):
                parents[e.left].append(e)
                parents[e.right].append(e)
            if len(prov) > max_elements:
                raise CapExceeded(f"closure working set exceeds {max_elements} elements")

        for i, g in enumerate(gens):
            add(g, lambda i=i: Var(i + 1))

        while queue:
            a = queue.popleft()
            # cancellations a*(a*q) = q, which may involve long elements
            if isinstance(a, Prod):
                for u, v in ((a.left, a.right), (a.right, a.left)):
                    if u in prov:
                        add(v, lambda a=a, u=u: Prod(prov[a], prov[u]))
            for p in list(parents[a]):
                q = p.right if p.left == a else p.left
                add(q, lambda p=p, a=a: Prod(prov[p], prov[a]))
            for size in range(1, cap - a.length + 1):
                for b in list(by_len.get(size, ())):
                    if b != a:
                        c = _reduce_pair(a, b)
                        if c.length <= cap:
                            add(c, lambda a=a, b=b: Prod(prov[a], prov[b]))

        saturated = not _has_discard(list(prov), cap)
        return Closure(frozenset(prov), saturated, cap, prov if track else None)

    def independence_refute(
        self,
        elems: Sequence[Term],
        rank_bound: int,
        *,
        max_classes: int = DEFAULT_MAX_CLASSES,
    ) -> Dependent | NoWitnessUpTo:
        """Search for non-equivalent reduced terms of rank ``<= rank_bound`` that
        agree at ``elems``.  A ``Dependent`` answer is a certificate; the
        negative answer only covers the searched bound."""
        elems = [self._require(e) for e in elems]
        if len(set(elems)) != len(elems):
            raise ValueError("elements must be pairwise distinct")
        if not elems:
            return NoWitnessUpTo(rank_bound)
        groups = reduced_by_rank(
            len(elems), rank_bound, max_classes=max_classes, rank_cap=max(rank_bound, 0)
        )
        value: dict[Term, Term] = {}
        first: dict[Term, Term] = {}
        for group in groups:
            for t in group:
                if isinstance(t, Var):
                    v = elems[t.index - 1]
                else:
                    v = _reduce_pair(value[t.left], value[t.right])
                value[t] = v
                if v in first:
                    w = first[v]
                    if evaluate(w, elems, self) != evaluate(t, elems, self):
                        raise AssertionError("witness failed re-verification")
                    return Dependent(w, t, v)
                first[v] = t
        return NoWitnessUpTo(rank_bound)

    def extend_hom(self, images: Sequence, target: Model) -> "Homomorphism":
        return Homomorphism(self, tuple(images), target)


def _has_discard(elems: list[Term], cap: int) -> bool:
    """Whether some product of two elements was dropped for exceeding ``cap``."""
    elems = sorted(elems, key=lambda e: -e.length)
    for i, a in enumerate(elems):
        if 2 * a.length <= cap:
            break
        for b in elems[i + 1:]:
            if a.length + b.length <= cap:
                break
            if not (_absorbs(a, b) or _absorbs(b, a)):
                return True
    return False


@dataclass(frozen=True)
class Homomorphism:
    """The unique homomorphism from a free model sending ``a_i`` to ``images[i-1]``."""

    domain: FreeModel
    images: tuple
    target: Model

    def __post_init__(self):
        if len(self.images) != self.domain.num_generators:
            raise ModelError(
                f"need {self.domain.num_generators} images, got {len(self.images)}"
            )

    def __call__(self, e: Term):
        return evaluate(e, self.images, self.target)


def _lookup(asg, index: int):
    try:
        if isinstance(asg, Mapping):
            return asg[index]
        if index < 1:
            raise IndexError
        return asg[index - 1]
    except (KeyError, IndexError):
        raise ModelError(f"variable x{index} is unassigned") from None


def evaluate(t: Term, asg, model: Model):
    """Fold ``t`` with the model's product.

    ``asg`` maps variable indices to elements, either as a mapping or as a
    sequence whose ``i-1``-th entry is the value of ``x_i``.
    """
    memo: dict[Term, object] = {}
    mul = _reduce_pair if isinstance(model, FreeModel) else model.mul

    def go(s: Term):
        if isinstance(s, Var):
            return _lookup(asg, s.index)
        out = memo.get(s)
        if out is None:
            out = mul(go(s.left), go(s.right))
            memo[s] = out
        return out

    return go(t)


def standard_construction(
    num_generators: int, k: int, *, max_classes: int = DEFAULT_MAX_CLASSES
) -> Construction:
    """Build the first ``k`` stages of a free Steiner quasigroup abstractly.

    Start with ``num_generators`` atoms; at each stage add one new element for
    every pair of existing elements whose product is still undefined, with
    block ``{a, b, new}``.  Elements are integers; each carries the canonical
    product of its parents' labels, so the result can be compared with the
    term model.
    """
    labels: list[Term] = [Var(i) for i in range(1, num_generators + 1)]
    step = [0] * num_generators
    defined: set[tuple[int, int]] = set()
    blocks: list[tuple[int, int, int]] = []
    levels = [list(range(num_generators))]
    for s in range(1, k + 1):
        current = list(range(len(labels)))
        for a, b in itertools.combinations(current, 2):
            if (a, b) in defined:
                continue
            c = len(labels)
            labels.append(_cprod(labels[a], labels[b]))
            step.append(s)
            blocks.append((a, b, c))
            defined.update({(a, b), (a, c), (b, c)})
            if len(labels) > max_classes:
                raise CapExceeded(f"construction exceeds the class cap {max_classes}")
        levels.append(list(range(len(labels))))
    return Construction(levels, labels, step, blocks)
