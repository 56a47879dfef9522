"""Endomorphisms of free models induced by replacing one generator with a term.

For an independent tuple ``(a_1..a_k, b)`` and a term ``t(x1..xk, y)`` the map
fixing every ``a_i`` and sending ``b`` to ``t(a, b)`` is
  * not injective when ``y`` does not occur in ``t``,
  * an automorphism when ``y`` occurs exactly once (and the inverse is an
    explicit term obtained by unwinding ``t``),
  * an embedding that misses ``b`` when ``y`` occurs two or more times.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .models import FreeModel, ModelError, evaluate
from .terms import (
    Prod,
    Term,
    Var,
    canonicalize,
    count_var,
    enumerate_reduced,
    is_reduced,
    length,
    reduce,
    substitute,
    substitute_many,
    subterms,
    variables,
)


def _var_index(v) -> int:
    return v.index if isinstance(v, Var) else int(v)


def _default_y(t: Term, y) -> int:
    if y is not None:
        return _var_index(y)
    vs = variables(t)
    if not vs:
        raise ValueError("term has no variables")
    return max(vs)


# -- occurrences ------------------------------------------------------------

@dataclass(frozen=True)
class OccurrenceReport:
    variable: int
    count: int
    single_path_exists: bool


def _single_classes(t: Term):
    """Canonical class -> set of canonical partner classes over all product nodes."""
    partners: dict[Term, set[Term]] = {}
    for s in subterms(t):
        if isinstance(s, Prod):
            a, b = canonicalize(s.left), canonicalize(s.right)
            partners.setdefault(a, set()).add(b)
            partners.setdefault(b, set()).add(a)
    return partners


def is_single(t: Term, r: Term) -> bool:
    """``r`` is single in ``t``: all products in ``t`` with a factor ``~ r`` have
    pairwise equivalent cofactors."""
    return len(_single_classes(t).get(canonicalize(r), ())) <= 1


def occurrences(t: Term, v=None) -> OccurrenceReport:
    """Count occurrences of ``x<v>`` and test whether some occurrence has only
    single subterms above it (itself included)."""
    v = _default_y(t, v)
    partners = _single_classes(t)

    def single(s: Term) -> bool:
        return len(partners.get(canonicalize(s), ())) <= 1

    count = 0
    found = False
    # depth-first over occurrences, carrying whether the path so far is single
    stack = [(t, single(t))]
    while stack:
        s, ok = stack.pop()
        if isinstance(s, Var):
            if s.index == v:
                count += 1
                found = found or ok
            continue
        for child in (s.left, s.right):
            stack.append((child, ok and single(child)))
    if is_reduced(t) and found != (count == 1):
        raise AssertionError(f"single-path test disagrees with occurrence count in {t}")
    return OccurrenceReport(v, count, found)


# -- inversion --------------------------------------------------------------

def invert_single(t: Term, y=None, z=None) -> Term:
    """Term ``r(x, z)`` with ``t(x, y) = z`` iff ``r(x, z) = y`` in every Steiner quasigroup.

    ``y`` defaults to the highest variable of ``t`` and ``z`` to the next
    index.  Passing ``z = y`` gives the inverse image term in the same
    signature, since ``y`` occurs nowhere else in the result.
    """
    y = _default_y(t, y)
    z = y + 1 if z is None else _var_index(z)
    n = count_var(t, y)
    if n != 1:
        raise ValueError(f"x{y} must occur exactly once in {t}, found {n}")
    acc: Term = Var(z)
    s = t
    while not (isinstance(s, Var) and s.index == y):
        # t1 * t2 = acc  <=>  t1 = t2 * acc, where y lies in t1
        if count_var(s.left, y):
            s, other = s.left, s.right
        else:
            s, other = s.right, s.left
        acc = Prod(other, acc)
    return canonicalize(acc)


# -- endomorphism specs -----------------------------------------------------

@dataclass(frozen=True)
class EndoSpec:
    """Endomorphism of a free model given by one image per generator."""

    model: FreeModel
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.model.num_generators:
            raise ModelError(
                f"need {self.model.num_generators} images, got {len(self.images)}"
            )
        object.__setattr__(self, "images", tuple(self.model.element(t) for t in self.images))

    @classmethod
    def identity(cls, model: FreeModel) -> "EndoSpec":
        return cls(model, model.generators())

    def __call__(self, e: Term) -> Term:
        return apply_endo(self, e)

    def compose(self, inner: "EndoSpec") -> "EndoSpec":
        """``self o inner``: apply ``inner`` first."""
        return EndoSpec(self.model, tuple(apply_endo(self, g) for g in inner.images))

    @property
    def total_length(self) -> int:
        return sum(length(t) for t in self.images)


def apply_endo(spec: EndoSpec, e: Term) -> Term:
    mapping = {i + 1: img for i, img in enumerate(spec.images)}
    return reduce(substitute_many(e, mapping))


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class NotInjective:
    image: Term
    pair: tuple  # (b, t(a)): distinct elements with the same image


@dataclass(frozen=True)
class Automorphism:
    image: Term
    inverse: Term  # image of b under the inverse map, in the same variables


@dataclass(frozen=True)
class EmbeddingNotSurjective:
    image: Term
    excluded: Term  # b, which is not in the image subalgebra


EndoClass = NotInjective | Automorphism | EmbeddingNotSurjective


def _signature(base_prefix, image) -> int:
    k = len(base_prefix)
    extra = {v for v in variables(image) if v > k + 1}
    if extra:
        raise ValueError(f"image uses variables beyond x{k + 1}: {sorted(extra)}")
    return k


def classify_endo(m: FreeModel, base_prefix: Sequence[Term], b: Term, image: Term) -> EndoClass:
    """Classify ``a_i -> a_i, b -> image(a, b)``.

    ``image`` is over ``x1..xk`` (standing for ``base_prefix``) and
    ``y = x<k+1>`` (standing for ``b``).  ``(base_prefix, b)`` must be
    independent; the caller certifies this.  A non-reduced image is reduced
    first.
    """
    k = _signature(base_prefix, image)
    y = k + 1
    t = reduce(image)
    point = list(base_prefix) + [b]
    n = count_var(t, y)
    if n == 0:
        return NotInjective(t, (b, evaluate(t, point, m)))
    if n == 1:
        return Automorphism(t, reduce(invert_single(t, y, y)))
    return EmbeddingNotSurjective(t, b)


def verify_endo_class(
    m: FreeModel,
    base_prefix: Sequence[Term],
    b: Term,
    cls: EndoClass,
    *,
    rank: int = 3,
    length_cap: int | None = None,
) -> bool:
    """Re-check a classification certificate by evaluation.

    Automorphism: the inverse undoes the map on every reduced term of rank
    ``<= rank`` over ``x1..x<k+1>``, and vice versa.  Embedding: the map is
    injective on those terms and ``b`` is missing from the closure of the
    image generators (at ``length_cap``).  Non-injective: the two elements
    of the pair are distinct and have the same image.
    """
    k = _signature(base_prefix, cls.image)
    y = k + 1
    point = list(base_prefix) + [b]
    t = cls.image
    if isinstance(cls, NotInjective):
        u, v = cls.pair
        # f(b) = t(a, b); f fixes t(a) because t(a) only involves the a_i
        fu = evaluate(t, point, m)
        fv = evaluate(t, list(base_prefix) + [None], m)
        return u == b and u != v and fu == fv == v
    terms = enumerate_reduced(k + 1, rank)
    forward = [reduce(substitute(s, y, t)) for s in terms]
    if isinstance(cls, Automorphism):
        r = cls.inverse
        c = evaluate(t, point, m)
        if evaluate(r, list(base_prefix) + [c], m) != b:
            return False
        for s, fs in zip(terms, forward):
            if reduce(substitute(fs, y, r)) != s:
                return False
            if reduce(substitute(reduce(substitute(s, y, r)), y, t)) != s:
                return False
        return True
    if isinstance(cls, EmbeddingNotSurjective):
        if len(set(forward)) != len(forward):
            return False
        c = evaluate(t, point, m)
        closure = m.closure(list(base_prefix) + [c], length_cap)
        return cls.excluded == b and b not in closure
    raise TypeError(f"unknown classification {cls!r}")


# -- substitution checks ----------------------------------------------------

@dataclass(frozen=True)
class SubstitutionReport:
    substituted: Term
    substituted_reduced: bool
    reducedness_guaranteed: bool  # r = r1*r2 with y in both factors
    collisions: tuple  # pairs of non-equivalent subterms of t that become equivalent


def substitution_check(t: Term, r: Term, z=None, y=None) -> SubstitutionReport:
    """Substitute ``r(x, y)`` for ``z`` in ``t(x, z)`` and check the outcome.

    Reports whether the result is reduced, whether reducedness is guaranteed
    (``r`` a product with ``y`` in both factors), and any pair of
    non-equivalent subterms of ``t`` whose substituted forms are equivalent.
    A guaranteed-but-unreduced result or a collision raises ``AssertionError``.
    """
    y = _default_y(r, y)
    z = _default_y(t, z)
    if y == z:
        raise ValueError("z and y must be distinct variables")
    if not (is_reduced(t) and is_reduced(r)):
        raise ValueError("t and r must be reduced")
    if count_var(r, y) == 0:
        raise ValueError(f"x{y} must occur in r")
    if count_var(t, y) or count_var(r, z):
        raise ValueError("y must not occur in t and z must not occur in r")
    tp = substitute(t, z, r)
    reduced = is_reduced(tp)
    guaranteed = isinstance(r, Prod) and count_var(r.left, y) > 0 and count_var(r.right, y) > 0
    classes = {canonicalize(s) for s in subterms(t)}
    image: dict[Term, Term] = {}
    collisions = []
    for s in sorted(classes, key=lambda s: s.sort_key):
        key = canonicalize(substitute(s, z, r))
        if key in image:
            collisions.append((image[key], s))
        else:
            image[key] = s
    if collisions or (guaranteed and not reduced):
        raise AssertionError(f"substitution check failed for t={t}, r={r}")
    return SubstitutionReport(tp, reduced, guaranteed, tuple(collisions))


# -- injectivity condition --------------------------------------------------

@dataclass(frozen=True)
class HoldsUpTo:
    bound: float


@dataclass(frozen=True)
class CounterexamplePair:
    first: Term
    second: Term


def injectivity_condition(
    t: Term, rank_bound: int, y=None, num_vars: int | None = None
) -> HoldsUpTo | CounterexamplePair:
    """Look for non-equivalent reduced ``r1, r2`` over ``x1..x<num_vars>`` with
    ``t(x, r1)`` and ``t(x, r2)`` reducing to the same term.

    A single occurrence of ``y`` makes ``t`` invertible, so the answer is
    ``HoldsUpTo(inf)`` without a search.
    """
    y = _default_y(t, y)
    num_vars = y - 1 if num_vars is None else num_vars
    if not is_reduced(t):
        raise ValueError("t must be reduced")
    n = count_var(t, y)
    if n == 0:
        raise ValueError(f"x{y} must occur in t")
    if n == 1:
        return HoldsUpTo(math.inf)
    if y <= num_vars:
        raise ValueError("y must be outside x1..x<num_vars>")
    if num_vars < 1:
        return HoldsUpTo(rank_bound)
    seen: dict[Term, Term] = {}
    for r in enumerate_reduced(num_vars, rank_bound):
        key = reduce(substitute(t, y, r))
        if key in seen:
            return CounterexamplePair(seen[key], r)
        seen[key] = r
    return HoldsUpTo(rank_bound)
