"""Elementary automorphisms and decomposition of automorphisms into them.

An elementary automorphism fixes every generator but one, ``a_i``, and sends
it to ``a_i * s(a)`` for a term ``s`` not involving ``x_i``; it is its own
inverse.  Every automorphism of a finitely generated free model is a finite
composition of elementary ones, and :func:`tame_decompose` finds such a
composition by repeatedly shortening the image terms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .models import FreeModel
from .morphisms import EndoSpec, apply_endo
from .terms import (
    CapExceeded,
    Prod,
    Term,
    Var,
    _cprod,
    count_var,
    enumerate_reduced,
    is_reduced,
    reduce,
    substitute_many,
)


class NotAnAutomorphism(ValueError):
    pass


@dataclass(frozen=True)
class ElementaryAuto:
    model: FreeModel
    pivot: int
    shift: Term

    def __post_init__(self):
        n = self.model.num_generators
        if not 1 <= self.pivot <= n:
            raise ValueError(f"pivot {self.pivot} outside 1..{n}")
        if count_var(self.shift, self.pivot):
            raise ValueError(f"x{self.pivot} occurs in the shift {self.shift}")
        object.__setattr__(self, "shift", self.model.element(self.shift))

    @property
    def spec(self) -> EndoSpec:
        images = list(self.model.generators())
        images[self.pivot - 1] = reduce(Prod(Var(self.pivot), self.shift))
        return EndoSpec(self.model, tuple(images))

    def __call__(self, e: Term) -> Term:
        return apply_endo(self.spec, e)

    def __str__(self):
        return f"x{self.pivot} -> (x{self.pivot}*{self.shift})"


def elementary(m: FreeModel, i: int, shift) -> ElementaryAuto:
    return ElementaryAuto(m, i, m.element(shift) if isinstance(shift, str) else shift)


# -- irreducibility ---------------------------------------------------------

@dataclass(frozen=True)
class Irreducible:
    pass


@dataclass(frozen=True)
class Witness:
    """``images[i-1]`` is the product of ``r(images)`` (reduced) and ``s``;
    ``r`` does not involve ``x_i``."""

    i: int
    r: Term
    s: Term


@dataclass(frozen=True)
class UnknownAtBound:
    length_cap: int


def _images(m: FreeModel, images) -> tuple[Term, ...]:
    if isinstance(images, EndoSpec):
        return images.images
    images = tuple(m.element(t) for t in images)
    if len(images) != m.num_generators:
        raise ValueError(f"need {m.num_generators} images, got {len(images)}")
    return images


def is_irreducible(
    m: FreeModel,
    images,
    *,
    length_cap: int | None = None,
    rounds: int = 3,
) -> Irreducible | Witness | UnknownAtBound:
    """Look for ``i`` such that a factor of ``images[i-1]`` lies in the
    subalgebra generated by the other images.

    Membership is decided by bounded closure: the cap starts at four times
    the longest image and doubles for ``rounds`` rounds.  If a search is
    cut off without an answer the result is ``UnknownAtBound``.
    """
    images = _images(m, images)
    if all(isinstance(t, Var) for t in images):
        return Irreducible()
    start = length_cap if length_cap is not None else 4 * max(t.length for t in images)
    unknown = 0
    for i, t in enumerate(images, 1):
        if not isinstance(t, Prod):
            continue
        others = [j for j in range(1, len(images) + 1) if j != i]
        if not others:
            continue
        gens = [images[j - 1] for j in others]
        # duplicates among the other images generate nothing new
        uniq = list(dict.fromkeys(gens))
        cap = start
        for _ in range(rounds):
            closure = m.closure(uniq, cap, track=True)
            for u, s in ((t.left, t.right), (t.right, t.left)):
                if u in closure:
                    back = {p: Var(others[gens.index(g)]) for p, g in enumerate(uniq, 1)}
                    r = substitute_many(closure.provenance[u], back)
                    if _cprod(reduce(substitute_many(r, _as_map(images))), s) != t:
                        raise AssertionError("irreducibility witness failed re-verification")
                    return Witness(i, r, s)
            if closure.saturated:
                break
            cap *= 2
        else:
            unknown = max(unknown, cap // 2)
    if unknown:
        return UnknownAtBound(unknown)
    return Irreducible()


def _as_map(images: Sequence[Term]) -> dict[int, Term]:
    return {i + 1: t for i, t in enumerate(images)}


def preserves_reduced(m: FreeModel, images, rank_bound: int) -> tuple[bool, Term | None]:
    """Substitute the images into every reduced term of rank ``<= rank_bound``;
    return ``(True, None)`` or ``(False, first term whose image is not reduced)``."""
    images = _images(m, images)
    mapping = _as_map(images)
    for r in enumerate_reduced(m.num_generators, rank_bound):
        if not is_reduced(substitute_many(r, mapping)):
            return False, r
    return True, None


# -- tame decomposition -------------------------------------------------------

@dataclass(frozen=True)
class TameDecomposition:
    """``factors[0] o factors[1] o ... o factors[-1]`` (the last acts first)."""

    factors: tuple
    lengths: tuple = field(default=(), compare=False)  # total image length at each step

    def __len__(self):
        return len(self.factors)


def compose(m: FreeModel, factors: Sequence[ElementaryAuto]) -> EndoSpec:
    acc = EndoSpec.identity(m)
    for f in factors:
        acc = acc.compose(f.spec)
    return acc


def _transpositions(perm: Sequence[int]) -> list[tuple[int, int]]:
    """Transpositions ``T_1..T_k`` with ``perm = T_1 o ... o T_k`` (1-based)."""
    current = list(perm)
    steps = []
    for i in range(1, len(current) + 1):
        if current[i - 1] != i:
            j = current.index(i) + 1
            current[i - 1], current[j - 1] = current[j - 1], current[i - 1]
            steps.append((i, j))
    return list(reversed(steps))


def tame_decompose(m: FreeModel, spec, **search) -> TameDecomposition:
    """Write an automorphism as a composition of elementary automorphisms.

    While some image is not a variable, find a witness ``images[i] ~
    r(images) * s`` and replace ``images[i]`` by ``s``; this composes the
    map with the elementary automorphism ``x_i -> x_i * r``.  The total image
    length must strictly decrease at each step.  The remaining permutation of
    generators is split into transpositions, each written as ``g o h o g``.
    """
    if not isinstance(spec, EndoSpec):
        spec = EndoSpec(m, tuple(spec))
    images = list(spec.images)
    tail: list[ElementaryAuto] = []
    lengths = [sum(t.length for t in images)]
    while not all(isinstance(t, Var) for t in images):
        w = is_irreducible(m, images, **search)
        if isinstance(w, Irreducible):
            raise NotAnAutomorphism(
                f"images {[str(t) for t in images]} are irreducible but not all variables"
            )
        if isinstance(w, UnknownAtBound):
            raise CapExceeded(f"no irreducibility witness found within length cap {w.length_cap}")
        h = ElementaryAuto(m, w.i, reduce(w.r))
        images[w.i - 1] = w.s
        total = sum(t.length for t in images)
        if total >= lengths[-1]:
            raise AssertionError("total image length failed to decrease")
        lengths.append(total)
        tail.insert(0, h)
    perm = [t.index for t in images]
    if sorted(perm) != list(range(1, m.num_generators + 1)):
        raise NotAnAutomorphism(f"generator images {perm} are not a permutation")
    head: list[ElementaryAuto] = []
    for i, j in _transpositions(perm):
        g = ElementaryAuto(m, i, Var(j))
        h = ElementaryAuto(m, j, Var(i))
        head.extend([g, h, g])
    dec = TameDecomposition(tuple(head + tail), tuple(lengths))
    if not verify_tame(m, dec, spec):
        raise AssertionError("decomposition does not reproduce the automorphism")
    return dec


def verify_tame(m: FreeModel, dec: TameDecomposition | Sequence[ElementaryAuto], spec) -> bool:
    if not isinstance(spec, EndoSpec):
        spec = EndoSpec(m, tuple(spec))
    factors = dec.factors if isinstance(dec, TameDecomposition) else tuple(dec)
    return compose(m, factors).images == spec.images
