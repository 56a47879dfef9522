"""Finite partial Steiner triple systems.

A partial STS is a finite point set with 3-point blocks such that every pair
of points lies in at most one block.  This module computes the predimension
``|points| - |blocks|``, searches for hyperfree (HF) orderings and exports
level truncations of free models as partial systems.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .formats import dumps_blocks, load_blocks, loads_blocks
from .models import FiniteModel, FreeModel, builtin_model


class PSTSError(ValueError):
    """A violation of the partial STS laws.  ``pair`` / ``block`` name the culprit."""

    def __init__(self, message, pair=None, block=None):
        super().__init__(message)
        self.pair = pair
        self.block = block


@dataclass(frozen=True)
class PartialSTS:
    points: tuple
    blocks: frozenset  # of frozenset

    def __post_init__(self):
        _check(self.points, self.blocks)

    def __len__(self):
        return len(self.points)

    def blocks_of(self, a) -> list[frozenset]:
        return [b for b in self.blocks if a in b]

    def induced(self, subset: Iterable) -> "PartialSTS":
        keep = set(subset)
        pts = tuple(p for p in self.points if p in keep)
        return PartialSTS(pts, frozenset(b for b in self.blocks if b <= keep))

    def sorted_blocks(self) -> list[tuple]:
        return sorted((tuple(sorted(b, key=_name_key)) for b in self.blocks),
                      key=lambda b: [_name_key(p) for p in b])

    def dumps(self) -> str:
        return dumps_blocks(self.points, self.sorted_blocks())


def _name_key(p) -> str:
    return str(p)


def _check(points, blocks):
    known = set(points)
    if len(known) != len(points):
        raise PSTSError("duplicate point names")
    owner: dict[frozenset, frozenset] = {}
    for block in blocks:
        if len(block) != 3:
            raise PSTSError(f"block {sorted(block, key=_name_key)} must have 3 distinct points",
                            block=block)
        for p in block:
            if p not in known:
                raise PSTSError(f"block {sorted(block, key=_name_key)} references unknown point {p!r}",
                                block=block)
        for pair in itertools.combinations(sorted(block, key=_name_key), 2):
            key = frozenset(pair)
            if key in owner and owner[key] != block:
                raise PSTSError(
                    f"pair {pair} lies in two blocks: "
                    f"{sorted(owner[key], key=_name_key)} and {sorted(block, key=_name_key)}",
                    pair=pair,
                    block=block,
                )
            owner[key] = block


def validate(points: Sequence[Hashable], blocks: Iterable[Sequence[Hashable]]) -> PartialSTS:
    """Build a :class:`PartialSTS`, raising :class:`PSTSError` on a violation."""
    frozen = []
    for block in blocks:
        fb = frozenset(block)
        if len(fb) != len(block):
            raise PSTSError(f"block {tuple(block)} repeats a point", block=tuple(block))
        frozen.append(fb)
    return PartialSTS(tuple(points), frozenset(frozen))


def loads(text: str) -> PartialSTS:
    return validate(*loads_blocks(text))


def load(path) -> PartialSTS:
    return validate(*load_blocks(path))


def delta(p: PartialSTS) -> int:
    """Predimension: number of points minus number of blocks."""
    return len(p.points) - len(p.blocks)


@dataclass(frozen=True)
class HFOrdering:
    order: tuple


@dataclass(frozen=True)
class ConfinedWitness:
    points: frozenset


def is_hf_ordering(p: PartialSTS, order: Sequence) -> bool:
    """Every point lies in at most one block whose other two points come earlier."""
    if sorted(order, key=_name_key) != sorted(p.points, key=_name_key) or len(set(order)) != len(order):
        return False
    pos = {a: i for i, a in enumerate(order)}
    for a in order:
        below = sum(1 for b in p.blocks_of(a) if all(pos[c] < pos[a] for c in b if c != a))
        if below > 1:
            return False
    return True


def is_confined(p: PartialSTS, subset: Iterable) -> bool:
    """Nonempty ``subset`` in which every point lies in at least two internal blocks."""
    sub = set(subset)
    if not sub:
        return False
    inner = [b for b in p.blocks if b <= sub]
    return all(sum(1 for b in inner if a in b) >= 2 for a in sub)


def hf_order(p: PartialSTS) -> HFOrdering | ConfinedWitness:
    """Greedy reverse construction of an HF-ordering.

    Repeatedly remove the least point lying in at most one block of what is
    left.  If everything is removed, the reversed removal order is an
    HF-ordering; otherwise what is left is a confined configuration.
    """
    left = set(p.points)
    live = set(p.blocks)
    count = {a: 0 for a in left}
    for b in live:
        for a in b:
            count[a] += 1
    removed = []
    while left:
        candidates = [a for a in left if count[a] <= 1]
        if not candidates:
            witness = frozenset(left)
            assert is_confined(p, witness)
            return ConfinedWitness(witness)
        a = min(candidates, key=_name_key)
        left.discard(a)
        removed.append(a)
        for b in [b for b in live if a in b]:
            live.discard(b)
            for c in b:
                count[c] -= 1
    order = tuple(reversed(removed))
    if not is_hf_ordering(p, order):
        raise AssertionError("greedy construction produced an invalid HF-ordering")
    return HFOrdering(order)


def hf_base(p: PartialSTS, ordering: HFOrdering | Sequence) -> set:
    """Points that are not the product of two earlier points."""
    order = ordering.order if isinstance(ordering, HFOrdering) else tuple(ordering)
    if not is_hf_ordering(p, order):
        raise ValueError("not an HF-ordering of this system")
    pos = {a: i for i, a in enumerate(order)}
    return {
        a for a in order
        if not any(all(pos[c] < pos[a] for c in b if c != a) for b in p.blocks_of(a))
    }


def prefix_deltas(p: PartialSTS, order: Sequence) -> list[int]:
    """Predimension of each prefix of ``order`` (starting with the empty prefix)."""
    pos = {a: i for i, a in enumerate(order)}
    out = [0]
    for a in order:
        new_blocks = sum(1 for b in p.blocks_of(a) if all(pos[c] < pos[a] for c in b if c != a))
        out.append(out[-1] + 1 - new_blocks)
    return out


def exhaustive_confined_subset(p: PartialSTS) -> frozenset | None:
    """Brute-force search for a confined subset; exponential in the point count."""
    pts = list(p.points)
    for size in range(1, len(pts) + 1):
        for subset in itertools.combinations(pts, size):
            if is_confined(p, subset):
                return frozenset(subset)
    return None


# -- free-model interchange ----------------------------------------------

def construction_order(m: FreeModel, k: int) -> list[str]:
    """Names of ``S_k`` listed level by level (canonical order within a level)."""
    levels = m.levels(k)
    out, seen = [], set()
    for level in levels:
        for e in sorted(level - seen, key=lambda t: t.sort_key):
            out.append(e.text)
        seen |= level
    return out


def from_free_levels(m: FreeModel, k: int) -> PartialSTS:
    """The partial system induced on ``S_k``; points are named by canonical term text."""
    elems = sorted(m.levels(k)[-1], key=lambda t: t.sort_key)
    members = set(elems)
    blocks = set()
    for a, b in itertools.combinations(elems, 2):
        c = m.mul(a, b)
        if c in members and c != a and c != b:
            blocks.add(frozenset((a.text, b.text, c.text)))
    return PartialSTS(tuple(e.text for e in elems), frozenset(blocks))


def builtin_sts(order: int) -> tuple[PartialSTS, FiniteModel]:
    model = builtin_model(order)
    return validate(model.points, model.blocks()), model
