"""Pair colourings, defeating-colouring checks and an exhaustive oracle.

``a`` is always a rigid 2-element structure, so its copies in ``c`` are just
the 2-subsets of ``c`` inducing a structure isomorphic to ``a``; colourings
are indexed by those pairs, stored as ``(x, y)`` with ``x < y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from . import kernels
from .core import Embedding, SignatureMismatch, Structure, StructureError, Tuple, canonical, embedding_maps, induced, serialize
from .orientation import (
    INDEX_ORDER,
    LAYERED,
    CycleDetected,
    NonRigidPair,
    OrientationAssignment,
    PairTypeTable,
    Sign,
    layered_order,
    orient_pair,
    typed_digraph,
)

DEFAULT_PAIR_LIMIT = 20


class Color(str, Enum):
    RED = "red"
    BLUE = "blue"

    def swapped(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


class RuleInapplicable(ValueError):
    """The rule's digraph has a cycle on ``c``; ``cycle`` is that cycle."""

    def __init__(self, message: str, cycle: Tuple = ()):
        super().__init__(message)
        self.cycle = tuple(cycle)


class SearchSpaceTooLarge(ValueError):
    def __init__(self, required: int, limit: int):
        super().__init__(f"{required} coloured pairs exceed the limit of {limit}")
        self.required = required
        self.limit = limit


@dataclass(frozen=True)
class PairColoring:
    base: Structure
    colored_type: Structure  # canonical 2-element form of the coloured type
    colors: tuple[tuple[tuple[int, int], Color], ...]  # sorted by pair

    def as_dict(self) -> dict[tuple[int, int], Color]:
        return dict(self.colors)

    def swapped(self) -> "PairColoring":
        return PairColoring(self.base, self.colored_type, tuple((p, c.swapped()) for p, c in self.colors))


@dataclass(frozen=True)
class WitnessStatus:
    """``is_witness``: every colouring of ``c`` has a monochromatic ``b``.
    ``copies`` counts embeddings ``b -> c``."""

    is_witness: bool
    defeating: PairColoring | None
    pairs: int
    copies: int
    defeating_count: int


@dataclass(frozen=True)
class ColoringRule:
    """How a failure witness colours a structure ``c``.

    ``index-order``: order ``c`` by element index. ``layered``: order ``c`` by
    the layered order of ``E`` on types ``0 .. type_index - 1``. Either way a
    type-``type_index`` pair is red when its arc agrees with the order.
    """

    rule: str
    table: PairTypeTable
    assignment: OrientationAssignment
    type_index: int

    @classmethod
    def for_pair_type(cls, a: Structure) -> "ColoringRule":
        """Index-order rule colouring the type of ``a`` by its canonical arc."""
        table = PairTypeTable.from_types([a])
        return cls(INDEX_ORDER, table, OrientationAssignment((Sign.CANONICAL,)), 0)


@dataclass(frozen=True)
class Verification:
    defeated: bool  # no monochromatic copy of b
    order: tuple[int, ...]
    coloring: PairColoring
    monochromatic: Embedding | None
    copies: int


def _two_type(a: Structure) -> Structure:
    if a.size != 2:
        raise StructureError("the coloured structure must have two elements")
    return canonical(a).relabeled


def type_pairs(a: Structure, c: Structure) -> list[tuple[int, int]]:
    """Pairs ``x < y`` of ``c`` inducing a copy of ``a``."""
    if a.sig != c.sig:
        raise SignatureMismatch("structures have different signatures")
    key = serialize(_two_type(a))
    out = []
    for x, y in combinations(range(c.size), 2):
        sub = induced(c, (x, y))[0]
        if min(serialize(sub), serialize(induced(c, (y, x))[0])) == key:
            out.append((x, y))
    return out


def coloring_from_order(c: Structure, order, table: PairTypeTable, asg: OrientationAssignment, type_index: int) -> PairColoring:
    """Red iff the pair's arc (canonical, or converse per ``asg``) runs
    forward in ``order``. Pairs of other types are not coloured."""
    pos = {v: i for i, v in enumerate(order)}
    sign = asg.signs[type_index]
    colors = []
    target = serialize(table.types[type_index])
    for x, y in combinations(range(c.size), 2):
        kxy = serialize(induced(c, (x, y))[0])
        kyx = serialize(induced(c, (y, x))[0])
        if min(kxy, kyx) != target:
            continue
        if kxy == kyx:
            raise NonRigidPair(f"pair {{{x}, {y}}} is not rigid")
        tail, head = (x, y) if kxy < kyx else (y, x)
        if sign is Sign.REVERSED:
            tail, head = head, tail
        colors.append(((x, y), Color.RED if pos[tail] < pos[head] else Color.BLUE))
    return PairColoring(c, table.types[type_index], tuple(colors))


def _copy_pairs(image, domain):
    return [p for p in combinations(sorted(image), 2) if p in domain]


def find_monochromatic(a: Structure, b: Structure, c: Structure, coloring: PairColoring) -> Embedding | None:
    """Least embedding ``b -> c`` whose coloured pairs all share a colour."""
    if not (a.sig == b.sig == c.sig):
        raise SignatureMismatch("structures have different signatures")
    _two_type(a)
    colors = coloring.as_dict()
    for f in embedding_maps(b, c):
        seen = {colors[p] for p in _copy_pairs(f, colors)}
        if len(seen) <= 1:
            return Embedding(b, c, f)
    return None


def rule_order(c: Structure, rule: ColoringRule) -> tuple[int, ...]:
    if rule.rule == INDEX_ORDER:
        return tuple(range(c.size))
    if rule.rule == LAYERED:
        prefix = OrientationAssignment(rule.assignment.signs[: rule.type_index])
        try:
            return tuple(layered_order(typed_digraph(c, rule.table, prefix)))
        except CycleDetected as exc:
            raise RuleInapplicable(f"E has a cycle {list(exc.cycle)} on this structure", exc.cycle) from None
    raise ValueError(f"unknown colouring rule {rule.rule!r}")


def verify_failure_witness(a: Structure, b: Structure, c: Structure, rule: ColoringRule) -> Verification:
    """Colour ``c`` by ``rule`` and look for a monochromatic ``b``."""
    order = rule_order(c, rule)
    coloring = coloring_from_order(c, order, rule.table, rule.assignment, rule.type_index)
    mono = find_monochromatic(a, b, c, coloring)
    copies = len(embedding_maps(b, c))
    return Verification(mono is None, order, coloring, mono, copies)


def _copy_masks(b: Structure, c: Structure, pairs: list[tuple[int, int]]) -> tuple[list[int], int]:
    """Distinct coloured-pair bitmasks of the copies of ``b``, and the number
    of embeddings behind them."""
    p = len(pairs)
    bit = {pair: p - 1 - j for j, pair in enumerate(pairs)}
    masks = set()
    maps = embedding_maps(b, c)
    for f in maps:
        m = 0
        for pair in _copy_pairs(f, bit):
            m |= 1 << bit[pair]
        masks.add(m)
    return sorted(masks), len(maps)


def _coloring_from_int(a, c, pairs, value) -> PairColoring:
    p = len(pairs)
    colors = tuple((pair, Color.BLUE if value >> (p - 1 - j) & 1 else Color.RED) for j, pair in enumerate(pairs))
    return PairColoring(c, _two_type(a), colors)


def exhaustive_witness_check(a: Structure, b: Structure, c: Structure, limit: int = DEFAULT_PAIR_LIMIT) -> WitnessStatus:
    """Try every red/blue colouring of the ``a``-pairs of ``c``.

    The reported defeating colouring is the least one, reading the pairs in
    sorted order with red before blue.
    """
    if not (a.sig == b.sig == c.sig):
        raise SignatureMismatch("structures have different signatures")
    pairs = type_pairs(a, c)
    if len(pairs) > limit:
        raise SearchSpaceTooLarge(len(pairs), limit)
    masks, copies = _copy_masks(b, c, pairs)
    count, least = kernels.defeat_search(len(pairs), masks)
    defeating = _coloring_from_int(a, c, pairs, least) if count else None
    return WitnessStatus(count == 0, defeating, len(pairs), copies, count)


def defeating_colorings(a: Structure, b: Structure, c: Structure, limit: int = DEFAULT_PAIR_LIMIT) -> list[PairColoring]:
    """Every defeating colouring, in lexicographic order, found by plain
    enumeration and per-copy checks (no incremental bookkeeping)."""
    pairs = type_pairs(a, c)
    if len(pairs) > limit:
        raise SearchSpaceTooLarge(len(pairs), limit)
    index = {pair: j for j, pair in enumerate(pairs)}
    copies = {tuple(index[q] for q in _copy_pairs(f, index)) for f in embedding_maps(b, c)}
    p = len(pairs)
    out = []
    for value in range(1 << p):
        colors = [value >> (p - 1 - j) & 1 for j in range(p)]
        if all(len({colors[j] for j in copy}) == 2 for copy in copies):
            out.append(_coloring_from_int(a, c, pairs, value))
    return out
