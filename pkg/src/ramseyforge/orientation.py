"""Canonical orientation of 2-types and the order-or-failure decision.

Every rigid 2-element type is given a direction by an isomorphism-invariant
rule: of the two labelings of a pair, the arc runs from the first element of
the one with the smaller serialization. Choosing, type by type, either these
arcs or their converses builds up the digraph ``E``; the induction either
keeps ``E`` acyclic through all types, giving a total order on every
structure, or stops at a type whose pairs can be 2-coloured so that some
structure ``B`` never comes out monochromatic.

All acyclicity claims are relative to the representatives of the fragment.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from .classes import (
    AmalgamationInstance,
    ClassFragment,
    PropertyReport,
    check_hereditary,
    check_rigidity,
    find_amalgam,
    iso_types,
)
from .core import Structure, StructureError, Tuple, canonical, induced, serialize


class NonRigidPair(StructureError):
    """The swap of the pair is an automorphism of the induced substructure."""


class UnknownType(StructureError):
    """A pair's 2-type is missing from the type table."""


class CycleDetected(ValueError):
    def __init__(self, cycle: Sequence[int]):
        super().__init__(f"digraph has a directed cycle {list(cycle)}")
        self.cycle = tuple(cycle)


class InternalCycleContradiction(RuntimeError):
    """Paths both ways between a pair although ``E`` was verified acyclic."""


class PreconditionFailed(ValueError):
    def __init__(self, report: PropertyReport, message: str):
        super().__init__(message)
        self.report = report


class NotRigid(PreconditionFailed):
    pass


class NotHereditary(PreconditionFailed):
    pass


class Sign(str, Enum):
    CANONICAL = "canonical"
    REVERSED = "reversed"

    def flipped(self) -> "Sign":
        return Sign.REVERSED if self is Sign.CANONICAL else Sign.CANONICAL


INDEX_ORDER = "index-order"
LAYERED = "layered"


def _pair_keys(s: Structure, a: int, b: int) -> tuple[Tuple, Tuple]:
    return serialize(induced(s, (a, b))[0]), serialize(induced(s, (b, a))[0])


@lru_cache(maxsize=1 << 16)
def oriented_pairs(s: Structure) -> tuple[tuple[int, int, Tuple | None], ...]:
    """``(tail, head, type key)`` for every pair ``a < b`` of ``s``.

    The type key is the serialization of the canonical 2-element form; for a
    non-rigid pair it is None and the arc is ``(a, b)``.
    """
    out = []
    for a in range(s.size):
        for b in range(a + 1, s.size):
            kab, kba = _pair_keys(s, a, b)
            if kab == kba:
                out.append((a, b, None))
            elif kab < kba:
                out.append((a, b, kab))
            else:
                out.append((b, a, kba))
    return tuple(out)


@dataclass(frozen=True)
class PairTypeTable:
    """Canonical 2-element representatives ``A_0 .. A_{s-1}``, sorted by
    serialization. In each the canonical arc is ``0 -> 1``."""

    types: tuple[Structure, ...]

    def __post_init__(self):
        keys = [serialize(t) for t in self.types]
        if len(set(keys)) != len(keys):
            raise ValueError("type table lists a type twice")
        for t in self.types:
            if t.size != 2:
                raise ValueError("type table entries must have two elements")
            kab, kba = _pair_keys(t, 0, 1)
            if kab == kba:
                raise NonRigidPair(f"2-type {t!r} is not rigid")
            if kab > kba:
                raise ValueError("type table entries must be in canonical form")
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(keys)})

    @classmethod
    def from_fragment(cls, frag: ClassFragment) -> "PairTypeTable":
        return cls(tuple(iso_types(frag, 2)) if frag.bound >= 2 else ())

    @classmethod
    def from_types(cls, types: Iterable[Structure]) -> "PairTypeTable":
        canon = {serialize(c): c for c in (canonical(t).relabeled for t in types)}
        return cls(tuple(canon[k] for k in sorted(canon)))

    def __len__(self) -> int:
        return len(self.types)

    def index_of_key(self, key: Tuple) -> int | None:
        return self._index.get(key)

    def type_index(self, s: Structure, a: int, b: int) -> int:
        kab, kba = _pair_keys(s, a, b)
        i = self._index.get(min(kab, kba))
        if i is None:
            raise UnknownType(f"pair {{{a}, {b}}} has a 2-type outside the table")
        return i


def orient_pair(s: Structure, pair: Sequence[int], table: PairTypeTable | None = None) -> tuple[int, int, int | None]:
    """Canonical arc on ``{a, b}`` as ``(tail, head, type index)``.

    The index is None when no table is given.
    """
    a, b = pair
    if a == b:
        raise StructureError("a pair needs two distinct elements")
    kab, kba = _pair_keys(s, a, b)
    if kab == kba:
        raise NonRigidPair(f"pair {{{a}, {b}}} is not rigid")
    tail, head, key = (a, b, kab) if kab < kba else (b, a, kba)
    index = None
    if table is not None:
        index = table.index_of_key(key)
        if index is None:
            raise UnknownType(f"pair {{{a}, {b}}} has a 2-type outside the table")
    return tail, head, index


@dataclass(frozen=True)
class OrientationAssignment:
    """Sign per type index ``0 .. prefix_length - 1``: keep the canonical
    arcs or take their converses."""

    signs: tuple[Sign, ...] = ()

    @property
    def prefix_length(self) -> int:
        return len(self.signs)

    def extended(self, sign: Sign) -> "OrientationAssignment":
        return OrientationAssignment(self.signs + (sign,))

    def flipped(self) -> "OrientationAssignment":
        return OrientationAssignment(tuple(s.flipped() for s in self.signs))


@dataclass(frozen=True)
class TypedDigraph:
    size: int
    arcs: frozenset[tuple[int, int, int]]  # (tail, head, type index)
    base: Structure | None = None

    @classmethod
    def from_arcs(cls, size: int, arcs: Iterable[tuple[int, int]]) -> "TypedDigraph":
        return cls(size, frozenset((u, v, 0) for u, v in arcs))

    def successors(self) -> list[list[int]]:
        succ: list[set[int]] = [set() for _ in range(self.size)]
        for u, v, _ in self.arcs:
            succ[u].add(v)
        return [sorted(s) for s in succ]


def typed_digraph(s: Structure, table: PairTypeTable, asg: OrientationAssignment, only: int | None = None) -> TypedDigraph:
    """``E`` on ``s``: one arc for every pair whose type index is below
    ``asg.prefix_length`` (or equal to ``only``, when given)."""
    arcs = set()
    for tail, head, key in oriented_pairs(s):
        if key is None:
            raise NonRigidPair(f"pair {{{tail}, {head}}} is not rigid")
        t = table.index_of_key(key)
        if t is None:
            raise UnknownType(f"pair {{{tail}, {head}}} has a 2-type outside the table")
        if only is not None:
            if t != only:
                continue
        elif t >= asg.prefix_length:
            continue
        sign = asg.signs[t] if t < asg.prefix_length else Sign.CANONICAL
        arcs.add((tail, head, t) if sign is Sign.CANONICAL else (head, tail, t))
    return TypedDigraph(s.size, frozenset(arcs), s)


def shortest_cycle(d: TypedDigraph) -> tuple[int, ...] | None:
    """A shortest directed cycle, listed from its least possible start
    vertex; None if ``d`` is acyclic."""
    succ = d.successors()
    best: tuple[int, ...] | None = None
    for start in range(d.size):
        parent = {start: None}
        queue = deque([start])
        found = None
        while queue and found is None:
            u = queue.popleft()
            for v in succ[u]:
                if v == start:
                    found = u
                    break
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        if found is None:
            continue
        path = []
        u = found
        while u is not None:
            path.append(u)
            u = parent[u]
        cycle = tuple(reversed(path))
        if best is None or len(cycle) < len(best):
            best = cycle
    return best


def layered_order(d: TypedDigraph) -> list[int]:
    """Peel off the vertices with no incoming arcs, layer by layer.

    Each layer is listed in ascending order, so every arc ``u -> v`` has ``u``
    before ``v``.
    """
    indeg = [0] * d.size
    succ = d.successors()
    for u in range(d.size):
        for v in succ[u]:
            indeg[v] += 1
    remaining = set(range(d.size))
    order: list[int] = []
    while remaining:
        layer = sorted(v for v in remaining if indeg[v] == 0)
        if not layer:
            sub = TypedDigraph(d.size, frozenset(a for a in d.arcs if a[0] in remaining and a[1] in remaining))
            raise CycleDetected(shortest_cycle(sub))
        for u in layer:
            remaining.discard(u)
            for v in succ[u]:
                indeg[v] -= 1
        order.extend(layer)
    return order


def find_type_cycle(frag: ClassFragment, table: PairTypeTable, asg: OrientationAssignment, only: int | None = None) -> tuple[Structure, tuple[int, ...]] | None:
    """First representative (size, then serialization) on which ``E`` (or
    the single type ``only``) has a directed cycle, with a shortest cycle."""
    for s in frag.members():
        cycle = shortest_cycle(typed_digraph(s, table, asg, only))
        if cycle is not None:
            return s, cycle
    return None


@dataclass(frozen=True)
class Case2:
    """A pair of the next type with an ``E`` path one way only; ``sign``
    makes its arc follow that path."""

    sign: Sign
    structure: Structure
    path_from: int
    path_to: int


@dataclass(frozen=True)
class Case3:
    """No pair of the next type is joined by an ``E`` path."""


def _reachability(d: TypedDigraph) -> list[set[int]]:
    succ = d.successors()
    reach = []
    for u in range(d.size):
        seen: set[int] = set()
        stack = list(succ[u])
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(succ[v])
        reach.append(seen)
    return reach


def classify_reachability(frag: ClassFragment, table: PairTypeTable, asg: OrientationAssignment, next_type: int) -> Case2 | Case3:
    first: Case2 | None = None
    for s in frag.members():
        pairs = [(u, v) for u, v, key in oriented_pairs(s) if key is not None and table.index_of_key(key) == next_type]
        if not pairs:
            continue
        reach = _reachability(typed_digraph(s, table, asg))
        for u, v in pairs:
            forward, backward = v in reach[u], u in reach[v]
            if forward and backward:
                raise InternalCycleContradiction(f"paths both ways between {u} and {v} in {s!r}")
            if first is None and (forward or backward):
                # u -> v is the canonical arc
                if forward:
                    first = Case2(Sign.CANONICAL, s, u, v)
                else:
                    first = Case2(Sign.REVERSED, s, v, u)
    return first if first is not None else Case3()


@dataclass(frozen=True)
class OrderReduct:
    table: PairTypeTable
    assignment: OrientationAssignment
    orders: tuple[tuple[Structure, tuple[int, ...]], ...]
    bound: int


@dataclass(frozen=True)
class FailureWitness:
    """``a`` is the 2-type ``type_index``; no copy of ``b`` is monochromatic
    under ``rule``. ``cycles`` are in ``b``'s labels; ``assignment`` covers
    types ``0 .. type_index``."""

    a: Structure
    b: Structure
    type_index: int
    cycles: tuple[tuple[int, ...], ...]
    rule: str
    table: PairTypeTable
    assignment: OrientationAssignment
    bound: int
    case: str
    verified: int = 0


@dataclass(frozen=True)
class Inconclusive:
    bound: int
    reason: str
    table: PairTypeTable | None = None
    assignment: OrientationAssignment | None = None


DecisionOutcome = OrderReduct | FailureWitness | Inconclusive


def _cycle_witness(frag, table, asg, j, source, vertices, cycles, rule, case) -> FailureWitness:
    """Package an induced substructure as a canonical ``B``."""
    b_raw, _ = induced(source, vertices)
    pos = {v: i for i, v in enumerate(vertices)}
    cf = canonical(b_raw)
    mapped = tuple(_rotate(tuple(cf.witness[pos[v]] for v in c)) for c in cycles)
    return FailureWitness(
        a=table.types[j],
        b=cf.relabeled,
        type_index=j,
        cycles=mapped,
        rule=rule,
        table=table,
        assignment=asg,
        bound=frag.bound,
        case=case,
    )


def _rotate(cycle: tuple[int, ...]) -> tuple[int, ...]:
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


def _double_cycle_witness(frag: ClassFragment, table: PairTypeTable, asg: OrientationAssignment, case: str) -> FailureWitness | Inconclusive:
    """Both orientations of the next type close cycles with ``E``; realize a
    ``B`` containing one cycle of each."""
    j = asg.prefix_length
    fwd, bwd = asg.extended(Sign.CANONICAL), asg.extended(Sign.REVERSED)
    best = None
    first_fwd = first_bwd = None
    for s in frag.members():
        cf = shortest_cycle(typed_digraph(s, table, fwd))
        cb = shortest_cycle(typed_digraph(s, table, bwd))
        if cf is not None and first_fwd is None:
            first_fwd = (s, cf)
        if cb is not None and first_bwd is None:
            first_bwd = (s, cb)
        if cf is not None and cb is not None:
            verts = tuple(sorted(set(cf) | set(cb)))
            if best is None or len(verts) < len(best[1]):
                best = (s, verts, (cf, cb))
    if best is not None:
        s, verts, cycles = best
        return _cycle_witness(frag, table, fwd, j, s, verts, cycles, LAYERED, case)
    if first_fwd is None or first_bwd is None:
        return Inconclusive(frag.bound, f"type {j}: a cycle exists for only one orientation", table, asg)
    # no listed structure holds both cycles: amalgamate the two cycle
    # structures over a shared pair of type j
    (s1, c1), (s2, c2) = first_fwd, first_bwd
    b1, _ = induced(s1, tuple(sorted(c1)))
    b2, _ = induced(s2, tuple(sorted(c2)))
    f1 = _type_pair_in_cycle(s1, c1, table, j, sorted(c1))
    f2 = _type_pair_in_cycle(s2, c2, table, j, sorted(c2))
    found = find_amalgam(frag, AmalgamationInstance(table.types[j], b1, f1, b2, f2))
    if found is None:
        return Inconclusive(frag.bound, f"witness-realization-failed: no structure up to size {frag.bound} holds both cycles of type {j}", table, asg)
    c, g1, g2 = found
    p1 = {v: i for i, v in enumerate(sorted(c1))}
    p2 = {v: i for i, v in enumerate(sorted(c2))}
    cyc1 = tuple(g1[p1[v]] for v in c1)
    cyc2 = tuple(g2[p2[v]] for v in c2)
    verts = tuple(sorted(set(cyc1) | set(cyc2)))
    return _cycle_witness(frag, table, fwd, j, c, verts, (cyc1, cyc2), LAYERED, case + "-amalgam")


def _type_pair_in_cycle(s, cycle, table, j, order) -> Tuple:
    """Embedding of the 2-type ``j`` onto the first type-``j`` pair of the
    cycle, in positions of ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    for u, v in zip(cycle, cycle[1:] + cycle[:1]):
        tail, head, t = orient_pair(s, (u, v), table)
        if t == j:
            return (pos[tail], pos[head])
    raise AssertionError("cycle has no arc of the new type")


def extend_assignment(frag: ClassFragment, table: PairTypeTable, asg: OrientationAssignment) -> OrientationAssignment | FailureWitness | Inconclusive:
    """Orient type ``asg.prefix_length`` keeping ``E`` acyclic, or explain
    why neither orientation can."""
    j = asg.prefix_length
    reach = classify_reachability(frag, table, asg, j)
    if isinstance(reach, Case2):
        cand = asg.extended(reach.sign)
        if find_type_cycle(frag, table, cand) is None:
            return cand
        return _double_cycle_witness(frag, table, asg, "case2")
    for sign in (Sign.CANONICAL, Sign.REVERSED):
        cand = asg.extended(sign)
        if find_type_cycle(frag, table, cand) is None:
            return cand
    return _double_cycle_witness(frag, table, asg, "case3")


def orders_for(frag: ClassFragment, table: PairTypeTable, asg: OrientationAssignment) -> tuple[tuple[Structure, tuple[int, ...]], ...]:
    return tuple((s, tuple(layered_order(typed_digraph(s, table, asg)))) for s in frag.members())


def decide(frag: ClassFragment, verify: bool = True) -> DecisionOutcome:
    """Total-order reduct or Ramsey-failure witness for the fragment.

    Requires every 2-type to be rigid and the fragment to be hereditary.
    A returned witness is checked against every representative when
    ``verify`` is set; ``verified`` records how many passed.
    """
    table_frag = ClassFragment(frag.sig, min(frag.bound, 2), frag.reps[:2], frag.name)
    rigid2 = check_rigidity(table_frag)
    if not rigid2.holds:
        raise NotRigid(rigid2, "a 2-element structure has a non-trivial automorphism")
    hered = check_hereditary(frag)
    if not hered.holds:
        raise NotHereditary(hered, "fragment is not closed under induced substructures")
    table = PairTypeTable.from_fragment(frag)
    asg = OrientationAssignment()
    for j in range(len(table)):
        hit = find_type_cycle(frag, table, asg.extended(Sign.CANONICAL), only=j)
        if hit is not None:
            s, cycle = hit
            w = _cycle_witness(frag, table, asg.extended(Sign.CANONICAL), j, s, tuple(sorted(cycle)), (cycle,), INDEX_ORDER, "single-type-cycle")
            return _verified(frag, w) if verify else w
        if j == 0:
            asg = asg.extended(Sign.CANONICAL)
            continue
        step = extend_assignment(frag, table, asg)
        if isinstance(step, FailureWitness):
            return _verified(frag, step) if verify else step
        if isinstance(step, Inconclusive):
            return step
        asg = step
    return OrderReduct(table, asg, orders_for(frag, table, asg), frag.bound)


def _verified(frag: ClassFragment, w: FailureWitness) -> FailureWitness:
    from .ramsey import ColoringRule, verify_failure_witness  # ramsey imports this module

    rule = ColoringRule(w.rule, w.table, w.assignment, w.type_index)
    count = sum(1 for c in frag.members() if verify_failure_witness(w.a, w.b, c, rule).defeated)
    return replace(w, verified=count)
