"""Finite fragments of hereditary classes and bounded Fraisse-property checks.

Every checker answers "holds up to the fragment's bound": a failure comes
with a counterexample that :func:`recheck_witness` confirms directly, while
success only covers the structures the fragment lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from itertools import combinations, permutations
from typing import Any, Iterable, Iterator

from ._parallel import pmap
from .core import (
    Signature,
    Structure,
    StructureError,
    Tuple,
    automorphisms,
    canonical,
    compose,
    embedding_maps,
    induced,
    is_embedding,
    serialize,
    validate,
)

PROPERTIES = ("hereditary", "jep", "amalgamation", "strong-amalgamation", "rigid")


class BoundExceeded(StructureError):
    pass


@dataclass(frozen=True)
class ClassFragment:
    """Isomorphism-type representatives for sizes ``1..bound``.

    ``reps[n - 1]`` lists the size-``n`` types in canonical form, sorted by
    :func:`serialize`.
    """

    sig: Signature
    bound: int
    reps: tuple[tuple[Structure, ...], ...]
    name: str = field(default="fragment", compare=False)

    @classmethod
    def from_structures(cls, sig: Signature, structures: Iterable[Structure], bound: int | None = None, name: str = "fragment") -> "ClassFragment":
        """Canonicalize, drop isomorphic duplicates and sizes above ``bound``."""
        seen: dict[int, dict[Tuple, Structure]] = {}
        for s in structures:
            validate(sig, s)
            if bound is not None and s.size > bound:
                continue
            c = canonical(s).relabeled
            seen.setdefault(c.size, {})[serialize(c)] = c
        if bound is None:
            bound = max(seen, default=1)
        if bound < 1:
            raise BoundExceeded("fragment bound must be positive")
        reps = tuple(tuple(seen.get(n, {})[k] for k in sorted(seen.get(n, {}))) for n in range(1, bound + 1))
        return cls(sig, bound, reps, name)

    def of_size(self, n: int) -> tuple[Structure, ...]:
        if n < 1 or n > self.bound:
            return ()
        return self.reps[n - 1]

    def members(self) -> Iterator[Structure]:
        """All representatives, by size and then serialization."""
        for row in self.reps:
            yield from row

    def position(self, s: Structure) -> tuple[int, int]:
        """``(size, index)`` of the representative isomorphic to ``s``."""
        c = canonical(s).relabeled
        row = self.of_size(c.size)
        for i, r in enumerate(row):
            if r == c:
                return c.size, i
        raise KeyError("structure is not in the fragment")

    def contains(self, s: Structure) -> bool:
        try:
            self.position(s)
        except KeyError:
            return False
        return True

    def label(self, s: Structure) -> str:
        n, i = self.position(s)
        return f"n{n}_{i}"


@dataclass(frozen=True)
class PropertyReport:
    property: str
    holds: bool
    witness: Any
    search_bound: int


@dataclass(frozen=True)
class AmalgamationInstance:
    """Embeddings ``f1: a -> b1`` and ``f2: a -> b2`` to be amalgamated."""

    a: Structure
    b1: Structure
    f1: Tuple
    b2: Structure
    f2: Tuple


def iso_types(frag: ClassFragment, n: int) -> list[Structure]:
    if n < 1 or n > frag.bound:
        raise BoundExceeded(f"size {n} is outside 1..{frag.bound}")
    return list(frag.of_size(n))


def check_hereditary(frag: ClassFragment) -> PropertyReport:
    """Every induced substructure of a listed structure is listed.

    Subsets are tried largest first, so the witness is a missing maximal
    substructure where one exists.
    """
    for s in frag.members():
        for k in range(s.size - 1, 0, -1):
            for subset in combinations(range(s.size), k):
                if not frag.contains(induced(s, subset)[0]):
                    return PropertyReport("hereditary", False, (s, subset), frag.bound)
    return PropertyReport("hereditary", True, None, frag.bound)


def _embeds(a: Structure, c: Structure) -> bool:
    return bool(embedding_maps(a, c, first_only=True))


def check_jep(frag: ClassFragment) -> PropertyReport:
    members = list(frag.members())
    for i, b1 in enumerate(members):
        for b2 in members[i:]:
            if b1.size + b2.size > frag.bound:
                continue
            lo = max(b1.size, b2.size)
            if not any(_embeds(b1, c) and _embeds(b2, c) for n in range(lo, frag.bound + 1) for c in frag.of_size(n)):
                return PropertyReport("jep", False, (b1, b2), frag.bound)
    return PropertyReport("jep", True, None, frag.bound)


def amalgamation_instances(frag: ClassFragment, instance_bound: int | None = None) -> list[AmalgamationInstance]:
    """Instances with every size at most ``instance_bound`` (default: bound)
    and ``|b1| + |b2| - |a| <= bound``, one per equivalence class.

    Instances related by automorphisms of ``a``, ``b1``, ``b2`` or by swapping
    the two sides are equivalent; the one with the least key is kept.
    """
    cap = frag.bound if instance_bound is None else min(instance_bound, frag.bound)
    members = [s for s in frag.members() if s.size <= cap]
    index = {s: i for i, s in enumerate(members)}
    auts = {s: automorphisms(s) for s in members}
    out: dict[tuple, AmalgamationInstance] = {}
    for a in members:
        for b1 in members:
            if b1.size < a.size:
                continue
            f1s = embedding_maps(a, b1)
            if not f1s:
                continue
            for b2 in members[index[b1]:]:
                if b2.size < a.size or b1.size + b2.size - a.size > frag.bound:
                    continue
                f2s = embedding_maps(a, b2)
                for f1 in f1s:
                    for f2 in f2s:
                        key = _instance_key(index, auts, a, b1, f1, b2, f2)
                        if key not in out:
                            out[key] = AmalgamationInstance(a, b1, f1, b2, f2)
    return [out[k] for k in sorted(out)]


def _instance_key(index, auts, a, b1, f1, b2, f2):
    best = None
    for g in auts[a]:
        for al1 in auts[b1]:
            p = (index[b1], compose(al1, compose(f1, g)))
            for al2 in auts[b2]:
                q = (index[b2], compose(al2, compose(f2, g)))
                cand = (index[a],) + (min(p, q), max(p, q))
                if best is None or cand < best:
                    best = cand
    return best


def find_amalgam(frag: ClassFragment, inst: AmalgamationInstance, strong: bool = False) -> tuple[Structure, Tuple, Tuple] | None:
    """First ``(c, g1, g2)`` with ``g1 . f1 = g2 . f2`` among the listed
    structures (and, if ``strong``, images meeting only in the image of a)."""
    a, b1, f1, b2, f2 = inst.a, inst.b1, inst.f1, inst.b2, inst.f2
    lo = b1.size + b2.size - a.size if strong else max(b1.size, b2.size)
    for n in range(lo, frag.bound + 1):
        for c in frag.of_size(n):
            for g1 in embedding_maps(b1, c):
                fixed = {f2[x]: g1[f1[x]] for x in range(a.size)}
                for g2 in embedding_maps(b2, c, fixed):
                    if strong and set(g1) & set(g2) != {g1[f1[x]] for x in range(a.size)}:
                        continue
                    return c, g1, g2
    return None


def _fails(frag, strong, inst):
    return find_amalgam(frag, inst, strong) is None


def check_amalgamation(frag: ClassFragment, strong: bool = False, instance_bound: int | None = None) -> PropertyReport:
    name = "strong-amalgamation" if strong else "amalgamation"
    instances = amalgamation_instances(frag, instance_bound)
    failed = pmap(partial(_fails, frag, strong), instances)
    for inst, bad in zip(instances, failed):
        if bad:
            return PropertyReport(name, False, inst, frag.bound)
    return PropertyReport(name, True, None, frag.bound)


def check_rigidity(frag: ClassFragment) -> PropertyReport:
    """Witness: a structure and its least non-identity automorphism."""
    for s in frag.members():
        auts = automorphisms(s)
        if len(auts) > 1:
            return PropertyReport("rigid", False, (s, auts[1]), frag.bound)
    return PropertyReport("rigid", True, None, frag.bound)


def check_property(frag: ClassFragment, prop: str, instance_bound: int | None = None) -> PropertyReport:
    if prop == "hereditary":
        return check_hereditary(frag)
    if prop == "jep":
        return check_jep(frag)
    if prop in ("amalgamation", "strong-amalgamation", "strong"):
        return check_amalgamation(frag, strong=prop != "amalgamation", instance_bound=instance_bound)
    if prop == "rigid":
        return check_rigidity(frag)
    raise ValueError(f"unknown property {prop!r}")


def recheck_witness(frag: ClassFragment, report: PropertyReport) -> bool:
    """Confirm a failure witness by direct relation comparison.

    Uses only brute-force primitives, never the search that produced it.
    """
    if report.holds:
        return False
    w = report.witness
    if report.property == "hereditary":
        s, subset = w
        sub = induced(s, subset)[0]
        return not any(_iso_brute(sub, r) for r in frag.of_size(sub.size))
    if report.property == "jep":
        b1, b2 = w
        return not any(
            _embeds_brute(b1, c) and _embeds_brute(b2, c)
            for n in range(max(b1.size, b2.size), frag.bound + 1)
            for c in frag.of_size(n)
        )
    if report.property in ("amalgamation", "strong-amalgamation"):
        strong = report.property == "strong-amalgamation"
        inst = w
        if not (is_embedding(inst.a, inst.b1, inst.f1) and is_embedding(inst.a, inst.b2, inst.f2)):
            return False
        for n in range(max(inst.b1.size, inst.b2.size), frag.bound + 1):
            for c in frag.of_size(n):
                for g1 in permutations(range(c.size), inst.b1.size):
                    if not is_embedding(inst.b1, c, g1):
                        continue
                    for g2 in permutations(range(c.size), inst.b2.size):
                        if not is_embedding(inst.b2, c, g2):
                            continue
                        if any(g1[inst.f1[x]] != g2[inst.f2[x]] for x in range(inst.a.size)):
                            continue
                        common = {g1[inst.f1[x]] for x in range(inst.a.size)}
                        if not strong or set(g1) & set(g2) == common:
                            return False
        return True
    if report.property == "rigid":
        s, perm = w
        return tuple(perm) != tuple(range(s.size)) and is_embedding(s, s, perm)
    return False


def _embeds_brute(a: Structure, c: Structure) -> bool:
    return any(is_embedding(a, c, f) for f in permutations(range(c.size), a.size))


def _iso_brute(a: Structure, b: Structure) -> bool:
    return a.size == b.size and _embeds_brute(a, b)
