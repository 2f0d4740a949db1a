"""Finite relational structures.

A :class:`Structure` lives on the universe ``{0, ..., n-1}`` and carries one
tuple set per relation of its :class:`Signature`. Embeddings preserve and
reflect every relation, so they are exactly the isomorphisms onto induced
substructures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Mapping, Sequence

from . import kernels

Tuple = tuple[int, ...]


class StructureError(ValueError):
    """Base class for malformed signatures, structures and arguments."""

    def __init__(self, message: str, *, relation: str | None = None, tuple_: Tuple | None = None):
        super().__init__(message)
        self.relation = relation
        self.tuple = tuple_
        self.line: int | None = None


class ArityMismatch(StructureError):
    pass


class OutOfRangeElement(StructureError):
    pass


class EmptyUniverse(StructureError):
    pass


class EmptySubset(StructureError):
    pass


class SignatureMismatch(StructureError):
    pass


class InvalidSignature(StructureError):
    pass


@dataclass(frozen=True)
class Signature:
    """Ordered relation names with arities. ``name`` is a file label only and
    takes no part in equality."""

    relations: tuple[tuple[str, int], ...]
    name: str = field(default="sig", compare=False)

    def __post_init__(self):
        rels = tuple((str(n), int(a)) for n, a in self.relations)
        object.__setattr__(self, "relations", rels)
        if not rels:
            raise InvalidSignature("signature needs at least one relation")
        names = [n for n, _ in rels]
        if len(set(names)) != len(names):
            raise InvalidSignature(f"duplicate relation names in {names}")
        for n, a in rels:
            if a < 1:
                raise InvalidSignature(f"relation {n!r} has arity {a} < 1", relation=n)

    @classmethod
    def of(cls, name: str = "sig", **arities: int) -> "Signature":
        return cls(tuple(arities.items()), name=name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.relations)

    def index(self, relation: str) -> int:
        try:
            return self.names.index(relation)
        except ValueError:
            raise StructureError(f"unknown relation {relation!r}", relation=relation) from None


@dataclass(frozen=True, eq=True)
class Structure:
    sig: Signature
    size: int
    tuples: tuple[frozenset[Tuple], ...]

    def __post_init__(self):
        object.__setattr__(self, "tuples", tuple(frozenset(map(tuple, ts)) for ts in self.tuples))

    @classmethod
    def build(cls, sig: Signature, size: int, relations: Mapping[str, Iterable[Sequence[int]]] | None = None) -> "Structure":
        """Build and validate. Relations missing from ``relations`` are empty."""
        relations = dict(relations or {})
        for name in relations:
            sig.index(name)
        s = cls(sig, size, tuple(frozenset(tuple(t) for t in relations.get(n, ())) for n in sig.names))
        validate(sig, s)
        return s

    def relation(self, name: str) -> frozenset[Tuple]:
        return self.tuples[self.sig.index(name)]

    def holds(self, name: str, *elements: int) -> bool:
        return tuple(elements) in self.relation(name)

    @cached_property
    def dense(self) -> tuple[bytes, ...]:
        """One ``n ** arity`` byte table per relation (kernel input)."""
        n = self.size
        out = []
        for (_, arity), ts in zip(self.sig.relations, self.tuples):
            table = bytearray(n**arity)
            for t in ts:
                idx = 0
                for x in t:
                    idx = idx * n + x
                table[idx] = 1
            out.append(bytes(table))
        return tuple(out)

    def __repr__(self) -> str:
        rels = ", ".join(f"{n}={sorted(ts)}" for n, ts in zip(self.sig.names, self.tuples))
        return f"Structure(n={self.size}, {rels})"


def validate(sig: Signature, s: Structure) -> None:
    """Raise the first invariant violation of ``s`` against ``sig``."""
    if s.sig != sig:
        raise SignatureMismatch("structure signature differs from the expected one")
    if s.size < 1:
        raise EmptyUniverse("structures must be non-empty")
    if len(s.tuples) != len(sig.relations):
        raise ArityMismatch("one tuple set per relation is required")
    for (name, arity), ts in zip(sig.relations, s.tuples):
        for t in sorted(ts):
            if len(t) != arity:
                raise ArityMismatch(
                    f"tuple {t} of {name!r} has length {len(t)}, arity is {arity}", relation=name, tuple_=t
                )
            for x in t:
                if not 0 <= x < s.size:
                    raise OutOfRangeElement(
                        f"element {x} of tuple {t} in {name!r} is outside 0..{s.size - 1}", relation=name, tuple_=t
                    )


def serialize(s: Structure) -> Tuple:
    """Flat integer key: size, then per relation (signature order) the tuple
    count followed by the sorted tuples. Relabelings of one structure share
    size and counts, so among them this is plain lexicographic order of the
    sorted tuple lists."""
    out = [s.size]
    for ts in s.tuples:
        out.append(len(ts))
        for t in sorted(ts):
            out.extend(t)
    return tuple(out)


def relabel(s: Structure, perm: Sequence[int]) -> Structure:
    """Image of ``s`` under the bijection ``x -> perm[x]``."""
    return Structure(s.sig, s.size, tuple(frozenset(tuple(perm[x] for x in t) for t in ts) for ts in s.tuples))


def induced(s: Structure, subset: Sequence[int]) -> tuple[Structure, Tuple]:
    """Substructure on ``subset``; new element ``i`` is ``subset[i]``."""
    subset = tuple(subset)
    if not subset:
        raise EmptySubset("induced substructure needs at least one element")
    for x in subset:
        if not 0 <= x < s.size:
            raise OutOfRangeElement(f"element {x} outside 0..{s.size - 1}")
    if len(set(subset)) != len(subset):
        raise StructureError(f"subset {subset} repeats an element")
    pos = {x: i for i, x in enumerate(subset)}
    rels = []
    for ts in s.tuples:
        rels.append(frozenset(tuple(pos[x] for x in t) for t in ts if all(x in pos for x in t)))
    return Structure(s.sig, len(subset), tuple(rels)), subset


@dataclass(frozen=True)
class Embedding:
    source: Structure
    target: Structure
    map: Tuple

    def __call__(self, x: int) -> int:
        return self.map[x]

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.map)


def is_embedding(a: Structure, c: Structure, f: Sequence[int]) -> bool:
    """Direct check over all tuples of ``a``'s universe."""
    if len(f) != a.size or len(set(f)) != len(f) or any(not 0 <= y < c.size for y in f):
        return False
    for (_, arity), ta, tc in zip(a.sig.relations, a.tuples, c.tuples):
        for t in product(range(a.size), repeat=arity):
            if (t in ta) != (tuple(f[x] for x in t) in tc):
                return False
    return True


def _same_sig(a: Structure, c: Structure) -> None:
    if a.sig != c.sig:
        raise SignatureMismatch("structures have different signatures")


def embedding_maps(a: Structure, c: Structure, fixed: Mapping[int, int] | None = None, first_only: bool = False) -> list[Tuple]:
    _same_sig(a, c)
    pinned = [-1] * a.size
    for x, y in (fixed or {}).items():
        pinned[x] = y
    return kernels.embed_search(a.size, c.size, a.sig.arities, a.dense, c.dense, pinned, first_only)


def embeddings(a: Structure, c: Structure, fixed: Mapping[int, int] | None = None) -> list[Embedding]:
    """All embeddings ``a -> c`` in lexicographic order of the map.

    ``fixed`` pins some source elements to given targets.
    """
    return [Embedding(a, c, f) for f in embedding_maps(a, c, fixed)]


def isomorphism(a: Structure, b: Structure) -> Embedding | None:
    """Lexicographically least isomorphism ``a -> b``, or None."""
    _same_sig(a, b)
    if a.size != b.size or tuple(map(len, a.tuples)) != tuple(map(len, b.tuples)):
        return None
    found = embedding_maps(a, b, first_only=True)
    return Embedding(a, b, found[0]) if found else None


def automorphisms(s: Structure) -> list[Tuple]:
    """The automorphism group as a sorted list of permutations."""
    return embedding_maps(s, s)


def is_rigid(s: Structure) -> bool:
    return len(embedding_maps(s, s)) == 1


@dataclass(frozen=True)
class CanonicalForm:
    relabeled: Structure
    witness: Tuple  # original element x becomes witness[x]


def canonical(s: Structure) -> CanonicalForm:
    """The relabeling of ``s`` with the least :func:`serialize` key."""
    perm = kernels.canon_search(s.size, s.sig.arities, s.dense)
    return CanonicalForm(relabel(s, perm), perm)


def canonical_bruteforce(s: Structure) -> CanonicalForm:
    """Reference: try all ``n!`` relabelings."""
    best = None
    for perm in permutations(range(s.size)):
        r = relabel(s, perm)
        key = serialize(r)
        if best is None or key < best[0]:
            best = (key, r, perm)
    return CanonicalForm(best[1], best[2])


def compose(p: Sequence[int], q: Sequence[int]) -> Tuple:
    """``x -> p[q[x]]``."""
    return tuple(p[x] for x in q)


def inverse(p: Sequence[int]) -> Tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)
