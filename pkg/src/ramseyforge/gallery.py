"""Builtin classes: tournaments, C-relations, their superposition, linear
orders, permutations (pairs of linear orders) and pure sets.

Every generator returns canonical representatives of all isomorphism types
of the requested size, sorted by serialization.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, partial
from itertools import combinations, permutations, product
from typing import Callable, Iterator, Union

from ._parallel import pmap
from .classes import BoundExceeded, ClassFragment
from .core import Signature, Structure, canonical, embedding_maps, serialize
from .ramsey import Color, PairColoring

TOURNAMENT_SIG = Signature.of("tournament", arrow=2)
C_SIG = Signature.of("crelation", C=3)
PRODUCT_SIG = Signature.of("product", arrow=2, C=3)
LINORDER_SIG = Signature.of("linorder", lt=2)
PERMUTATION_SIG = Signature.of("permutation", lt1=2, lt2=2)
PURESET_SIG = Signature.of("pureset", E=2)

Tree = Union[int, tuple["Tree", "Tree"]]


def _check_size(n: int, hi: int, what: str) -> None:
    if not 1 <= n <= hi:
        raise BoundExceeded(f"{what}: size {n} outside 1..{hi}")


def _unique(structures) -> list[Structure]:
    seen = {}
    for s in structures:
        c = canonical(s).relabeled
        seen.setdefault(serialize(c), c)
    return [seen[k] for k in sorted(seen)]


@lru_cache(maxsize=None)
def _tournaments(n: int) -> tuple[Structure, ...]:
    if n == 1:
        return (Structure.build(TOURNAMENT_SIG, 1),)
    out = []
    for t in _tournaments(n - 1):
        arcs = set(t.relation("arrow"))
        for mask in range(1 << (n - 1)):
            new = {(x, n - 1) if mask >> x & 1 else (n - 1, x) for x in range(n - 1)}
            out.append(Structure.build(TOURNAMENT_SIG, n, {"arrow": arcs | new}))
    return tuple(_unique(out))


def gen_tournaments(n: int) -> list[Structure]:
    """All ``n``-vertex tournaments up to isomorphism (one-vertex extensions
    of the ``n - 1`` types)."""
    _check_size(n, 6, "tournaments")
    return list(_tournaments(n))


@dataclass(frozen=True)
class BinaryLeafTree:
    """Rooted tree whose internal nodes have exactly two unordered children;
    leaves are ``0 .. n-1``. Internal nodes are nested pairs."""

    root: Tree

    def __post_init__(self):
        leaves = sorted(self.leaves())
        if leaves != list(range(len(leaves))) or not leaves:
            raise ValueError("leaves must be exactly 0..n-1")

    def leaves(self) -> list[int]:
        out: list[int] = []

        def walk(t):
            if isinstance(t, int):
                out.append(t)
            else:
                walk(t[0])
                walk(t[1])

        walk(self.root)
        return out

    @property
    def size(self) -> int:
        return len(self.leaves())

    def paths(self) -> dict[int, tuple[int, ...]]:
        """Root-to-leaf path of each leaf as a sequence of 0/1 branch choices."""
        out: dict[int, tuple[int, ...]] = {}

        def walk(t, path):
            if isinstance(t, int):
                out[t] = path
            else:
                walk(t[0], path + (0,))
                walk(t[1], path + (1,))

        walk(self.root, ())
        return out

    def c_relation(self) -> Structure:
        """``C(x, y, z)`` iff the root paths to ``y`` and ``z`` agree for
        longer than either agrees with the path to ``x``."""
        paths = self.paths()
        n = len(paths)

        def common(u, v):
            k = 0
            pu, pv = paths[u], paths[v]
            while k < len(pu) and k < len(pv) and pu[k] == pv[k]:
                k += 1
            return k

        triples = [
            (x, y, z)
            for x, y, z in permutations(range(n), 3)
            if common(y, z) > common(x, y) and common(y, z) > common(x, z)
        ]
        return Structure.build(C_SIG, n, {"C": triples})


def labeled_trees(n: int) -> Iterator[BinaryLeafTree]:
    """Every leaf-labelled tree on ``n`` leaves, once each: leaf ``k`` is
    inserted above any node of a tree on ``0 .. k-1``."""

    def insert(t, k):
        yield (t, k)
        if not isinstance(t, int):
            left, right = t
            for sub in insert(left, k):
                yield (sub, right)
            for sub in insert(right, k):
                yield (left, sub)

    def grow(t, k):
        if k == n:
            yield BinaryLeafTree(t)
            return
        for bigger in insert(t, k):
            yield from grow(bigger, k + 1)

    yield from grow(0, 1)


@lru_cache(maxsize=None)
def tree_shapes(n: int) -> tuple[Tree, ...]:
    """Unlabelled shapes on ``n`` leaves (leaves are placeholder -1)."""
    if n == 1:
        return (-1,)
    out = []
    for k in range(1, n // 2 + 1):
        left, right = tree_shapes(k), tree_shapes(n - k)
        for i, a in enumerate(left):
            for j, b in enumerate(right):
                if k == n - k and j < i:
                    continue
                out.append((a, b))
    return tuple(out)


def _label(shape: Tree) -> Tree:
    counter = iter(range(1 << 30))

    def walk(t):
        if isinstance(t, int):
            return next(counter)
        return (walk(t[0]), walk(t[1]))

    return walk(shape)


def gen_c_structures(n: int) -> list[Structure]:
    """C-relations on ``n`` leaves up to isomorphism, one candidate per tree
    shape."""
    _check_size(n, 7, "C-structures")
    return _unique(BinaryLeafTree(_label(shape)).c_relation() for shape in tree_shapes(n))


def _superpose(t: Structure, c: Structure) -> Structure:
    return Structure.build(PRODUCT_SIG, t.size, {"arrow": t.relation("arrow"), "C": c.relation("C")})


@lru_cache(maxsize=None)
def _products(n: int) -> tuple[Structure, ...]:
    trees = [tree.c_relation() for tree in labeled_trees(n)]
    return tuple(_unique(_superpose(t, c) for t in _tournaments(n) for c in trees))


def gen_products(n: int) -> list[Structure]:
    """Tournament and C-relation on one set, chosen independently. Relabelling
    fixes the tournament to its canonical form, so pairing each tournament
    type with every labelled tree reaches every type."""
    _check_size(n, 5, "products")
    return list(_products(n))


def gen_linear_orders(n: int) -> list[Structure]:
    _check_size(n, 7, "linear orders")
    return [Structure.build(LINORDER_SIG, n, {"lt": combinations(range(n), 2)})]


def gen_permutations(n: int) -> list[Structure]:
    """Two linear orders on one set: ``lt1`` the natural order, ``lt2`` the
    order of the permutation's values."""
    _check_size(n, 5, "permutations")
    out = []
    for perm in permutations(range(n)):
        lt2 = [(i, j) for i, j in product(range(n), repeat=2) if perm[i] < perm[j]]
        out.append(Structure.build(PERMUTATION_SIG, n, {"lt1": combinations(range(n), 2), "lt2": lt2}))
    return _unique(out)


def gen_pure_sets(n: int) -> list[Structure]:
    _check_size(n, 7, "pure sets")
    return [Structure.build(PURESET_SIG, n)]


BUILTINS: dict[str, tuple[Signature, Callable[[int], list[Structure]], int]] = {
    "tournaments": (TOURNAMENT_SIG, gen_tournaments, 6),
    "corder": (C_SIG, gen_c_structures, 7),
    "product": (PRODUCT_SIG, gen_products, 5),
    "linorder": (LINORDER_SIG, gen_linear_orders, 7),
    "permutations": (PERMUTATION_SIG, gen_permutations, 5),
    "pureset": (PURESET_SIG, gen_pure_sets, 7),
}


def fragment(name: str, max_size: int) -> ClassFragment:
    """Builtin class as a fragment with all types of size ``1..max_size``."""
    try:
        sig, gen, hi = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin class {name!r}; choose from {sorted(BUILTINS)}") from None
    _check_size(max_size, hi, name)
    reps = tuple(tuple(gen(n)) for n in range(1, max_size + 1))
    return ClassFragment(sig, max_size, reps, name)


@dataclass(frozen=True)
class Section3Row:
    label: str
    structure: Structure
    copies: int
    monochromatic: int


@dataclass(frozen=True)
class Section3Report:
    a: Structure
    b: Structure
    max_size: int
    rows: tuple[Section3Row, ...]

    @property
    def verified(self) -> bool:
        return all(r.monochromatic == 0 for r in self.rows)


def arc_order_coloring(c: Structure, colored_type: Structure) -> PairColoring:
    """Arc ``u -> v`` is red when ``u < v`` and blue otherwise."""
    colors = tuple(((min(u, v), max(u, v)), Color.RED if u < v else Color.BLUE) for u, v in sorted(c.relation("arrow")))
    return PairColoring(c, colored_type, tuple(sorted(colors)))


def _section3_row(a: Structure, b: Structure, item) -> Section3Row:
    label, c = item
    colors = arc_order_coloring(c, a).as_dict()
    copies = embedding_maps(b, c)
    mono = sum(1 for f in copies if len({colors[p] for p in combinations(sorted(f), 2)}) == 1)
    return Section3Row(label, c, len(copies), mono)


def section3_pair() -> tuple[Structure, Structure]:
    """The unique 2-element product and the 3-element product whose
    tournament is a 3-cycle."""
    (a,) = gen_products(2)
    cyclic = [s for s in gen_products(3) if _is_cyclic_triangle(s)]
    (b,) = cyclic
    return a, b


def _is_cyclic_triangle(s: Structure) -> bool:
    out = [0] * s.size
    for u, _ in s.relation("arrow"):
        out[u] += 1
    return all(d == 1 for d in out)


def demo_section3(max_size: int) -> Section3Report:
    """Colour every product structure up to ``max_size`` by arc direction
    against the index order and count monochromatic cyclic triangles."""
    _check_size(max_size, 5, "demo section3")
    a, b = section3_pair()
    frag = fragment("product", max_size)
    items = [(frag.label(c), c) for c in frag.members()]
    rows = pmap(partial(_section3_row, a, b), items)
    return Section3Report(a, b, max_size, tuple(rows))
