from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import E, L, T, chain, tournament
from ramseyforge.core import (
    ArityMismatch,
    EmptySubset,
    EmptyUniverse,
    InvalidSignature,
    OutOfRangeElement,
    Signature,
    SignatureMismatch,
    Structure,
    automorphisms,
    canonical,
    canonical_bruteforce,
    compose,
    embeddings,
    induced,
    inverse,
    is_embedding,
    is_rigid,
    isomorphism,
    relabel,
    serialize,
    validate,
)

R3 = Signature.of("r", R=3)


def test_validate_minimal_arc():
    s = Structure(E, 2, (frozenset({(0, 1)}),))
    validate(E, s)


def test_validate_out_of_range():
    with pytest.raises(OutOfRangeElement) as exc:
        Structure.build(E, 2, {"E": [(0, 2)]})
    assert exc.value.relation == "E" and exc.value.tuple == (0, 2)


def test_validate_arity_mismatch():
    with pytest.raises(ArityMismatch):
        Structure.build(R3, 3, {"R": [(0, 1)]})


def test_validate_empty_universe_and_signature_mismatch():
    with pytest.raises(EmptyUniverse):
        Structure.build(E, 0)
    with pytest.raises(SignatureMismatch):
        validate(T, Structure.build(E, 1))


def test_bad_signatures():
    with pytest.raises(InvalidSignature):
        Signature(())
    with pytest.raises(InvalidSignature):
        Signature((("E", 2), ("E", 3)))


def test_signature_name_does_not_affect_equality():
    assert Signature.of("x", E=2) == Signature.of("y", E=2)


def test_induced_examples(cyc3, trans3, arc):
    assert induced(cyc3, [0, 1]) == (arc, (0, 1))
    assert induced(cyc3, [0, 1, 2])[0] == cyc3
    assert induced(trans3, [0, 2])[0] == arc


def test_induced_errors(cyc3):
    with pytest.raises(EmptySubset):
        induced(cyc3, [])
    with pytest.raises(OutOfRangeElement):
        induced(cyc3, [0, 3])


def test_embedding_counts(arc, cyc3, trans3):
    assert len(embeddings(arc, cyc3)) == 3
    assert len(embeddings(arc, trans3)) == 3
    assert [e.map for e in embeddings(arc, trans3)] == [(0, 1), (0, 2), (1, 2)]


def test_embeddings_signature_mismatch(arc):
    with pytest.raises(SignatureMismatch):
        embeddings(arc, chain(2))


def test_isomorphism_examples(cyc3, trans3):
    rotated = tournament(3, [(1, 2), (2, 0), (0, 1)])
    other = tournament(3, [(1, 0), (0, 2), (2, 1)])
    f = isomorphism(cyc3, other)
    assert f is not None and is_embedding(cyc3, other, f.map)
    assert isomorphism(cyc3, rotated).map == (0, 1, 2)
    assert isomorphism(cyc3, trans3) is None
    assert isomorphism(trans3, trans3).map == (0, 1, 2)


def test_automorphism_orders(cyc3, trans3):
    assert automorphisms(cyc3) == [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    assert automorphisms(trans3) == [(0, 1, 2)]
    assert automorphisms(Structure.build(E, 2)) == [(0, 1), (1, 0)]
    assert is_rigid(trans3) and not is_rigid(cyc3)


def test_canonical_examples(cyc3, trans3):
    other = tournament(3, [(1, 2), (2, 0), (0, 1)])
    assert canonical(other).relabeled == canonical(cyc3).relabeled
    assert canonical(trans3).relabeled != canonical(cyc3).relabeled
    single = Structure.build(T, 1)
    assert canonical(single).relabeled == single
    # lex-least sorted tuple list: arcs run from smaller to larger label
    assert canonical(trans3).relabeled.relation("arrow") == {(0, 1), (0, 2), (1, 2)}


def test_compose_and_inverse():
    p, q = (2, 0, 1), (1, 2, 0)
    assert compose(p, inverse(p)) == (0, 1, 2)
    assert compose(p, q) == tuple(p[x] for x in q)


@st.composite
def tournaments(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    arcs = []
    for x in range(n):
        for y in range(x + 1, n):
            arcs.append((x, y) if draw(st.booleans()) else (y, x))
    return tournament(n, arcs)


@settings(max_examples=150, deadline=None)
@given(s=tournaments(), data=st.data())
def test_canonical_is_relabeling_invariant(s, data):
    perm = data.draw(st.permutations(range(s.size)))
    t = relabel(s, perm)
    cs, ct = canonical(s), canonical(t)
    assert cs.relabeled == ct.relabeled
    assert relabel(s, cs.witness) == cs.relabeled
    assert serialize(cs.relabeled) <= serialize(s)


@settings(max_examples=100, deadline=None)
@given(s=tournaments(5))
def test_self_embeddings_are_automorphisms(s):
    auts = automorphisms(s)
    assert len(embeddings(s, s)) == len(auts)
    brute = [p for p in permutations(range(s.size)) if relabel(s, p) == s]
    assert auts == brute


@settings(max_examples=100, deadline=None)
@given(a=tournaments(3), c=tournaments(5))
def test_embeddings_are_brute_force_embeddings(a, c):
    expected = [f for f in permutations(range(c.size), a.size) if is_embedding(a, c, f)]
    assert [e.map for e in embeddings(a, c)] == expected


@settings(max_examples=60, deadline=None)
@given(s=tournaments(5))
def test_canonical_matches_bruteforce(s):
    assert canonical(s).relabeled == canonical_bruteforce(s).relabeled


def test_structure_dense_tables(cyc3):
    (table,) = cyc3.dense
    assert len(table) == 9
    assert [i for i, b in enumerate(table) if b] == [0 * 3 + 1, 1 * 3 + 2, 2 * 3 + 0]


def test_chain_serialization():
    assert serialize(chain(3)) == (3, 3, 0, 1, 0, 2, 1, 2)
    assert L.arities == (2,)
