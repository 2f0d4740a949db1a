import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T, chain, tournament
from ramseyforge.classes import ClassFragment
from ramseyforge.core import Signature, Structure, embedding_maps, induced, isomorphism, relabel, serialize
from ramseyforge.gallery import fragment
from ramseyforge.orientation import (
    INDEX_ORDER,
    LAYERED,
    Case2,
    Case3,
    CycleDetected,
    FailureWitness,
    Inconclusive,
    InternalCycleContradiction,
    NonRigidPair,
    NotHereditary,
    NotRigid,
    OrderReduct,
    OrientationAssignment,
    PairTypeTable,
    Sign,
    TypedDigraph,
    classify_reachability,
    decide,
    extend_assignment,
    find_type_cycle,
    layered_order,
    orient_pair,
    shortest_cycle,
    typed_digraph,
)

RS = Signature.of("rs", R=2, S=2)
CANON = OrientationAssignment((Sign.CANONICAL,))


def closure(sig, *structures):
    subs = [induced(s, sub)[0] for s in structures for k in range(1, s.size + 1) for sub in combinations(range(s.size), k)]
    return ClassFragment.from_structures(sig, subs)


def arcs(d):
    return sorted((u, v) for u, v, _ in d.arcs)


def test_orient_pair_examples(cyc3):
    assert orient_pair(chain(2), (0, 1))[:2] == (0, 1)
    assert orient_pair(chain(2), (1, 0))[:2] == (0, 1)
    assert orient_pair(cyc3, (2, 0))[:2] == (2, 0)
    with pytest.raises(NonRigidPair):
        orient_pair(fragment("pureset", 2).of_size(2)[0], (0, 1))


def test_orient_pair_type_index():
    frag = fragment("permutations", 3)
    table = PairTypeTable.from_fragment(frag)
    agree, disagree = table.types
    assert agree.relation("lt2") == {(0, 1)} and disagree.relation("lt2") == {(1, 0)}
    s = frag.of_size(2)[1]
    assert orient_pair(s, (0, 1), table)[2] == table.index_of_key(serialize(s))


def test_typed_digraph_examples(cyc3):
    lin = fragment("linorder", 3)
    table = PairTypeTable.from_fragment(lin)
    d = typed_digraph(chain(3), table, CANON)
    assert arcs(d) == [(0, 1), (0, 2), (1, 2)]
    rev = typed_digraph(chain(3), table, CANON.flipped())
    assert arcs(rev) == [(1, 0), (2, 0), (2, 1)]
    ttable = PairTypeTable.from_fragment(fragment("tournaments", 3))
    assert shortest_cycle(typed_digraph(cyc3, ttable, CANON)) == (0, 1, 2)


def test_find_type_cycle_examples():
    tour = fragment("tournaments", 4)
    s, cycle = find_type_cycle(tour, PairTypeTable.from_fragment(tour), CANON)
    assert s.size == 3 and cycle == (0, 1, 2)
    assert sorted(s.relation("arrow")) == [(0, 1), (1, 2), (2, 0)]
    lin = fragment("linorder", 5)
    assert find_type_cycle(lin, PairTypeTable.from_fragment(lin), CANON) is None
    ones = fragment("linorder", 1)
    assert find_type_cycle(ones, PairTypeTable.from_fragment(ones), OrientationAssignment()) is None


def test_classify_case2_synthetic():
    # S-arcs 0 -> 1 -> 2 (type 0) and an R pair {0, 2} (type 1)
    s = Structure.build(RS, 3, {"S": [(0, 1), (1, 2)], "R": [(0, 2)]})
    frag = closure(RS, s)
    table = PairTypeTable.from_fragment(frag)
    assert table.types[0].relation("S") and table.types[1].relation("R")
    case = classify_reachability(frag, table, CANON, 1)
    assert isinstance(case, Case2) and case.sign is Sign.CANONICAL
    (rep,) = frag.of_size(3)
    assert orient_pair(rep, (case.path_from, case.path_to))[:2] == (case.path_from, case.path_to)
    assert extend_assignment(frag, table, CANON) == CANON.extended(Sign.CANONICAL)
    out = decide(frag)
    assert isinstance(out, OrderReduct)


def test_classify_case3_permutations():
    frag = fragment("permutations", 4)
    table = PairTypeTable.from_fragment(frag)
    assert classify_reachability(frag, table, CANON, 1) == Case3()
    assert extend_assignment(frag, table, CANON) == OrientationAssignment((Sign.CANONICAL, Sign.CANONICAL))


def test_classify_internal_contradiction():
    s = Structure.build(RS, 4, {"S": [(0, 1), (1, 2), (2, 3), (3, 0)], "R": [(0, 2), (1, 3)]})
    frag = closure(RS, s)
    table = PairTypeTable.from_fragment(frag)
    with pytest.raises(InternalCycleContradiction):
        classify_reachability(frag, table, CANON, 1)


def test_layered_order_examples():
    assert layered_order(TypedDigraph.from_arcs(3, [(0, 1), (0, 2), (1, 2)])) == [0, 1, 2]
    assert layered_order(TypedDigraph.from_arcs(3, [])) == [0, 1, 2]
    assert layered_order(TypedDigraph.from_arcs(4, [(3, 0), (2, 1)])) == [2, 3, 0, 1]
    with pytest.raises(CycleDetected) as exc:
        layered_order(TypedDigraph.from_arcs(2, [(0, 1), (1, 0)]))
    assert exc.value.cycle == (0, 1)


def test_layered_order_reports_shortest_cycle():
    d = TypedDigraph.from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 3)])
    with pytest.raises(CycleDetected) as exc:
        layered_order(d)
    assert exc.value.cycle == (3, 4)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_layered_order_respects_random_dags(data):
    n = data.draw(st.integers(1, 8))
    rank = data.draw(st.permutations(range(n)))
    pairs = [(u, v) for u in range(n) for v in range(n) if rank[u] < rank[v]]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    order = layered_order(TypedDigraph.from_arcs(n, chosen))
    pos = {v: i for i, v in enumerate(order)}
    assert sorted(order) == list(range(n))
    assert all(pos[u] < pos[v] for u, v in chosen)


@st.composite
def tournaments(draw, max_size=5):
    n = draw(st.integers(2, max_size))
    return tournament(n, [(x, y) if draw(st.booleans()) else (y, x) for x, y in combinations(range(n), 2)])


@settings(max_examples=100, deadline=None)
@given(s=tournaments(), data=st.data())
def test_orientation_invariance(s, data):
    perm = data.draw(st.permutations(range(s.size)))
    t = relabel(s, perm)
    for a, b in combinations(range(s.size), 2):
        tail, head, _ = orient_pair(s, (a, b))
        assert orient_pair(t, (perm[a], perm[b]))[:2] == (perm[tail], perm[head])


def test_orientation_invariance_on_fragment_isomorphisms():
    frag = fragment("product", 4)
    rng = random.Random(7)
    for s in frag.members():
        perm = list(range(s.size))
        rng.shuffle(perm)
        t = relabel(s, perm)
        f = isomorphism(s, t).map
        for a, b in combinations(range(s.size), 2):
            tail, head, _ = orient_pair(s, (a, b))
            assert orient_pair(t, (f[a], f[b]))[:2] == (f[tail], f[head])


def _assert_total_and_compatible(out):
    orders = dict(out.orders)
    for s, order in out.orders:
        d = typed_digraph(s, out.table, out.assignment)
        assert len(d.arcs) == s.size * (s.size - 1) // 2
        pos = {v: i for i, v in enumerate(order)}
        assert all(pos[u] < pos[v] for u, v, _ in d.arcs)
    for a in orders:
        for b in orders:
            for e in embedding_maps(a, b):
                image = [e[x] for x in orders[a]]
                assert image == [y for y in orders[b] if y in set(e)]


@pytest.mark.parametrize("name,bound", [("linorder", 5), ("permutations", 4)])
def test_order_reduct_is_total_and_compatible(name, bound):
    out = decide(fragment(name, bound))
    assert isinstance(out, OrderReduct)
    _assert_total_and_compatible(out)


def test_linorder_order_is_the_order_or_its_converse():
    out = decide(fragment("linorder", 5))
    kinds = {order == tuple(range(s.size)) or (order == tuple(reversed(range(s.size))) and "rev") for s, order in out.orders if s.size > 1}
    assert len(kinds) == 1 and kinds != {False}


def test_permutation_order_is_lt1():
    out = decide(fragment("permutations", 4))
    assert out.assignment.signs == (Sign.CANONICAL, Sign.CANONICAL)
    for s, order in out.orders:
        assert order == tuple(range(s.size))


def test_reversal_duality():
    out = decide(fragment("permutations", 4))
    flipped = out.assignment.flipped()
    for s, order in out.orders:
        assert tuple(layered_order(typed_digraph(s, out.table, flipped))) == tuple(reversed(order))


def test_tournament_witness():
    out = decide(fragment("tournaments", 4))
    assert isinstance(out, FailureWitness)
    assert out.a.size == 2 and out.b.size == 3
    assert sorted(out.b.relation("arrow")) == [(0, 1), (1, 2), (2, 0)]
    assert out.rule == INDEX_ORDER and out.cycles == ((0, 1, 2),)
    assert out.verified == len(list(fragment("tournaments", 4).members()))


def test_product_witness():
    frag = fragment("product", 3)
    out = decide(frag)
    assert isinstance(out, FailureWitness)
    assert out.a == frag.of_size(2)[0]
    assert out.b.size == 3 and len(out.b.relation("arrow")) == 3
    out_deg = [sum(1 for u, _ in out.b.relation("arrow") if u == x) for x in range(3)]
    assert out_deg == [1, 1, 1]
    assert out.verified == len(list(frag.members()))


def test_double_cycle_witness_uses_layered_rule():
    # S is acyclic; R(2, 0) closes 0 -> 1 -> 2 -> 0, reversed R(3, 2) closes 3 -> 1 -> 2 -> 3
    s = Structure.build(RS, 4, {"S": [(0, 1), (1, 2), (3, 1), (0, 3)], "R": [(2, 0), (3, 2)]})
    frag = closure(RS, s)
    table = PairTypeTable.from_fragment(frag)
    step = extend_assignment(frag, table, CANON)
    assert isinstance(step, FailureWitness)
    assert step.rule == LAYERED and step.type_index == 1 and len(step.cycles) == 2
    assert step.b == frag.of_size(4)[0]
    out = decide(frag)
    assert out.b == step.b and out.verified == len(list(frag.members()))


def test_unrealizable_double_cycle_is_inconclusive():
    p = Structure.build(RS, 3, {"S": [(0, 1), (1, 2)], "R": [(2, 0)]})
    q = Structure.build(RS, 3, {"S": [(0, 1), (1, 2)], "R": [(0, 2)]})
    out = decide(closure(RS, p, q))
    assert isinstance(out, Inconclusive)
    assert out.reason.startswith("witness-realization-failed") and out.bound == 3


def test_preconditions():
    with pytest.raises(NotRigid):
        decide(fragment("corder", 3))
    with pytest.raises(NotHereditary):
        decide(ClassFragment.from_structures(T, [tournament(3, [(0, 1), (1, 2), (2, 0)])]))


def test_decide_is_deterministic():
    frag = fragment("product", 3)
    assert decide(frag) == decide(fragment("product", 3))
