from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import chain, tournament
from ramseyforge.core import SignatureMismatch, embedding_maps
from ramseyforge.gallery import fragment, gen_tournaments
from ramseyforge.orientation import INDEX_ORDER, LAYERED, OrientationAssignment, PairTypeTable, Sign, layered_order, typed_digraph
from ramseyforge.ramsey import (
    Color,
    ColoringRule,
    PairColoring,
    RuleInapplicable,
    SearchSpaceTooLarge,
    coloring_from_order,
    defeating_colorings,
    exhaustive_witness_check,
    find_monochromatic,
    type_pairs,
    verify_failure_witness,
)

R, B = Color.RED, Color.BLUE


def arc_rule(arc):
    return ColoringRule.for_pair_type(arc)


def test_coloring_from_order_cycle(arc, cyc3):
    rule = arc_rule(arc)
    col = coloring_from_order(cyc3, (0, 1, 2), rule.table, rule.assignment, 0)
    assert col.as_dict() == {(0, 1): R, (1, 2): R, (0, 2): B}


def test_coloring_layered_all_red_and_reversed_all_blue():
    lin = fragment("linorder", 4)
    table = PairTypeTable.from_fragment(lin)
    asg = OrientationAssignment((Sign.CANONICAL,))
    c = chain(4)
    order = layered_order(typed_digraph(c, table, asg))
    assert {v for _, v in coloring_from_order(c, order, table, asg, 0).colors} == {R}
    assert {v for _, v in coloring_from_order(c, order[::-1], table, asg, 0).colors} == {B}


def test_find_monochromatic_examples(arc, cyc3):
    all_red = PairColoring(cyc3, arc, tuple((p, R) for p in combinations(range(3), 2)))
    assert find_monochromatic(arc, cyc3, cyc3, all_red).map == (0, 1, 2)
    rule = arc_rule(arc)
    col = coloring_from_order(cyc3, (0, 1, 2), rule.table, rule.assignment, 0)
    assert find_monochromatic(arc, cyc3, cyc3, col) is None
    two, three = chain(2), chain(3)
    col = PairColoring(three, two, (((0, 1), R), ((0, 2), R), ((1, 2), B)))
    assert find_monochromatic(two, two, three, col).map == (0, 1)


def test_find_monochromatic_signature_mismatch(arc):
    with pytest.raises(SignatureMismatch):
        find_monochromatic(arc, chain(3), chain(3), PairColoring(chain(3), chain(2), ()))


def test_verify_failure_witness_examples(arc, cyc3, trans3):
    rule = arc_rule(arc)
    for c in gen_tournaments(4):
        assert verify_failure_witness(arc, cyc3, c, rule).defeated
    transitive4 = tournament(4, combinations(range(4), 2))
    v = verify_failure_witness(arc, trans3, transitive4, rule)
    assert not v.defeated and v.monochromatic is not None
    v = verify_failure_witness(arc, cyc3, cyc3, rule)
    assert v.defeated and v.copies == 3 and v.order == (0, 1, 2)


def test_layered_rule_inapplicable_on_cyclic_prefix(cyc3):
    table = PairTypeTable.from_fragment(fragment("tournaments", 3))
    rule = ColoringRule(LAYERED, table, OrientationAssignment((Sign.CANONICAL,)), 1)
    with pytest.raises(RuleInapplicable) as exc:
        verify_failure_witness(table.types[0], cyc3, cyc3, rule)
    assert exc.value.cycle == (0, 1, 2)


def test_ramsey_33():
    two, three = chain(2), chain(3)
    six = exhaustive_witness_check(two, three, chain(6))
    assert six.is_witness and six.defeating is None and six.pairs == 15 and six.copies == 20
    five = exhaustive_witness_check(two, three, chain(5))
    assert not five.is_witness and five.defeating_count == 12
    assert find_monochromatic(two, three, chain(5), five.defeating) is None


def test_defeating_count_matches_plain_enumeration():
    two, three = chain(2), chain(3)
    for n in range(3, 6):
        fast = exhaustive_witness_check(two, three, chain(n))
        slow = defeating_colorings(two, three, chain(n))
        assert fast.defeating_count == len(slow)
        assert fast.defeating == (slow[0] if slow else None)


def test_search_space_limit():
    with pytest.raises(SearchSpaceTooLarge) as exc:
        exhaustive_witness_check(chain(2), chain(3), chain(7))
    assert exc.value.required == 21 and exc.value.limit == 20
    assert exhaustive_witness_check(chain(2), chain(3), chain(7), limit=21).is_witness


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cycle_never_forced_in_tournaments(arc, cyc3, n):
    rule = arc_rule(arc)
    for c in gen_tournaments(n):
        status = exhaustive_witness_check(arc, cyc3, c)
        assert not status.is_witness
        col = coloring_from_order(c, tuple(range(n)), rule.table, rule.assignment, 0)
        if n <= 5:
            assert col in defeating_colorings(arc, cyc3, c)
        else:
            assert find_monochromatic(arc, cyc3, c, col) is None


def test_color_swap_symmetry():
    two, three = chain(2), chain(3)
    defeating = defeating_colorings(two, three, chain(5))
    swapped = {col.swapped() for col in defeating}
    assert swapped == set(defeating)


def test_monotone_in_host_size():
    # a witness stays a witness in any larger host
    two, three = chain(2), chain(3)
    results = [exhaustive_witness_check(two, three, chain(n), limit=21).is_witness for n in (5, 6, 7)]
    assert results == [False, True, True]


@st.composite
def small_tournaments(draw):
    n = draw(st.integers(3, 5))
    return tournament(n, [(x, y) if draw(st.booleans()) else (y, x) for x, y in combinations(range(n), 2)])


@settings(max_examples=60, deadline=None)
@given(c=small_tournaments(), data=st.data())
def test_any_linear_order_defeats_the_cycle(c, data):
    arc, cyc3 = tournament(2, [(0, 1)]), tournament(3, [(0, 1), (1, 2), (2, 0)])
    order = tuple(data.draw(st.permutations(range(c.size))))
    rule = arc_rule(arc)
    col = coloring_from_order(c, order, rule.table, rule.assignment, 0)
    assert find_monochromatic(arc, cyc3, c, col) is None


def test_type_pairs_and_copy_masks(arc, trans3):
    assert type_pairs(arc, trans3) == [(0, 1), (0, 2), (1, 2)]
    assert len(embedding_maps(trans3, tournament(4, combinations(range(4), 2)))) == 4


def test_rule_ids():
    assert ColoringRule.for_pair_type(tournament(2, [(1, 0)])).rule == INDEX_ORDER


def test_brute_force_agrees_on_pair_colorings_of_small_hosts(arc, cyc3):
    # independent check: enumerate colour dicts directly for each 4-tournament
    for c in gen_tournaments(4):
        pairs = type_pairs(arc, c)
        copies = [sorted(f) for f in embedding_maps(cyc3, c)]
        expected = 0
        for bits in range(1 << len(pairs)):
            col = {p: (bits >> i) & 1 for i, p in enumerate(pairs)}
            if all(len({col[q] for q in combinations(img, 2)}) == 2 for img in copies):
                expected += 1
        assert exhaustive_witness_check(arc, cyc3, c).defeating_count == expected
