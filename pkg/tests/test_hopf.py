from fractions import Fraction as F

import pytest

from renormhopf import algebra
from renormhopf.graphs import get
from renormhopf.hopf import (BPHZ, Character, InfinitesimalCharacter, birkhoff, birkhoff_defects,
                             bphz_prepare, character_from_values, convolve, counit, dump_rows,
                             inverse_character, perturbed_character, toy_character)
from renormhopf.algebra import InstanceError
from renormhopf.laurent import (LaurentSeries, ParamPoly, TruncationError, exp_scaled, parse)
from renormhopf.trees import LEAF, TREES, corolla, ladder

L = ParamPoly.var("L")
CHAIN2, CHERRY = ladder(2), corolla(3)


def pole(c, k=1):
    return LaurentSeries.monomial(-k, c)


def test_toy_value_on_single_vertex(toy):
    expected = exp_scaled(1, "L", 11) * LaurentSeries.geometric(1, 11) * pole(1)
    assert toy.gen(LEAF) == expected
    assert toy.gen(LEAF).order == 10


def test_toy_value_on_chain_leading_terms(toy):
    v = toy.gen(CHAIN2)
    assert v.coefficient(-2) == F(1, 2)
    assert v.coefficient(-1) == L + F(3, 2)


def test_toy_is_multiplicative(toy):
    assert toy((LEAF, LEAF)) == toy.gen(LEAF) * toy.gen(LEAF)
    assert toy(()) == LaurentSeries.one()


def test_toy_truncation_error():
    with pytest.raises(TruncationError):
        toy_character(order=-2)


def test_convolution_unit_and_primitive(toy):
    e = counit(TREES)
    for t in TREES.generators_upto(4):
        assert convolve(toy, e).gen(t) == toy.gen(t)
        assert convolve(e, toy).gen(t) == toy.gen(t)
    psi = toy_character(param="t")
    assert convolve(toy, psi).gen(LEAF) == toy.gen(LEAF) + psi.gen(LEAF)


def test_convolution_on_chain_matches_expansion(toy):
    psi = toy_character(param="t")
    direct = toy.gen(CHAIN2) + psi.gen(CHAIN2) + toy.gen(LEAF) * psi.gen(LEAF)
    assert convolve(toy, psi).gen(CHAIN2) == direct


def test_convolution_is_associative(toy):
    a, b, c = toy, toy_character(param="t"), toy_character(param="s")
    left, right = convolve(convolve(a, b), c), convolve(a, convolve(b, c))
    for t in TREES.generators_upto(4):
        assert left.gen(t).agrees_with(right.gen(t))


def test_inverse_character(toy):
    e = counit(TREES)
    assert inverse_character(e).gen(LEAF).is_zero()
    inv = inverse_character(toy)
    assert inv.gen(LEAF) == -toy.gen(LEAF)
    rt = convolve(toy, inv)
    for t in TREES.generators_upto(4):
        assert rt.gen(t).is_zero()


def test_instance_mismatch(graph_toy, toy):
    with pytest.raises(InstanceError):
        convolve(toy, graph_toy)


def test_birkhoff_low_degree_values(toy_pair):
    assert toy_pair.negative.gen(LEAF) == pole(-1)
    assert toy_pair.positive.gen(LEAF).constant_term() == 1 + L
    assert toy_pair.negative.gen(CHAIN2) == pole(F(1, 2), 2) + pole(F(-1, 2))


def test_birkhoff_frozen_degree_four(toy_pair):
    # frozen from the recursion; the characterisation test below guards them
    expected = {
        "B[o o o]": "(1/4)/ε^4 - (1/4)/ε^3",
        "B[B[o] o]": "(1/8)/ε^4 - (1/3)/ε^3 + (7/24)/ε^2 + (1/12)/ε",
        "B[B[o o]]": "(1/12)/ε^4 - (1/4)/ε^3 + (1/3)/ε^2 - (1/3)/ε",
        "B[B[B[o]]]": "(1/24)/ε^4 - (1/4)/ε^3 + (19/24)/ε^2 - (5/4)/ε",
    }
    for t in TREES.generators(4):
        assert toy_pair.negative.gen(t) == parse(expected[str(t)])


def test_holomorphic_input_splits_trivially():
    values = {t: LaurentSeries({0: 1, 1: F(t.size, 3)}, 6) for t in TREES.generators_upto(4)}
    phi = character_from_values(TREES, values)
    pair = birkhoff(phi)
    for t in TREES.generators_upto(4):
        assert pair.negative.gen(t).is_zero()
        assert pair.positive.gen(t) == phi.gen(t)


def test_characterisation_pins_the_pair(toy_pair):
    assert birkhoff_defects(toy_pair, TREES.generators_upto(5)) == []


def test_perturbed_pair_still_satisfies_characterisation(toy):
    phi = perturbed_character(toy, LEAF, LaurentSeries({-1: L}, None))
    assert birkhoff_defects(birkhoff(phi), TREES.generators_upto(4)) == []


def test_truncation_exhaustion_is_reported():
    phi = toy_character(order=0)
    pair = birkhoff(phi)
    with pytest.raises(TruncationError):
        for t in TREES.generators_upto(4):
            pair.negative.gen(t)


def test_prepare_examples(toy, toy_pair):
    scheme = BPHZ(toy)
    assert scheme.prepared(LEAF) == toy.gen(LEAF)
    assert bphz_prepare(toy, toy_pair.negative, CHAIN2) == toy.gen(CHAIN2) + toy_pair.negative.gen(LEAF) * toy.gen(LEAF)
    assert scheme.counterterm(LEAF) == pole(-1)
    assert scheme.renormalized(LEAF).constant_term() == 1 + L


def test_prepare_on_nested_graph(graph_toy):
    scheme = BPHZ(graph_toy)
    nested, tri, bub = get("nested2"), get("triangle"), get("bubble")
    expected = graph_toy.gen(nested) + scheme.counterterm(tri) * graph_toy.gen(bub) * 2
    assert scheme.prepared(nested) == expected


def test_bphz_equals_birkhoff_on_graphs(graph_instance, graph_toy):
    pair = birkhoff(graph_toy)
    scheme = BPHZ(graph_toy)
    for h in graph_instance.generators_upto(3):
        assert scheme.counterterm(h) == pair.negative.gen(h)
        assert scheme.renormalized(h) == pair.positive.gen(h)


def test_graph_negative_parts(graph_toy):
    pair = birkhoff(graph_toy)
    assert pair.negative.gen(get("nested2")) == parse("1/ε^2 - 1/ε")
    assert pair.negative.gen(get("rainbow2")) == parse("(1/2)/ε^2 - (1/2)/ε")
    assert pair.negative.gen(get("box")).is_zero()


def test_infinitesimal_vanishes_on_products():
    z = InfinitesimalCharacter(TREES, lambda t: LaurentSeries.constant(t.size))
    assert z((LEAF, LEAF)).is_zero()
    assert z(()).is_zero()
    assert z.gen(CHERRY) == LaurentSeries.constant(3)


def test_dump_rows(toy):
    rows = dump_rows(toy, TREES.generators_upto(2))
    assert [r["generator"] for r in rows] == ["o", "B[o]"]
    assert rows[0]["phi_minus"] == "-1/ε" and rows[0]["C"] == "-1/ε"
    assert set(rows[0]) == {"generator", "phi", "phi_minus", "phi_plus", "C", "Rbar", "R"}


def test_character_unit_value():
    ch = Character(TREES, lambda t: LaurentSeries.constant(2))
    assert ch(()) == LaurentSeries.one()
    assert ch((LEAF, CHAIN2)) == LaurentSeries.constant(4)


def test_antipode_defect_on_forests():
    for m in TREES.monomials_upto(4):
        left, right = algebra.antipode_defect(TREES, m)
        assert left == {} and right == {}
