from fractions import Fraction as F

import pytest

from renormhopf.hopf import (birkhoff, character_from_values, convolve, counit,
                             perturbed_character, toy_character)
from renormhopf.laurent import LaurentSeries, ParamPoly
from renormhopf.lie import grading_Y
from renormhopf.rg import (LocalityError, beta_function, check_mu_independence, derivative_at_zero,
                           ft_limit, gamma_minus_from_beta, residue, rg_report)
from renormhopf.trees import LEAF, TREES, corolla, ladder

CHAIN2, CHERRY = ladder(2), corolla(3)
L, T, S = ParamPoly.var("L"), ParamPoly.var("t"), ParamPoly.var("s")


def const(x):
    return LaurentSeries.constant(x)


def test_residue_and_beta_values(toy_pair):
    res, beta = residue(toy_pair), beta_function(toy_pair)
    assert res.gen(LEAF) == const(1)
    assert res.gen(CHAIN2) == const(F(1, 2))
    # the cherry's negative part has no simple pole
    assert res.gen(CHERRY).is_zero()
    assert res.gen(ladder(3)) == const(F(2, 3))
    assert beta.gen(LEAF) == const(1)
    assert beta.gen(CHAIN2) == const(1)
    assert beta.gen(ladder(3)) == const(2)


def test_beta_is_graded_residue(toy_pair):
    res, beta = residue(toy_pair), beta_function(toy_pair)
    y = grading_Y(res)
    for t in TREES.generators_upto(5):
        assert beta.gen(t) == y.gen(t) == res.gen(t) * t.size


def test_negative_part_is_scale_independent(toy_pair):
    assert check_mu_independence(toy_pair, TREES.generators_upto(6)) == 0


def test_perturbed_character_breaks_scale_independence(toy):
    extra = LaurentSeries({-1: L}, None)
    bad = birkhoff(perturbed_character(toy, LEAF, extra))
    assert check_mu_independence(bad, [LEAF]) >= 1


def test_ft_values(toy_pair):
    ft = ft_limit(toy_pair)
    assert ft.gen(LEAF) == LaurentSeries.constant(T)
    assert ft.gen(CHAIN2) == LaurentSeries.constant(T + T * T * F(1, 2))


def test_ft_at_zero_is_counit(toy_pair):
    f0 = ft_limit(toy_pair, ParamPoly.const(0))
    for t in TREES.generators_upto(4):
        assert f0.gen(t).is_zero()


def test_ft_group_law(toy_pair):
    left = convolve(ft_limit(toy_pair, "t"), ft_limit(toy_pair, "s"))
    right = ft_limit(toy_pair, T + S)
    for t in TREES.generators_upto(5):
        assert left((t,)) == right.gen(t)


def test_ft_generated_by_beta(toy_pair):
    ft, beta = ft_limit(toy_pair), beta_function(toy_pair)
    for t in TREES.generators_upto(5):
        assert derivative_at_zero(ft, t) == beta.gen(t)


def test_ft_rejects_surviving_poles(toy):
    # a character whose "negative part" is not scale independent
    bad = birkhoff(perturbed_character(toy, LEAF, LaurentSeries({-1: L}, None)))
    with pytest.raises(LocalityError):
        ft_limit(bad).gen(CHAIN2)


def test_gamma_minus_from_beta_matches_birkhoff(toy_pair):
    rebuilt = gamma_minus_from_beta(beta_function(toy_pair))
    for t in TREES.generators_upto(5):
        assert rebuilt.gen(t) == toy_pair.negative.gen(t)


def test_gamma_minus_from_zero_beta_is_counit():
    pole_free = character_from_values(TREES, {t: const(t.size) for t in TREES.generators_upto(3)})
    pair = birkhoff(pole_free)
    beta = beta_function(pair)
    for t in TREES.generators_upto(3):
        assert beta.gen(t).is_zero()
        assert gamma_minus_from_beta(beta).gen(t).is_zero()
    e = counit(TREES)
    assert residue(birkhoff(e)).gen(LEAF).is_zero()


def test_rg_report_rows():
    report = rg_report(toy_character(), 3)
    rows = report.rows()
    assert [r["generator"] for r in rows][:2] == [TREES.render(LEAF), TREES.render(CHAIN2)]
    assert all(r["match"] == "yes" for r in rows)
    assert report.all_match
    assert report.l_independence_witness == 0
