from fractions import Fraction
from math import log

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromatope.fractal import (
    MAX_LEVEL,
    LevelCeilingExceeded,
    MengerRule,
    TriadicBoxSet,
    UnsupportedRule,
    fractal_color_rep,
    fractal_dimension,
    iterate,
    kept_count,
    measure_proxy,
    product,
    read_boxset,
    write_boxset,
)

from conftest import subset_count

RULES = [(d, m) for d in range(1, 5) for m in range(d)]


@pytest.mark.parametrize("d, m", RULES)
def test_kept_count_matches_enumeration(d, m):
    assert kept_count(d, m) == subset_count(d, m) == len(MengerRule(d, m).offsets())


def test_named_counts():
    assert kept_count(1, 0) == 2
    assert kept_count(2, 1) == 8
    assert kept_count(3, 1) == 20
    assert kept_count(3, 2) == 26
    assert kept_count(4, 2) == 72


@pytest.mark.parametrize("d, m", RULES)
def test_keep_all_but_centre(d, m):
    if m == d - 1:
        assert kept_count(d, m) == 3 ** d - 1


@pytest.mark.parametrize("d, m", RULES)
def test_cell_counts_up_to_the_ceiling(d, m):
    for n in range(MAX_LEVEL[d] + 1):
        box = iterate(MengerRule(d, m), n)
        assert len(box) == kept_count(d, m) ** n


def test_small_iterations():
    assert iterate(MengerRule(1, 0), 1).as_tuples() == [(0,), (2,)]
    assert len(iterate(MengerRule(2, 1), 1)) == 8
    assert (1, 1) not in iterate(MengerRule(2, 1), 1).as_tuples()
    assert len(iterate(MengerRule(4, 2), 1)) == 72
    assert iterate(MengerRule(3, 1), 0) == TriadicBoxSet.full(3)


@pytest.mark.parametrize("d, m", [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_self_similarity(d, m):
    rule = MengerRule(d, m)
    n = min(MAX_LEVEL[d], 3)
    fine = iterate(rule, n)
    coarse = {tuple(c) for c in iterate(rule, n - 1).cells}
    offsets = {tuple(o) for o in rule.offsets()}
    for cell in fine.cells:
        assert tuple(cell // 3) in coarse
        assert tuple(cell % 3) in offsets


def test_carpet_level_two_raster():
    occ = iterate(MengerRule(2, 1), 2).to_raster()
    assert occ.sum() == 64
    assert not occ[3:6, 3:6].any()
    assert not occ[1, 1] and not occ[4, 1]


# -- dimensions and measures ----------------------------------------------------

def test_dimensions():
    assert fractal_dimension(MengerRule(1, 0)) == pytest.approx(log(2) / log(3))
    assert fractal_dimension(MengerRule(1, 0)) == pytest.approx(0.6309, abs=1e-4)
    assert fractal_dimension(MengerRule(4, 2)) == pytest.approx(3.8928, abs=1e-4)
    assert fractal_dimension(MengerRule(4, 2)) > 3
    assert fractal_dimension(MengerRule(2, 1)) == pytest.approx(log(8) / log(3))


def test_four_dimensional_sponge_measures():
    rule = MengerRule(4, 2)
    three = [measure_proxy(rule, 3, n) for n in (1, 2, 3)]
    four = [measure_proxy(rule, 4, n) for n in (1, 2, 3)]
    assert three == [Fraction(8, 3), Fraction(64, 9), Fraction(512, 27)]
    assert three[0] < three[1] < three[2]
    assert four[0] > four[1] > four[2]


def test_cantor_length():
    assert measure_proxy(MengerRule(1, 0), 1, 1) == Fraction(2, 3)
    assert measure_proxy(MengerRule(1, 0), 1, 3) == Fraction(8, 27)
    with pytest.raises(ValueError):
        measure_proxy(MengerRule(1, 0), 2, 1)


# -- products ------------------------------------------------------------------------

def test_cantor_dust_products():
    c1 = iterate(MengerRule(1, 0), 1)
    assert len(product(c1, c1)) == 4
    c2 = iterate(MengerRule(1, 0), 2)
    assert product(c2, c2) == iterate(MengerRule(2, 0), 2)
    assert len(product(c2, c2)) == 16


@pytest.mark.parametrize("d", [2, 3, 4])
def test_d_fold_cantor_products(d):
    for n in range(1, MAX_LEVEL[d] + 1):
        c = iterate(MengerRule(1, 0), n)
        acc = c
        for _ in range(d - 1):
            acc = product(acc, c)
        assert acc == iterate(MengerRule(d, 0), n)


def test_product_errors():
    a = iterate(MengerRule(1, 0), 1)
    with pytest.raises(ValueError):
        product(a, iterate(MengerRule(1, 0), 2))
    with pytest.raises(UnsupportedRule):
        product(iterate(MengerRule(3, 0), 1), iterate(MengerRule(2, 0), 1))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(1, 0), (2, 0), (2, 1)]), st.sampled_from([(1, 0), (2, 0), (2, 1)]),
       st.integers(0, 2))
def test_product_is_the_set_product(r1, r2, n):
    a = iterate(MengerRule(*r1), n)
    b = iterate(MengerRule(*r2), n)
    ab = product(a, b)
    assert len(ab) == len(a) * len(b)
    expected = np.logical_and.outer(a.to_raster(), b.to_raster())
    assert np.array_equal(ab.to_raster(), expected)


# -- color representations -----------------------------------------------------------

SUPPORTED_LIFTS = [(2, 0, n) for n in (1, 2, 3)] + [(2, 1, 1), (3, 0, 2), (3, 1, 1), (3, 1, 2),
                                                    (3, 2, 1), (4, 0, 2), (4, 1, 2), (4, 2, 1), (4, 2, 2)]


@pytest.mark.parametrize("d, m, n", SUPPORTED_LIFTS)
def test_color_rep_lifts_to_the_box_set(d, m, n):
    rule = MengerRule(d, m)
    rep = fractal_color_rep(rule, n)
    assert rep.base.base_dim == d - 1
    assert rep.base.hi.grid == (3 ** n,) * (d - 1)
    assert np.array_equal(rep.lift(), iterate(rule, n).to_raster())


def test_cantor_dust_from_uncoloring():
    rep = fractal_color_rep(MengerRule(2, 0), 1)
    assert rep.base.hi.values.tolist() == [1.0, 0.0, 1.0]
    assert {f.field.sign for f in rep.folds} == {"uncolor"}
    assert rep.folds[0].field.values.tolist() == [0.0, 1.0, 0.0]


def test_sponge_base_is_the_carpet():
    rep = fractal_color_rep(MengerRule(3, 1), 2)
    assert np.array_equal(rep.base.hi.values > 0, iterate(MengerRule(2, 1), 2).to_raster())
    assert len(rep.folds) == 4


def test_color_rep_limits():
    with pytest.raises(UnsupportedRule):
        fractal_color_rep(MengerRule(1, 0), 1)
    with pytest.raises(UnsupportedRule):
        fractal_color_rep(MengerRule(2, 1), 2)


# -- limits and export ----------------------------------------------------------------

def test_level_ceilings():
    with pytest.raises(LevelCeilingExceeded):
        iterate(MengerRule(3, 1), 5)
    with pytest.raises(LevelCeilingExceeded):
        iterate(MengerRule(4, 2), 4)
    with pytest.raises(LevelCeilingExceeded):
        iterate(MengerRule(2, 1), 7)
    with pytest.raises(ValueError):
        iterate(MengerRule(2, 1), -1)


def test_rule_validation():
    for d, m in [(0, 0), (5, 0), (2, 2), (3, -1)]:
        with pytest.raises(UnsupportedRule):
            MengerRule(d, m)


def test_box_set_validation_and_order():
    box = TriadicBoxSet(2, 1, [[2, 0], [0, 2], [2, 0]])
    assert box.as_tuples() == [(0, 2), (2, 0)]
    with pytest.raises(ValueError):
        TriadicBoxSet(1, 1, [[3]])
    assert box.side() == Fraction(1, 3)


def test_box_set_text_round_trip():
    box = iterate(MengerRule(2, 1), 2)
    text = write_boxset(box)
    lines = text.splitlines()
    assert lines[0] == "2 2"
    assert len(lines) == 65
    assert lines[1] == "0 0"
    assert read_boxset(text) == box
