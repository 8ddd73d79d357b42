from fractions import Fraction as F
from itertools import product

import pytest

from oracles import seesaw_closed_form
from pfakit import (
    ValidationError,
    accept_prob,
    instantiate,
    seesaw_delta,
    seesaw_npa,
    seesaw_pa,
    support_abstraction,
)

GRID = (F(1, 4), F(1, 2), F(3, 4))


def block(n):
    return ["i"] + ["a"] * n + ["f"]


class TestShape:
    def test_states_and_alphabet(self):
        npa = seesaw_npa()
        assert npa.states == ("C1", "C2", "L1", "L2", "R1", "R2")
        assert npa.alphabet == ("i", "a", "f")
        assert npa.initial == "C1"
        assert npa.final == frozenset({"L2"})

    def test_pa_matches_support(self):
        npa = seesaw_npa()
        for x, y in product(GRID, GRID):
            assert support_abstraction(seesaw_pa(x, y)) == npa

    def test_delta_instantiates(self):
        pa = instantiate(seesaw_npa(), seesaw_delta(F(3, 4), F(1, 4)))
        assert pa == seesaw_pa(F(3, 4), F(1, 4))

    @pytest.mark.parametrize("x,y", [(F(0), F(1, 2)), (F(1), F(1, 2)), (F(1, 2), F(1))])
    def test_degenerate_parameters_rejected(self, x, y):
        # zero mass on a support edge breaks the instantiation contract
        with pytest.raises(ValidationError):
            seesaw_pa(x, y)

    def test_out_of_range_parameters_rejected(self):
        with pytest.raises(ValidationError):
            seesaw_pa(F(3, 2), F(1, 2))


class TestValues:
    def test_init_final_is_half_on_grid(self):
        for x, y in product(GRID, GRID):
            assert accept_prob(seesaw_pa(x, y), ["i", "f"]) == F(1, 2)

    def test_single_block_anchor(self):
        assert accept_prob(seesaw_pa(F(3, 4), F(1, 4)), ["i", "a", "f"]) == F(3, 8)

    def test_closed_form_on_grid(self):
        for x, y in product(GRID, GRID):
            pa = seesaw_pa(x, y)
            for n in (1, 2, 3):
                for m in (1, 2, 4):
                    assert accept_prob(pa, block(n) * m) == seesaw_closed_form(x, y, n, m)

    def test_orientation_larger_x_wins(self):
        # with x > y the repeated blocks push mass arbitrarily close to 1
        v = accept_prob(seesaw_pa(F(3, 4), F(1, 4)), block(5) * 64)
        assert v > F(99, 100)
        # mirrored parameters cap at the left-share factor, below 1/2 + margin
        w = accept_prob(seesaw_pa(F(1, 4), F(3, 4)), block(5) * 64)
        assert w < F(1, 100)

    def test_even_parameters_cap_at_half(self):
        pa = seesaw_pa(F(1, 2), F(1, 2))
        for n in (1, 2, 4):
            for m in (1, 4, 16):
                assert accept_prob(pa, block(n) * m) <= F(1, 2)
