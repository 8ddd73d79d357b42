import random
from fractions import Fraction as F

import pytest

from oracles import raw_after
from pfakit import DomainError, dirac, random_simple_pa
from pfakit.matrices import (
    from_int_matrix,
    identity,
    int_mat_mul,
    letter_matrix,
    mat_mul,
    mat_pow,
    solve_linear,
    to_int_matrix,
    vec_mat,
    word_matrix,
)


class TestWordMatrix:
    def test_empty_word_is_identity(self, seesaw_fast):
        assert word_matrix(seesaw_fast, []) == identity(len(seesaw_fast.states))

    def test_matches_propagation(self, seesaw_fast):
        rng = random.Random(6)
        idx = {s: i for i, s in enumerate(seesaw_fast.states)}
        for _ in range(25):
            word = [rng.choice(seesaw_fast.alphabet) for _ in range(rng.randrange(0, 7))]
            m = word_matrix(seesaw_fast, word)
            init = [F(0)] * len(seesaw_fast.states)
            init[idx[seesaw_fast.initial]] = F(1)
            got = vec_mat(init, m)
            want = raw_after(seesaw_fast, word)
            for s, i in idx.items():
                assert got[i] == want.get(s, F(0))

    def test_rows_are_stochastic(self, seesaw_fast):
        m = word_matrix(seesaw_fast, ["i", "a", "f"])
        for row in m:
            assert sum(row) == 1

    def test_mat_mul_associates_with_concatenation(self, seesaw_fast):
        u, v = ["i", "a"], ["a", "f"]
        assert mat_mul(
            word_matrix(seesaw_fast, u), word_matrix(seesaw_fast, v)
        ) == word_matrix(seesaw_fast, u + v)


class TestIntegerForm:
    def test_round_trip(self, seesaw_fast):
        m = letter_matrix(seesaw_fast, "a")
        ints, den = to_int_matrix(m)
        assert from_int_matrix(ints, den) == m
        assert all(isinstance(v, int) for row in ints for v in row)

    def test_int_mul_matches_fraction_mul(self, seesaw_fast):
        m = letter_matrix(seesaw_fast, "a")
        ints, den = to_int_matrix(m)
        assert from_int_matrix(int_mat_mul(ints, ints), den * den) == mat_mul(m, m)


class TestMatPow:
    def test_matches_repeated_multiplication(self, seesaw_fast):
        m = letter_matrix(seesaw_fast, "a")
        acc = identity(len(m))
        for e in range(6):
            assert mat_pow(m, e) == acc
            acc = mat_mul(acc, m)

    def test_large_exponent(self, tiny_pa):
        m = letter_matrix(tiny_pa, "a")
        p = mat_pow(m, 200)
        # q0 -> q1 mass after 200 letters is 1 - 2^-200
        assert p[0][1] == 1 - F(1, 2**200)

    def test_negative_exponent_rejected(self, tiny_pa):
        with pytest.raises(DomainError):
            mat_pow(letter_matrix(tiny_pa, "a"), -1)


class TestSolveLinear:
    def test_solves_known_system(self):
        a = [[F(2), F(1)], [F(1), F(3)]]
        b = [F(5), F(10)]
        x = solve_linear(a, b)
        assert x == [F(1), F(3)]

    def test_permuted_pivot(self):
        a = [[F(0), F(1)], [F(1), F(0)]]
        assert solve_linear(a, [F(7), F(9)]) == [F(9), F(7)]

    def test_singular_rejected(self):
        a = [[F(1), F(1)], [F(2), F(2)]]
        with pytest.raises(DomainError):
            solve_linear(a, [F(1), F(2)])
