import math

import pytest
from hypothesis import given, strategies as st

from thermoflow import bowen
from thermoflow.potential import LcPotential, Roof
from thermoflow.rng import make_rng
from thermoflow.sft import full_shift
from thermoflow.verify import random_potential, random_roof, standard_shifts

from conftest import seeds, shift_index

GOLDEN = (1 + math.sqrt(5)) / 2


def test_quadratic_root():
    # exp(-t) + exp(-2t) = 1
    sol = bowen.solve(bowen.BowenProblem.entropy_of(Roof(full_shift(2), 1, [1.0, 2.0])))
    assert sol.t_star == pytest.approx(math.log(GOLDEN), abs=1e-12)
    assert sol.residual <= bowen.TARGET_TOL
    lo, hi = sol.bracket
    assert lo <= sol.t_star <= hi


@pytest.mark.parametrize("d", [-5.0, -0.5, 0.0, 3.0])
@pytest.mark.parametrize("c", [0.25, 1.0, 4.0])
def test_constant_inputs_have_linear_roots(d, c):
    # P(d - t c) = log 2 + d - t c on the full 2-shift
    s = full_shift(2)
    prob = bowen.BowenProblem(LcPotential.constant(s, d), Roof(s, 1, [c, c]))
    assert bowen.solve(prob).t_star == pytest.approx((math.log(2) + d) / c, abs=1e-11)


@given(shift_index, st.integers(min_value=1, max_value=2), seeds)
def test_bracket_contains_root(i, k, seed):
    rng = make_rng(seed)
    s = standard_shifts()[i]
    prob = bowen.BowenProblem(random_potential(s, k, rng, 3.0), random_roof(s, k, rng, 0.1, 3.0))
    lo, hi = bowen.initial_bracket(prob)
    assert bowen.pressure_at(prob, lo) >= 0 >= bowen.pressure_at(prob, hi)


@given(shift_index, st.integers(min_value=1, max_value=3), seeds)
def test_newton_and_bisection_agree(i, k, seed):
    rng = make_rng(seed)
    s = standard_shifts()[i]
    prob = bowen.BowenProblem(random_potential(s, k, rng), random_roof(s, k, rng))
    a = bowen.solve(prob)
    b = bowen.solve(prob, newton=False)
    assert abs(bowen.pressure_at(prob, a.t_star)) <= bowen.RESIDUAL_TOL
    assert a.t_star == pytest.approx(b.t_star, abs=1e-11)
    assert a.iterations <= b.iterations


@given(shift_index, seeds)
def test_root_moves_with_shifted_delta(i, seed):
    # adding c * roof to delta shifts the root by exactly c
    rng = make_rng(seed)
    s = standard_shifts()[i]
    roof = random_roof(s, 2, rng)
    delta = random_potential(s, 1, rng)
    base = bowen.solve(bowen.BowenProblem(delta, roof)).t_star
    moved = bowen.solve(bowen.BowenProblem(delta + 0.7 * roof, roof)).t_star
    assert moved == pytest.approx(base + 0.7, abs=1e-10)
