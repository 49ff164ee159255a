import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermoflow import errors, pressure as pr
from thermoflow.potential import LcPotential, combine
from thermoflow.rng import make_rng
from thermoflow.sft import full_shift, golden_mean, words
from thermoflow.verify import random_potential, standard_shifts

from conftest import depths, seeds, shift_index

GOLDEN = (1 + math.sqrt(5)) / 2


def random_pair(seed, i, k):
    rng = make_rng(seed)
    s = standard_shifts()[i]
    return s, random_potential(s, k, rng), random_potential(s, k, rng), rng


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_full_shift_entropy(n):
    assert pr.topological_entropy(full_shift(n)) == pytest.approx(math.log(n), abs=1e-13)


def test_depth_one_log_three():
    # exp(log 2) + exp(0) = 3
    p = LcPotential(full_shift(2), 1, [math.log(2), 0.0])
    assert pr.pressure(p).value == pytest.approx(math.log(3), abs=1e-13)


def test_parry_measure():
    mu = pr.equilibrium(LcPotential.zero(golden_mean()))
    assert mu.block == 1
    np.testing.assert_allclose(mu.trans, [[1 / GOLDEN, GOLDEN**-2], [1.0, 0.0]], atol=1e-13)
    np.testing.assert_allclose(mu.pi, [GOLDEN**2 / (1 + GOLDEN**2), 1 / (1 + GOLDEN**2)], atol=1e-13)
    assert pr.entropy(mu) == pytest.approx(math.log(GOLDEN), abs=1e-13)


def test_large_potentials_do_not_overflow():
    res = pr.pressure(LcPotential.constant(full_shift(2), 800.0))
    assert res.value == pytest.approx(800 + math.log(2), abs=1e-12)
    assert res.lam == math.inf


def test_perron_on_known_matrix():
    lam, r, _, residual = pr.perron(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert lam == pytest.approx(3.0, abs=1e-13)
    np.testing.assert_allclose(r, [1.0, 1.0], atol=1e-12)
    assert residual <= pr.RESIDUAL_TOL


def test_orbit_oracle_limit():
    with pytest.raises(errors.TooLarge):
        pr.pressure_oracle_orbits(LcPotential.zero(full_shift(5)), 12)


@given(shift_index, depths, seeds, st.floats(min_value=-5, max_value=5))
def test_constant_shift(i, k, seed, c):
    _, p, _, _ = random_pair(seed, i, k)
    assert pr.pressure(p + c).value == pytest.approx(pr.pressure(p).value + c, abs=1e-11)


@given(shift_index, depths, seeds)
def test_lipschitz_and_monotone(i, k, seed):
    _, p, q, _ = random_pair(seed, i, k)
    pp, pq = pr.pressure(p).value, pr.pressure(q).value
    assert abs(pp - pq) <= sup_dist_of(p, q) + 1e-12
    bigger = combine(p, absolute(q), 1.0, 1.0)
    assert pr.pressure(bigger).value >= pp - 1e-12


def sup_dist_of(p, q):
    return float(np.abs(combine(p, q, 1.0, -1.0).admissible_values()).max())


def absolute(p):
    return LcPotential(p.sft, p.depth, np.abs(p.values))


@given(shift_index, depths, seeds, st.floats(min_value=0.0, max_value=1.0))
def test_convexity(i, k, seed, t):
    _, p, q, _ = random_pair(seed, i, k)
    mid = pr.pressure(combine(p, q, t, 1 - t)).value
    assert mid <= t * pr.pressure(p).value + (1 - t) * pr.pressure(q).value + 1e-12


@given(shift_index, depths, seeds)
def test_refinement_invariance(i, k, seed):
    _, p, _, _ = random_pair(seed, i, k)
    assert pr.pressure(p.refine(k + 1)).value == pytest.approx(pr.pressure(p).value, abs=1e-12)


@given(shift_index, depths, seeds)
def test_equilibrium_identity_and_derivative(i, k, seed):
    _, p, q, _ = random_pair(seed, i, k)
    mu = pr.equilibrium(p)
    assert mu.block == max(k, 2) - 1
    assert pr.entropy(mu) + pr.integrate(p, mu) == pytest.approx(pr.pressure(p).value, abs=1e-10)
    # d/dt P(p + t q) at 0 is the integral of q against the equilibrium state
    h = 1e-5
    slope = (pr.pressure(combine(p, q, 1, h)).value - pr.pressure(combine(p, q, 1, -h)).value) / (2 * h)
    assert slope == pytest.approx(pr.integrate(q, mu), abs=1e-7)


@given(shift_index, depths, seeds)
def test_equilibrium_is_a_probability_measure(i, k, seed):
    s, p, _, _ = random_pair(seed, i, k)
    mu = pr.equilibrium(p)
    for m in range(1, 5):
        total = sum(pr.cylinder(mu, w) for w in words(s, m))
        assert total == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(mu.pi @ mu.trans, mu.pi, atol=1e-12)
    # shift invariance: mu[w] is the sum over one-symbol extensions on the left
    for w in words(s, 3):
        left = sum(pr.cylinder(mu, (a,) + w) for a in range(s.n) if s.a[a, w[0]])
        assert left == pytest.approx(pr.cylinder(mu, w), abs=1e-13)


@given(shift_index, st.integers(min_value=1, max_value=3), seeds, st.integers(min_value=0, max_value=2))
def test_extend_keeps_the_measure(i, block, seed, extra):
    s = standard_shifts()[i]
    mu = pr.random_markov_measure(s, block, make_rng(seed))
    nu = pr.extend(mu, block + extra)
    assert pr.entropy(nu) == pytest.approx(pr.entropy(mu), abs=1e-12)
    for w in words(s, block + extra + 1):
        assert pr.cylinder(nu, w) == pytest.approx(pr.cylinder(mu, w), abs=1e-13)


@given(shift_index, depths, seeds)
def test_variational_dominance(i, k, seed):
    s, p, _, rng = random_pair(seed, i, k)
    bound = pr.pressure(p).value
    for block in (1, 2, 3):
        mu = pr.random_markov_measure(s, block, rng)
        assert pr.entropy(mu) + pr.integrate(p, mu) <= bound + 1e-10


def test_orbit_oracle_converges_for_depth_two():
    p = random_potential(golden_mean(), 2, make_rng(7))
    target = pr.pressure(p).value
    errs = [abs(v - target) for _, v in pr.pressure_oracle_orbits(p, 16)]
    assert errs[-1] < errs[3]
    assert errs[-1] * 16 < 1.0


def test_markov_measure_rejects_bad_rows():
    with pytest.raises(errors.ValidationError):
        pr.MarkovMeasure(full_shift(2), 1, [0.5, 0.5], [[0.5, 0.6], [0.5, 0.5]])
    with pytest.raises(errors.ValidationError):
        # mass on the forbidden transition 2 -> 2
        pr.MarkovMeasure(golden_mean(), 1, [0.5, 0.5], [[0.0, 1.0], [0.5, 0.5]])
