import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermoflow import errors
from thermoflow.potential import LcPotential, Roof, combine, common_depth, sup_dist, sup_norm, variation
from thermoflow.sft import full_shift, golden_mean, words

from conftest import depths, shift_index, values_for
from thermoflow.verify import standard_shifts


@st.composite
def potentials(draw, depth=None):
    s = standard_shifts()[draw(shift_index)]
    k = draw(depths) if depth is None else depth
    return LcPotential(s, k, draw(values_for(s, k)))


def test_inadmissible_entries_are_zeroed():
    p = LcPotential(golden_mean(), 2, [[1.0, 2.0], [3.0, 99.0]])
    assert p.values[1, 1] == 0.0
    assert sorted(p.admissible_values()) == [1.0, 2.0, 3.0]
    assert p.max() == 3.0


def test_from_mapping_needs_every_admissible_word():
    s = golden_mean()
    with pytest.raises(errors.ValidationError):
        LcPotential.from_mapping(s, 2, {(0, 0): 1.0, (0, 1): 2.0})
    with pytest.raises(errors.ValidationError):
        LcPotential.from_mapping(s, 2, {(0, 0): 1.0, (0, 1): 2.0, (1, 0): 3.0, (1, 1): 4.0})
    p = LcPotential.from_mapping(s, 2, {(0, 0): 1.0, (0, 1): 2.0, (1, 0): 3.0})
    assert dict(p.items()) == {(0, 0): 1.0, (0, 1): 2.0, (1, 0): 3.0}


def test_shape_and_finiteness_checked():
    s = full_shift(2)
    with pytest.raises(errors.ValidationError):
        LcPotential(s, 2, [1.0, 2.0])
    with pytest.raises(errors.ValidationError):
        LcPotential(s, 1, [np.nan, 1.0])
    with pytest.raises(errors.ValidationError):
        LcPotential(s, 0, 1.0)


def test_values_are_read_only():
    p = LcPotential.constant(full_shift(2), 1.0)
    with pytest.raises(ValueError):
        p.values[0] = 2.0


def test_eval_needs_enough_symbols():
    p = LcPotential(full_shift(2), 2, [[1.0, 2.0], [3.0, 4.0]])
    assert p.eval((1, 0, 1)) == 3.0
    with pytest.raises(errors.WordTooShort):
        p.eval((1,))


def test_roof_positivity():
    s = full_shift(2)
    with pytest.raises(errors.NotPositive):
        Roof(s, 1, [1.0, 0.0])
    # inadmissible entries do not count against positivity
    assert Roof(golden_mean(), 2, [[1.0, 1.0], [1.0, -5.0]]).min() == 1.0


def test_mixed_shifts_rejected():
    with pytest.raises(errors.MismatchedSft):
        LcPotential.zero(full_shift(2)) + LcPotential.zero(golden_mean())


def test_arithmetic_with_numbers():
    s = full_shift(2)
    p = LcPotential(s, 2, [[1.0, 2.0], [3.0, 4.0]])
    assert (2.0 - p) == LcPotential(s, 2, [[1.0, 0.0], [-1.0, -2.0]])
    assert (3 * p + 1).eval((1, 1)) == 13.0
    assert (-p).min() == -4.0


@given(potentials(), st.integers(min_value=0, max_value=2))
def test_refine_preserves_values(p, extra):
    q = p.refine(p.depth + extra)
    for w in words(p.sft, q.depth):
        assert q.eval(w) == p.eval(w)
    assert q.depth == p.depth + extra


@given(potentials(), potentials())
def test_sup_dist_is_a_metric(p, q):
    if p.sft != q.sft:
        return
    assert sup_dist(p, q) == sup_dist(q, p) >= 0
    assert sup_dist(p, p) == 0
    r = LcPotential.constant(p.sft, 0.5)
    assert sup_dist(p, q) <= sup_dist(p, r) + sup_dist(r, q) + 1e-15


@given(potentials())
def test_variation_is_monotone_and_vanishes_at_depth(p):
    vs = [variation(p, j) for j in range(1, p.depth + 1)]
    assert all(b <= a for a, b in zip(vs, vs[1:]))
    assert vs[-1] == 0.0
    assert variation(p, 1) <= p.max() - p.min()


@given(potentials())
def test_common_depth_and_norm(p):
    c = LcPotential.constant(p.sft, -7.0)
    a, b = common_depth(p, c)
    assert a.depth == b.depth == p.depth
    assert sup_norm(combine(p, c, 1.0, 0.0)) == sup_norm(p)
