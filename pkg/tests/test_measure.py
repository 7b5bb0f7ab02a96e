import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from weaknorms import measure, oracles
from weaknorms.grid import ConfigError, GeneratorId, GridFunction, GridSpec, lp_quadrature, sample

SPEC = GridSpec(1, 4.0, 8)  # h = 1, unit cells


def step(vals, spec=SPEC):
    v = np.zeros(spec.size)
    v[: len(vals)] = vals
    return GridFunction(spec, v)


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
grid_values = arrays(np.float64, 64, elements=finite)
SPEC64 = GridSpec(2, 2.0, 8)


def test_hand_profile():
    f = step([3.0, -1.0, 1.0])
    d = measure.distribution(f)
    assert d(0.0) == 3 and d(0.5) == 3 and d(1.0) == 1 and d(2.99) == 1 and d(3.0) == 0
    with pytest.raises(ValueError):
        d(-1.0)
    assert measure.weak_norm(f, 1) == 3.0
    assert measure.weak_norm(f, 2) == 3.0
    assert measure.layer_cake_norm(f, 1) == 5.0
    assert measure.layer_cake_norm(f, 2) == 11.0
    assert measure.weak_norm(f, math.inf) == 3.0


def test_zero_function():
    z = GridFunction.zeros(SPEC)
    assert measure.weak_norm(z, 2) == 0.0
    assert measure.layer_cake_norm(z, 2) == 0.0
    assert measure.lorentz_norm(z, 2, 1) == 0.0
    assert measure.lorentz_norm(z, 2, math.inf) == 0.0


def test_gaussian_weak_norm_converges():
    # the step-function supremum is O(h) above the continuum value
    ref = oracles.gaussian_weak(1, 2)
    errs = [measure.weak_norm(sample(GridSpec(1, 8.0, N), GeneratorId("gaussian")), 2) / ref - 1
            for N in (1024, 8192)]
    assert 0 <= errs[1] < errs[0] / 4
    assert errs[1] < 3e-3


def test_tent_weak_l1():
    # sup_a a * 2(1 - a) = 1/2
    t = sample(GridSpec(1, 2.0, 4096), GeneratorId("tent"))
    assert measure.weak_norm(t, 1) == pytest.approx(0.5, rel=1e-3)


def test_lorentz_diagonal_and_weak_end():
    for k in range(4):
        f = sample(GridSpec(2, 6.0, 64), GeneratorId("random-mix", seed=k))
        for p in (1.5, 2.0, 3.0):
            assert measure.lorentz_norm(f, p, p) == pytest.approx(lp_quadrature(f, p), rel=1e-12)
            assert measure.lorentz_norm(f, p, math.inf) == measure.weak_norm(f, p)


def test_lorentz_rejects_p_le_1():
    f = step([1.0])
    with pytest.raises(ConfigError):
        measure.lorentz_norm(f, 1.0, 2.0)
    with pytest.raises(ConfigError):
        measure.lorentz_norm(f, 2.0, 0.5)


def test_nesting_constants():
    assert measure.lorentz_nesting_constant(2, 1, math.inf) == pytest.approx(0.5)
    assert measure.lorentz_nesting_constant(4, 2, 4) == pytest.approx(0.5 ** 0.25)
    with pytest.raises(ConfigError):
        measure.lorentz_nesting_constant(2, 3, 2)


def test_interp_constant_values():
    assert measure.interp_constant(2, 3, 4) == pytest.approx(6 ** (1 / 3))
    assert measure.interp_constant(1, 2, math.inf) == pytest.approx(math.sqrt(2))
    assert measure.interp_theta(2, 3, 4) == pytest.approx((1 / 3 - 1 / 4) / (1 / 2 - 1 / 4))
    with pytest.raises(ConfigError):
        measure.interp_bound_check(step([1.0]), 3, 2, 4)


def test_amplitude_split_bounds():
    f = sample(GridSpec(2, 6.0, 64), GeneratorId("random-mix", seed=2))
    for M in (0.1, 0.5, 1.0):
        sp = measure.amplitude_split(f, M)
        np.testing.assert_array_equal(sp.low.values + sp.high.values, f.values)
        for s in (3.0, math.inf):
            b = sp.check_bounds(1.5, 2.0, s)
            assert b["low"]["holds"] and b["high"]["holds"]


def test_k_functional_needs_truncation_splits():
    # f* = 2 on [0, 1), 1 on [1, 2); K(f, 3/2) = 2 + 1/2
    f = GridFunction(GridSpec(1, 1.0, 8), [2.0] * 4 + [1.0] * 4)
    assert measure.k_functional(f, 1.5) == pytest.approx(2.5, rel=1e-15)
    assert measure.k_functional_bruteforce(f, 1.5) == pytest.approx(2.5, rel=1e-15)


def test_k_functional_limits():
    f = sample(GridSpec(1, 6.0, 128), GeneratorId("random-mix", seed=0))
    assert measure.k_functional(f, 1e6) == pytest.approx(lp_quadrature(f, 1), rel=1e-12)
    small = 1e-4
    assert measure.k_functional(f, small) == pytest.approx(small * lp_quadrature(f, math.inf), rel=1e-12)
    with pytest.raises(ConfigError):
        measure.k_functional(f, 0.0)


# -- properties --------------------------------------------------------------

@given(grid_values, st.sampled_from([1.0, 1.5, 2.0, 3.0, 4.0]))
def test_layer_cake_matches_quadrature(vals, p):
    f = GridFunction(SPEC64, vals)
    ref = lp_quadrature(f, p) ** p
    assert measure.layer_cake_norm(f, p) == pytest.approx(ref, rel=1e-9, abs=1e-300)


@given(grid_values, st.sampled_from([1.0, 1.5, 2.0, 4.0]))
def test_chebyshev(vals, p):
    f = GridFunction(SPEC64, vals)
    assert measure.weak_norm(f, p) <= lp_quadrature(f, p)


@given(grid_values, st.floats(1e-3, 1e3).flatmap(lambda c: st.sampled_from([c, -c])), st.sampled_from([1.0, 2.0, 3.5]))
def test_weak_norm_homogeneous(vals, c, p):
    f = GridFunction(SPEC64, vals)
    assert measure.weak_norm(c * f, p) == pytest.approx(abs(c) * measure.weak_norm(f, p), rel=1e-12, abs=1e-300)


@given(grid_values, st.randoms(use_true_random=False))
def test_norms_depend_only_on_distribution(vals, rnd):
    perm = list(range(vals.size))
    rnd.shuffle(perm)
    f = GridFunction(SPEC64, vals)
    g = GridFunction(SPEC64, -vals[perm])
    assert measure.distribution(f).same_as(measure.distribution(g))
    assert measure.weak_norm(f, 2) == measure.weak_norm(g, 2)
    assert measure.lorentz_norm(f, 2, 1) == measure.lorentz_norm(g, 2, 1)


@given(grid_values)
def test_distribution_nonincreasing(vals):
    d = measure.distribution(GridFunction(SPEC64, vals))
    assert np.all(np.diff(d.measures) <= 0) and d.measures[-1] == 0


@given(grid_values, st.sampled_from([(2, 3, 4), (1.5, 2, 6), (1, 2, math.inf)]))
def test_weak_interpolation_bound(vals, prq):
    rep = measure.interp_bound_check(GridFunction(SPEC64, vals), *prq)
    assert rep.ok


@given(grid_values, st.floats(0.01, 100.0))
def test_k_functional_bruteforce(vals, t):
    f = GridFunction(SPEC64, vals)
    a = measure.k_functional(f, t)
    b = measure.k_functional_bruteforce(f, t)
    assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


@given(grid_values, st.sampled_from([1.5, 2.0, 3.0]), st.sampled_from([1.0, 2.0]))
def test_lorentz_nesting(vals, p, r):
    f = GridFunction(SPEC64, vals)
    assert measure.lorentz_norm(f, p, math.inf) <= (
        measure.lorentz_nesting_constant(p, r, math.inf) * measure.lorentz_norm(f, p, r) * (1 + 1e-12))


@given(grid_values)
def test_rearrangement_is_equimeasurable(vals):
    f = GridFunction(SPEC64, vals)
    r = measure.rearrange(f)
    assert r.distribution().same_as(measure.distribution(f))
    assert np.all(np.diff(r.star_values) <= 0)
