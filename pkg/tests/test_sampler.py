import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpreduce.cone import decompose, extreme_matrix, extreme_rows
from lpreduce.core import incompressibility, new_point_set, num_pairs
from lpreduce.errors import InvalidParameter, RetriesExhausted
from lpreduce.measure import change_of_measure
from lpreduce.sampler import (
    SamplerConfig,
    adaptive_sample,
    dimension_bound,
    greedy_sample,
    lq_norm,
    random_sample,
    required_dimension,
    smooth_exponent,
)


def prepared(ps):
    _, out = change_of_measure(ps)
    return decompose(out), out


def random_instance(rng, n, m, p):
    return new_point_set(p, rng.dirichlet(np.ones(m)), rng.normal(size=(n, m)))


# -- dimension formula -------------------------------------------------------

def test_required_dimension_examples():
    # 32 e^2 * 4 * ln 10 / 0.25 = 8711.13...
    assert required_dimension(1, 1, 10, 0.5) == 8712
    # (2K)^(2p) = 1, ln e = 1, 32 e^2 = 236.449...
    assert required_dimension(2, 0.5, math.e, 1) == 237


@given(st.floats(1, 4), st.floats(0.1, 3), st.integers(2, 10**6), st.floats(0.01, 2))
def test_doubling_eps_quarters_the_bound(p, K, n, eps):
    assert dimension_bound(p, K, n, 2 * eps) == pytest.approx(dimension_bound(p, K, n, eps) / 4,
                                                              rel=1e-12)


@pytest.mark.parametrize("args", [(0.5, 1, 10, 0.1), (1, 0, 10, 0.1), (1, 1, 1, 0.1),
                                  (1, 1, 10, 0), (1, 1e200, 10, 0.1)])
def test_required_dimension_rejects(args):
    with pytest.raises(InvalidParameter):
        required_dimension(*args)


def test_sampler_config_validation():
    with pytest.raises(InvalidParameter):
        SamplerConfig(epsilon=0)
    with pytest.raises(InvalidParameter):
        SamplerConfig(q_exponent=1.5)
    with pytest.raises(ValueError):
        SamplerConfig(mode="annealing")
    assert SamplerConfig(mode="random").mode.value == "random"


def test_smooth_exponent():
    assert smooth_exponent(2) == 2.0
    assert smooth_exponent(3) == 2.0  # ln 3 < 2
    assert smooth_exponent(16) == pytest.approx(math.log(120))


# -- norm sandwich -----------------------------------------------------------

@pytest.mark.parametrize("N", [10, 100, 10_000])
def test_norm_sandwich(N):
    rng = np.random.default_rng(N)
    q = math.log(N)
    v = rng.standard_cauchy(size=(200, N))
    inf = np.abs(v).max(axis=1)
    lq = lq_norm(v, q, axis=1)
    assert np.all(inf <= lq * (1 + 1e-12))
    assert np.all(lq <= N ** (1 / q) * inf * (1 + 1e-12))
    assert N ** (1 / q) == pytest.approx(math.e, rel=1e-12)


def test_lq_norm_matches_naive_and_survives_extremes():
    v = np.array([3.0, -4.0, 1.0])
    assert lq_norm(v, 2) == pytest.approx(np.linalg.norm(v), rel=1e-14)
    assert lq_norm(v * 1e200, 10) == pytest.approx(1e200 * lq_norm(v, 10), rel=1e-12)
    assert lq_norm(v * 1e-200, 10) == pytest.approx(1e-200 * lq_norm(v, 10), rel=1e-12)
    assert lq_norm(np.zeros(4), 3) == 0.0


# -- random sampling ---------------------------------------------------------

def test_random_single_atom():
    ps = new_point_set(1, [1.0], [[1.0], [0.0], [2.0]])
    res = random_sample(*prepared(ps), d=17, seed=3)
    np.testing.assert_array_equal(res.chosen_atoms, np.zeros(17))
    assert res.achieved_sup_error == 0


def test_random_identical_extreme_matrices():
    ps = new_point_set(1, [0.5, 0.5], [[1, 0], [0, 1]])
    dec, out = prepared(ps)
    for seed in range(5):
        assert random_sample(dec, out, d=3, seed=seed).achieved_sup_error == 0


def test_random_is_seeded():
    rng = np.random.default_rng(0)
    dec, out = prepared(random_instance(rng, 6, 20, 1.5))
    a = random_sample(dec, out, d=50, seed=11)
    b = random_sample(dec, out, d=50, seed=11)
    np.testing.assert_array_equal(a.chosen_atoms, b.chosen_atoms)
    assert a.achieved_sup_error == b.achieved_sup_error


def test_random_retries_exhausted_carries_best():
    rng = np.random.default_rng(1)
    dec, out = prepared(random_instance(rng, 6, 20, 1.0))
    with pytest.raises(RetriesExhausted) as info:
        random_sample(dec, out, d=2, seed=0, max_retries=3, epsilon=1e-9)
    best = info.value.best
    assert best.d == 2 and not best.converged
    assert best.achieved_sup_error > 1e-9


def test_random_retry_returns_first_success():
    rng = np.random.default_rng(1)
    dec, out = prepared(random_instance(rng, 6, 20, 1.0))
    res = random_sample(dec, out, d=400, seed=0, epsilon=10.0)
    assert res.achieved_sup_error <= 10.0


def test_unbiasedness():
    rng = np.random.default_rng(5)
    dec, out = prepared(random_instance(rng, 5, 12, 2.0))
    draws = 10**5
    res = random_sample(dec, out, d=draws, seed=2)
    rows = extreme_rows(out)
    counts = np.bincount(res.chosen_atoms, minlength=out.m)
    mean = counts @ rows / draws
    sigma = np.sqrt(counts @ (rows - mean) ** 2 / draws)
    assert np.all(np.abs(mean - dec.target.packed) <= 5 * sigma / math.sqrt(draws))


def test_monte_carlo_rate():
    rng = np.random.default_rng(2024)
    dec, out = prepared(random_instance(rng, 8, 40, 1.0))
    d = 100

    def mean_err(dd):
        return np.mean([random_sample(dec, out, dd, seed=s).achieved_sup_error
                        for s in range(200)])

    ratio = mean_err(d) / mean_err(4 * d)
    assert 1.6 <= ratio <= 2.6


# -- greedy ------------------------------------------------------------------

def test_greedy_single_atom():
    ps = new_point_set(2, [1.0], [[1.0], [0.0], [2.0]])
    res = greedy_sample(*prepared(ps), d=9)
    np.testing.assert_array_equal(res.chosen_atoms, np.zeros(9))
    assert res.achieved_sup_error == 0


def test_greedy_sticks_to_exact_extreme_point():
    # one pair with atom matrices 1, 9, 5 and target 0.25*1 + 0.25*9 + 0.5*5 = 5
    ps = new_point_set(2, [0.25, 0.25, 0.5], [[1, 3, 5**0.5], [0, 0, 0]])
    dec = decompose(ps)
    assert extreme_matrix(ps, 2).packed[0] == pytest.approx(dec.target.packed[0], abs=1e-12)
    res = greedy_sample(dec, ps, d=25)
    np.testing.assert_array_equal(res.chosen_atoms, np.full(25, 2))
    assert res.achieved_sup_error <= 1e-12


def test_greedy_potential_is_minimal_at_every_step():
    rng = np.random.default_rng(9)
    dec, out = prepared(random_instance(rng, 7, 15, 1.5))
    res = greedy_sample(dec, out, d=300, check=True)
    assert len(res.potentials) == 300


def test_greedy_is_deterministic():
    rng = np.random.default_rng(4)
    dec, out = prepared(random_instance(rng, 9, 30, 3.0))
    a = greedy_sample(dec, out, d=500)
    b = greedy_sample(dec, out, d=500)
    assert a.chosen_atoms.tobytes() == b.chosen_atoms.tobytes()
    assert a.achieved_sup_error == b.achieved_sup_error


def test_greedy_tie_break_smallest_index():
    # atoms 0 and 1 are identical, so every tie must resolve to 0
    ps = new_point_set(1, [0.3, 0.3, 0.4], [[1, 1, 0], [0, 0, 1], [2, 2, 0]])
    res = greedy_sample(decompose(ps), ps, d=40)
    assert 1 not in set(res.chosen_atoms.tolist())


def test_greedy_beats_random_and_meets_eps():
    eps = 0.5
    wins = 0
    for seed in range(50):
        rng = np.random.default_rng(1000 + seed)
        ps = random_instance(rng, 4, 6, 1.0)
        dec, out = prepared(ps)
        d = required_dimension(1.0, incompressibility(ps), 4, eps)
        g = greedy_sample(dec, out, d)
        assert g.achieved_sup_error <= eps
        best_random = min(random_sample(dec, out, d, seed=s).achieved_sup_error
                          for s in range(200))
        wins += g.achieved_sup_error <= best_random
    assert wins >= 48


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1.0, 2.0, 3.0]), st.sampled_from([0.25, 0.5]))
def test_greedy_meets_eps_at_worst_case_dimension(seed, p, eps):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(2, 6)), int(rng.integers(1, 9))
    ps = random_instance(rng, n, m, p)
    dec, out = prepared(ps)
    # same K after the change of measure: every value is bounded by it
    K = incompressibility(ps)
    assert np.abs(out.values).max() <= K * (1 + 1e-12)
    d = required_dimension(p, K, n, eps)
    if d * m * num_pairs(n) > 3e7:
        return
    assert greedy_sample(dec, out, d).achieved_sup_error <= eps


# -- adaptive ----------------------------------------------------------------

def test_adaptive_stops_early():
    # two atoms with the same weight: d = 2 hits the target exactly
    ps = new_point_set(1, [0.5, 0.5], [[0, 1], [0, 3]])
    dec = decompose(ps)
    res = adaptive_sample(dec, ps, epsilon=1e-12, d_cap=10**6)
    assert res.converged and res.d <= 2
    assert res.achieved_sup_error <= 1e-12


def test_adaptive_huge_eps_uses_one_atom():
    rng = np.random.default_rng(6)
    dec, out = prepared(random_instance(rng, 6, 10, 2.0))
    res = adaptive_sample(dec, out, epsilon=2 * dec.radius_R, d_cap=64)
    assert res.d == 1 and res.achieved_sup_error <= 2 * dec.radius_R


def test_adaptive_zero_eps_falls_back():
    rng = np.random.default_rng(7)
    dec, out = prepared(random_instance(rng, 5, 7, 1.0))
    res = adaptive_sample(dec, out, epsilon=0.0, d_cap=64)
    assert not res.converged
    assert res.d <= 64


def test_adaptive_matches_greedy_prefix():
    rng = np.random.default_rng(8)
    dec, out = prepared(random_instance(rng, 6, 12, 1.0))
    res = adaptive_sample(dec, out, epsilon=0.05, d_cap=4096)
    assert res.converged
    g = greedy_sample(dec, out, res.d)
    np.testing.assert_array_equal(res.chosen_atoms, g.chosen_atoms)


def test_certificate_bounds_random_mean_error():
    rng = np.random.default_rng(12)
    dec, out = prepared(random_instance(rng, 6, 25, 1.0))
    errs = [random_sample(dec, out, 64, seed=s) for s in range(50)]
    assert np.mean([r.achieved_sup_error for r in errs]) <= errs[0].certificate_error
