import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpreduce.bound import (
    ModuliPair,
    audit_linear_map,
    bound_report,
    eps_isometric_moduli,
    linear_lower_bound,
    walsh_m,
)
from lpreduce.errors import BadN, ExponentTwo, InvalidParameter, ModuliViolated


def test_lower_bound_examples():
    assert linear_lower_bound(1, 9, ModuliPair(1, 1)) == 4.0
    assert linear_lower_bound(3, 9, ModuliPair(2, 2)) == 4.0
    for n in (9, 17, 33):
        assert linear_lower_bound(1, n, ModuliPair(0.5, 1)) == pytest.approx((n - 1) / 8)
    assert linear_lower_bound(1, 9, ModuliPair(1e-8, 1)) < 1e-15


def test_eps_moduli_values():
    eps = eps_isometric_moduli(1, 0.5)
    assert (eps.omega1, eps.Omega1) == (0.5, 1.5)
    assert eps_isometric_moduli(3, 1e-9).ratio == pytest.approx(1, abs=1e-9)
    # frozen oracle values at eps = 0.1
    for p in (1, 3):
        mod = eps_isometric_moduli(p, 0.1)
        assert linear_lower_bound(p, 9, mod) == pytest.approx(2.6776859504132, rel=1e-12)
        assert linear_lower_bound(p, 17, mod) == pytest.approx(5.3553719008264, rel=1e-12)


@given(st.floats(1, 6).filter(lambda p: abs(p - 2) > 1e-3), st.floats(0.01, 0.99),
       st.floats(0.01, 0.99))
def test_lower_bound_is_monotone_in_ratio(p, r1, r2):
    lo, hi = sorted((r1, r2))
    assert (linear_lower_bound(p, 17, ModuliPair(lo, 1))
            <= linear_lower_bound(p, 17, ModuliPair(hi, 1)) * (1 + 1e-12))


def test_parameter_errors():
    with pytest.raises(ExponentTwo):
        linear_lower_bound(2, 9, ModuliPair(1, 1))
    with pytest.raises(BadN):
        linear_lower_bound(1, 10, ModuliPair(1, 1))
    with pytest.raises(BadN):
        walsh_m(3)
    assert [walsh_m(n) for n in (5, 9, 17)] == [1, 2, 3]
    with pytest.raises(InvalidParameter):
        ModuliPair(2, 1)
    with pytest.raises(InvalidParameter):
        ModuliPair(0, 1)
    for eps in (0, 1, -0.1):
        with pytest.raises(InvalidParameter):
            eps_isometric_moduli(1, eps)


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, 4.0])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_identity_map_is_tight(p, m):
    rep = audit_linear_map(p, m, np.eye(2**m), ModuliPair(1, 1))
    assert rep.lower_bound == 2**m and rep.bound_holds
    assert rep.basis_bound_ok and rep.walsh_bound_ok
    assert rep.parseval_residual <= 1e-12
    assert rep.min_norm == pytest.approx(1) and rep.max_norm == pytest.approx(1)


def test_zero_map_violates_moduli():
    with pytest.raises(ModuliViolated) as info:
        audit_linear_map(1, 2, np.zeros((3, 4)), ModuliPair(0.5, 1))
    assert info.value.pair == (0, "e_1") and info.value.value == 0


def test_too_small_map_is_caught():
    # a 1-row map cannot send all e_j and Walsh rows to norms near 1
    with pytest.raises(ModuliViolated):
        audit_linear_map(1, 2, np.ones((1, 4)), eps_isometric_moduli(1, 0.1))


@settings(max_examples=20)
@given(st.integers(1, 6), st.integers(1, 40), st.integers(0, 2**32))
def test_parseval_identity_for_random_maps(m, d, seed):
    from lpreduce.gen import walsh_matrix

    T = np.random.default_rng(seed).normal(size=(d, 2**m))
    W = walsh_matrix(m)
    lhs = np.sum((T @ W.T) ** 2)
    rhs = 2**m * np.sum(T**2)
    assert abs(lhs - rhs) <= 1e-9 * rhs


def test_audit_rejects_shapes():
    with pytest.raises(InvalidParameter):
        audit_linear_map(2, 2, np.eye(4), ModuliPair(1, 1))
    with pytest.raises(ValueError):
        audit_linear_map(1, 2, np.eye(3), ModuliPair(1, 1))


def test_bound_report():
    rep = bound_report(1, 10, 0.5, K=1.0)
    assert rep.upper_dim == 8712 and rep.lower_dim is None
    rep = bound_report(3, 17, 0.1)
    assert rep.upper_dim is None
    assert rep.lower_dim == pytest.approx(5.3553719008264)
    assert math.isclose(bound_report(2, 17, 0.1, K=1).upper_dim,
                        math.ceil(32 * math.e**2 * 16 * math.log(17) / 0.01))
