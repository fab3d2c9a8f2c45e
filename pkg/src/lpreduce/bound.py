"""Dimension bounds: the worst-case upper dimension and the linear lower bound.

The lower bound concerns linear maps ``T: l_p^(2^m) -> l_p^d`` that are
admissible for the Walsh set ``{0, e_j, w_j / 2^(m/p)}`` with moduli
``(omega, Omega)``: every such map has
``d >= (omega(1) / Omega(1))**(2p / |p - 2|) * (n - 1) / 2`` with
``n = 2^(m+1) + 1``. :func:`audit_linear_map` checks a concrete matrix
against this and reports each inequality of the argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadN,
    DimensionMismatch,
    ExponentTwo,
    InvalidParameter,
    ModuliViolated,
)
from .gen import walsh_matrix
from .sampler import required_dimension


@dataclass(frozen=True)
class ModuliPair:
    """Values at 1 of the lower and upper moduli."""

    omega1: float
    Omega1: float

    def __post_init__(self):
        if not (0 < self.omega1 <= self.Omega1 and math.isfinite(self.Omega1)):
            raise InvalidParameter(
                f"need 0 < omega(1) <= Omega(1), got {self.omega1}, {self.Omega1}"
            )

    @property
    def ratio(self) -> float:
        return self.omega1 / self.Omega1


def walsh_m(n: int) -> int:
    """The ``m`` with ``n = 2^(m+1) + 1``; raises :class:`BadN` otherwise."""
    k = n - 1
    if n < 5 or k & (k - 1):
        raise BadN(f"n must be 2^(m+1) + 1 with m >= 1, got {n}")
    return k.bit_length() - 2


def linear_lower_bound(p: float, n: int, moduli: ModuliPair) -> float:
    if p == 2:
        raise ExponentTwo("the linear lower bound is vacuous at p = 2")
    if not p >= 1:
        raise InvalidParameter(f"need p >= 1, got {p}")
    walsh_m(n)
    return moduli.ratio ** (2 * p / abs(p - 2)) * (n - 1) / 2


def eps_isometric_moduli(p: float, eps: float) -> ModuliPair:
    """Moduli at 1 of a map changing p-th power distances by at most ``eps``."""
    if not 0 < eps < 1:
        raise InvalidParameter(f"need 0 < eps < 1, got {eps}")
    if not p > 0:
        raise InvalidParameter(f"need p > 0, got {p}")
    return ModuliPair((1 - eps) ** (1 / p), (1 + eps) ** (1 / p))


@dataclass
class AuditReport:
    p: float
    m: int
    d: int
    lower_bound: float
    bound_holds: bool
    parseval_residual: float  # relative
    basis_bound_ok: bool  # ||T e_j||_2^2 <= c_d * Omega(1)^2
    walsh_bound_ok: bool  # ||T w_j||_2^2 >= c'_d * 2^(2m/p) * omega(1)^2
    min_norm: float
    max_norm: float


def audit_linear_map(p: float, m: int, T, moduli: ModuliPair, rtol: float = 1e-12) -> AuditReport:
    """Check a ``d x 2^m`` matrix against the linear lower bound.

    Only the pairs containing 0 are tested against the moduli, since those
    are the ones the bound uses. For ``p < 2`` the l_2 / l_p comparisons are
    ``||x||_2 <= ||x||_p <= d^(1/p - 1/2) ||x||_2``; for ``p > 2`` they flip
    to ``||x||_p <= ||x||_2 <= d^(1/2 - 1/p) ||x||_p``.
    """
    if p == 2:
        raise ExponentTwo("the linear lower bound is vacuous at p = 2")
    if not p >= 1:
        raise InvalidParameter(f"need p >= 1, got {p}")
    size = 2**m
    T = np.asarray(T, dtype=np.float64)
    if T.ndim != 2 or T.shape[1] != size:
        raise DimensionMismatch(f"T must be d x {size}, got {T.shape}")
    d = T.shape[0]
    W = walsh_matrix(m)
    Te = T  # column j is T e_j
    Tw = T @ W.T  # column i is T w_i
    Tw_scaled = Tw / 2 ** (m / p)

    def lp(cols):
        return np.sum(np.abs(cols) ** p, axis=0) ** (1 / p)

    lo, hi = moduli.omega1 * (1 - rtol), moduli.Omega1 * (1 + rtol)
    norms_e, norms_w = lp(Te), lp(Tw_scaled)
    for label, norms in (("e", norms_e), ("w", norms_w)):
        bad = np.flatnonzero((norms < lo) | (norms > hi))
        if bad.size:
            j = int(bad[0])
            raise ModuliViolated(
                f"||T({label}_{j + 1}) - T(0)|| = {norms[j]:.6g} outside "
                f"[{moduli.omega1:.6g}, {moduli.Omega1:.6g}]",
                pair=(0, f"{label}_{j + 1}"),
                value=float(norms[j]),
            )

    sq_e = np.sum(Te**2, axis=0)
    sq_w = np.sum(Tw**2, axis=0)
    lhs, rhs = sq_w.sum(), size * sq_e.sum()
    residual = abs(lhs - rhs) / max(abs(rhs), np.finfo(float).tiny)

    if p < 2:
        c_up = 1.0
        c_low = d ** (-(2 - p) / p)
    else:
        c_up = d ** ((p - 2) / p)
        c_low = 1.0
    basis_ok = bool(np.all(sq_e <= c_up * norms_e**2 * (1 + 1e-9))
                    and np.all(norms_e <= hi))
    walsh_ok = bool(np.all(sq_w >= c_low * 2 ** (2 * m / p) * norms_w**2 * (1 - 1e-9))
                    and np.all(norms_w >= lo))

    n = 2 ** (m + 1) + 1
    lower = linear_lower_bound(p, n, moduli)
    return AuditReport(
        p=p, m=m, d=d, lower_bound=lower,
        bound_holds=bool(d >= lower * (1 - 1e-12)),
        parseval_residual=float(residual),
        basis_bound_ok=basis_ok, walsh_bound_ok=walsh_ok,
        min_norm=float(min(norms_e.min(), norms_w.min())),
        max_norm=float(max(norms_e.max(), norms_w.max())),
    )


@dataclass
class BoundReport:
    p: float
    n: int
    eps: float
    upper_dim: int | None  # worst-case dimension of the sampling construction
    lower_dim: float | None  # linear lower bound (Walsh n, p != 2 only)
    K: float | None = None
    measured_eps: float | None = None


def bound_report(p: float, n: int, eps: float, K: float | None = None,
                 measured_eps: float | None = None) -> BoundReport:
    upper = required_dimension(p, K, n, eps) if K is not None and K > 0 else None
    try:
        lower = linear_lower_bound(p, n, eps_isometric_moduli(p, eps))
    except (ExponentTwo, BadN):
        lower = None
    return BoundReport(p, n, eps, upper, lower, K, measured_eps)
