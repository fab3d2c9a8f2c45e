"""Instance generators.

Every generator returns a :class:`~lpreduce.core.PointSet` in the L_p^N form:
uniform weights ``1/N`` and coordinates multiplied by ``N**(1/p)`` relative to
l_p^N, so that l_p norms and distances carry over unchanged. Use
:func:`to_lp_coordinates` to go back.
"""
from __future__ import annotations

import numpy as np

from .core import PointSet, new_point_set
from .errors import InvalidParameter, NonUniformWeights, WrongExponent


def _rng(seed):
    return np.random.default_rng(seed)


def from_lp_coordinates(points, p: float) -> PointSet:
    points = np.asarray(points, dtype=np.float64)
    N = points.shape[1]
    return new_point_set(p, np.full(N, 1.0 / N), points * N ** (1.0 / p))


def to_lp_coordinates(ps: PointSet) -> np.ndarray:
    """Inverse of :func:`from_lp_coordinates` for uniformly weighted sets."""
    return ps.values / ps.m ** (1.0 / ps.p)


def random_ball(n: int, N: int, p: float, seed=0) -> PointSet:
    """n independent uniform points in the unit ball of L_p^N.

    Directions come from i.i.d. coordinates with density proportional to
    ``exp(-|t|**p)`` (sign times Gamma(1/p)**(1/p)), normalized to the sphere;
    the radius is ``U**(1/N)``.
    """
    if n < 1 or N < 1:
        raise InvalidParameter(f"need n, N >= 1, got n={n}, N={N}")
    if not p >= 1:
        raise InvalidParameter(f"need p >= 1, got {p}")
    rng = _rng(seed)
    g = rng.standard_gamma(1.0 / p, size=(n, N)) ** (1.0 / p)
    g *= rng.choice(np.array([-1.0, 1.0]), size=(n, N))
    norms = np.mean(np.abs(g) ** p, axis=1, keepdims=True) ** (1.0 / p)
    radius = rng.random((n, 1)) ** (1.0 / N)
    return new_point_set(p, np.full(N, 1.0 / N), g / norms * radius)


def haar_orthogonal(N: int, seed=0) -> np.ndarray:
    """Haar-distributed N x N orthogonal matrix (QR of a Gaussian matrix, sign-fixed)."""
    rng = _rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((N, N)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def haar_rotate(ps: PointSet, seed=0, rotation=None) -> PointSet:
    """Apply a random rotation of R^N to every point of a uniformly weighted L_2 set.

    ``rotation`` overrides the random matrix (pass the identity to get the
    set back unchanged).
    """
    if ps.p != 2:
        raise WrongExponent(f"rotation invariance needs p = 2, got {ps.p}")
    if not np.allclose(ps.weights, 1.0 / ps.m, rtol=0, atol=1e-12):
        raise NonUniformWeights("rotation needs the normalized counting measure")
    U = haar_orthogonal(ps.m, seed) if rotation is None else np.asarray(rotation, float)
    if U.shape != (ps.m, ps.m):
        raise InvalidParameter(f"rotation must be {ps.m} x {ps.m}, got {U.shape}")
    return new_point_set(2.0, ps.weights, ps.values @ U.T)


def spike_sphere(n: int, N: int | None = None, identical: bool = False) -> PointSet:
    """Unit vectors of L_2^N concentrated on single coordinates.

    Point ``i`` is ``sqrt(N) * e_i``; with ``identical=True`` all points are
    ``sqrt(N) * e_1``. Without rotation the distinct version has
    incompressibility ``sqrt(N)``, the largest possible on the unit sphere.
    """
    N = n if N is None else N
    if n < 1 or N < 1 or (not identical and n > N):
        raise InvalidParameter(f"need 1 <= n <= N, got n={n}, N={N}")
    values = np.zeros((n, N))
    if identical:
        values[:, 0] = np.sqrt(N)
    else:
        values[np.arange(n), np.arange(n)] = np.sqrt(N)
    return new_point_set(2.0, np.full(N, 1.0 / N), values)


def walsh_matrix(m: int) -> np.ndarray:
    """2^m x 2^m Walsh matrix, the m-fold Kronecker power of [[1, 1], [1, -1]]."""
    h = np.ones((1, 1))
    base = np.array([[1.0, 1.0], [1.0, -1.0]])
    for _ in range(m):
        h = np.kron(h, base)
    return h


def walsh_points(m: int, p: float) -> np.ndarray:
    """The 2^(m+1) + 1 points ``0, e_j, w_j / 2^(m/p)`` as rows in l_p^(2^m)."""
    if m < 1:
        raise InvalidParameter(f"need m >= 1, got {m}")
    if not p >= 1:
        raise InvalidParameter(f"need p >= 1, got {p}")
    size = 2**m
    return np.vstack([np.zeros((1, size)), np.eye(size), walsh_matrix(m) / 2 ** (m / p)])


def walsh_set(m: int, p: float) -> PointSet:
    return from_lp_coordinates(walsh_points(m, p), p)


def random_simple(seed=0, n_max: int = 20, m_max: int = 20,
                  p_choices=(1.0, 1.5, 2.0, 3.0), unit_ball: bool = True) -> PointSet:
    """Arbitrary simple-function point set for property checks.

    Random sizes, Dirichlet weights, heavy-tailed values, and some atoms where
    every point vanishes. With ``unit_ball`` the set is scaled so its largest
    L_p norm is 1, the scale at which additive errors are meaningful.
    """
    rng = _rng(seed)
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    p = float(rng.choice(p_choices))
    w = rng.dirichlet(np.ones(m))
    a = rng.standard_t(3, size=(n, m)) * rng.exponential(1.0, size=(1, m))
    a[:, rng.random(m) < 0.15] = 0.0
    if not np.any(a):
        a[0, 0] = 1.0
    if unit_ball:
        a /= np.max((np.abs(a) ** p @ w) ** (1.0 / p))
    return new_point_set(p, w, a)
