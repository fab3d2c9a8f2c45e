"""Point sets as simple functions on a finite probability space.

A point set is stored extensionally: ``weights[k]`` is the mass of atom ``k``
and ``values[i, k]`` the constant value of point ``i`` on that atom. Distance
matrices hold p-th powers of L_p distances as packed strict upper triangles,
row-major, i.e. in the order of ``np.triu_indices(n, 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NonFiniteValue,
    NonProbabilityWeights,
)

WEIGHT_TOL = 1e-9
EXACT_TOL = 1e-12

# pairs x atoms block size used when accumulating distances
_BLOCK = 1 << 22


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointSet:
    """n simple functions over m atoms of a probability space.

    Construct with :func:`new_point_set`; the arrays are read-only.
    """

    p: float
    weights: np.ndarray
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def envelope(self) -> np.ndarray:
        """Per-atom maximum of ``|values|`` over the points."""
        return np.abs(self.values).max(axis=0)


@lru_cache(maxsize=64)
def pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row/column indices of the packed upper triangle for n points."""
    i, j = np.triu_indices(n, 1)
    i.setflags(write=False)
    j.setflags(write=False)
    return i, j


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric zero-diagonal matrix stored as its packed upper triangle."""

    n: int
    packed: np.ndarray

    def __post_init__(self):
        if self.packed.shape != (num_pairs(self.n),):
            raise DimensionMismatch(
                f"packed length {self.packed.shape} does not match n={self.n}"
            )

    @classmethod
    def from_packed(cls, n: int, packed) -> "DistanceMatrix":
        return cls(int(n), _frozen(packed))

    @classmethod
    def from_full(cls, mat) -> "DistanceMatrix":
        mat = np.asarray(mat, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got {mat.shape}")
        i, j = pair_index(mat.shape[0])
        return cls.from_packed(mat.shape[0], mat[i, j])

    @property
    def entries(self) -> np.ndarray:
        """The full n x n matrix."""
        out = np.zeros((self.n, self.n))
        i, j = pair_index(self.n)
        out[i, j] = self.packed
        out[j, i] = self.packed
        return out

    def __getitem__(self, ij):
        i, j = ij
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        # offset of row i in the packed triangle
        k = i * self.n - i * (i + 1) // 2 + (j - i - 1)
        return float(self.packed[k])


def new_point_set(p: float, weights, values) -> PointSet:
    """Validate and build a :class:`PointSet`.

    Weights whose sum is within 1e-9 of one are renormalized (unless already
    within summation rounding, so that stored weights read back unchanged);
    atoms of zero mass are dropped together with their value columns.
    """
    p = float(p)
    if not np.isfinite(p) or p <= 0:
        raise InvalidParameter(f"exponent p must be finite and positive, got {p}")
    w = np.asarray(weights, dtype=np.float64)
    a = np.asarray(values, dtype=np.float64)
    if w.ndim != 1:
        raise DimensionMismatch(f"weights must be a vector, got shape {w.shape}")
    if a.ndim != 2:
        raise DimensionMismatch(f"values must be an n x m matrix, got shape {a.shape}")
    if a.shape[1] != w.shape[0]:
        raise DimensionMismatch(
            f"values have {a.shape[1]} atoms but {w.shape[0]} weights were given"
        )
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"need n >= 1 and m >= 1, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteValue("values contain NaN or infinity")
    if not np.all(np.isfinite(w)):
        raise NonFiniteValue("weights contain NaN or infinity")
    if np.any(w < 0):
        raise NonProbabilityWeights("weights must be nonnegative")
    total = w.sum()
    if abs(total - 1.0) > WEIGHT_TOL:
        raise NonProbabilityWeights(f"weights sum to {total!r}, not 1")
    keep = w > 0
    w = w[keep]
    if abs(w.sum() - 1.0) > w.size * np.finfo(np.float64).eps:
        w = w / w.sum()
    return PointSet(p, _frozen(w), _frozen(a[:, keep]))


def pth_power_distances(values: np.ndarray, weights: np.ndarray, p: float) -> np.ndarray:
    """Packed ``sum_k weights[k] * |values[i,k] - values[j,k]|**p`` over pairs i < j.

    Weights need not sum to one (ones give l_p^d distances).
    """
    n, m = values.shape
    i, j = pair_index(n)
    out = np.empty(i.shape[0])
    if m == 0:
        out[:] = 0.0
        return out
    step = max(1, _BLOCK // m)
    for lo in range(0, i.shape[0], step):
        hi = min(lo + step, i.shape[0])
        diff = np.abs(values[i[lo:hi]] - values[j[lo:hi]])
        if p != 1.0:
            diff **= p
        out[lo:hi] = diff @ weights
    return out


def distance_matrix(ps: PointSet) -> DistanceMatrix:
    """p-th powers of the pairwise L_p(mu) distances of the point set."""
    return DistanceMatrix.from_packed(ps.n, pth_power_distances(ps.values, ps.weights, ps.p))


def lp_distance_matrix(points, p: float) -> DistanceMatrix:
    """p-th powers of pairwise l_p^d distances between the rows of ``points``."""
    points = np.asarray(points, dtype=np.float64)
    return DistanceMatrix.from_packed(
        points.shape[0], pth_power_distances(points, np.ones(points.shape[1]), p)
    )


def incompressibility(ps: PointSet) -> float:
    """L_p(mu) norm of the pointwise maximum of ``|x_i|``."""
    env = ps.envelope()
    top = env.max()
    if top == 0:
        return 0.0
    return float(top * (ps.weights @ (env / top) ** ps.p) ** (1.0 / ps.p))


def sup_additive_distortion(src: DistanceMatrix, dst: DistanceMatrix) -> float:
    """Largest absolute entrywise difference (the sup-norm distance)."""
    if src.n != dst.n:
        raise DimensionMismatch(f"distance matrices for {src.n} and {dst.n} points")
    if src.packed.size == 0:
        return 0.0
    return float(np.max(np.abs(dst.packed - src.packed)))
