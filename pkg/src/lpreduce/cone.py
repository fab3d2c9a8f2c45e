"""Distance matrix as a convex combination of per-atom distance matrices.

On atom ``k`` every point is constant, so the atom contributes the matrix
``|a(i,k) - a(j,k)|**p``. Weighting these by the atom masses reproduces the
full distance matrix exactly, which is what the sampler approximates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DistanceMatrix, PointSet, distance_matrix, num_pairs, pair_index
from .errors import IndexOutOfRange


@dataclass(frozen=True, eq=False)
class ConeDecomposition:
    target: DistanceMatrix
    atom_count: int
    lam: np.ndarray
    radius_R: float


def atom_radius(ps: PointSet) -> float:
    """``max_k`` of the sup norm of atom ``k``'s distance matrix."""
    spread = ps.values.max(axis=0) - ps.values.min(axis=0)
    return float(spread.max() ** ps.p)


def decompose(ps: PointSet) -> ConeDecomposition:
    return ConeDecomposition(
        target=distance_matrix(ps),
        atom_count=ps.m,
        lam=ps.weights,
        radius_R=atom_radius(ps),
    )


def _check_atom(ps: PointSet, k) -> int:
    if not (0 <= k < ps.m):
        raise IndexOutOfRange(f"atom index {k} outside [0, {ps.m})")
    return int(k)


def extreme_matrix(ps: PointSet, k: int) -> DistanceMatrix:
    """Distance matrix of the points' constant values on atom ``k``."""
    k = _check_atom(ps, k)
    col = ps.values[:, k]
    i, j = pair_index(ps.n)
    return DistanceMatrix.from_packed(ps.n, np.abs(col[i] - col[j]) ** ps.p)


def extreme_rows(ps: PointSet, atoms=None) -> np.ndarray:
    """Packed atom matrices stacked as rows, shape ``(len(atoms), C(n, 2))``."""
    cols = ps.values if atoms is None else ps.values[:, np.asarray(atoms)]
    i, j = pair_index(ps.n)
    rows = np.abs(cols[i] - cols[j]).T
    if ps.p != 1.0:
        rows **= ps.p
    return np.ascontiguousarray(rows)


def reconstruct(dec: ConeDecomposition, ps: PointSet) -> DistanceMatrix:
    """Accumulate ``sum_k lam_k * extreme_matrix(k)`` one atom at a time."""
    acc = np.zeros(num_pairs(ps.n))
    for k in range(dec.atom_count):
        acc += dec.lam[k] * extreme_matrix(ps, k).packed
    return DistanceMatrix.from_packed(ps.n, acc)
