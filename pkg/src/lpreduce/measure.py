"""Change of measure turning an L_p-bounded envelope into an L_inf-bounded one.

With ``M_k = max_i |a(i, k)|`` and ``Z = sum_k w_k M_k**p``, the new measure
has density ``f_k = M_k**p / Z`` and each point is multiplied by ``f**(-1/p)``.
That map is a linear isometry of L_p, and afterwards every value is bounded
by ``Z**(1/p)``, which is the incompressibility of the original set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PointSet, new_point_set
from .errors import AllZeroPoints


@dataclass(frozen=True, eq=False)
class ChangeOfMeasure:
    p: float
    source_atoms_kept: np.ndarray  # original atom index of each kept atom
    density: np.ndarray
    new_weights: np.ndarray
    scale_Z: float

    @property
    def column_scale(self) -> np.ndarray:
        """Multiplier ``f**(-1/p)`` applied to each kept atom."""
        return self.density ** (-1.0 / self.p)

    def density_on(self, m: int) -> np.ndarray:
        """Density spread back over all ``m`` original atoms (zero off support)."""
        full = np.zeros(m)
        full[self.source_atoms_kept] = self.density
        return full


def change_of_measure(ps: PointSet) -> tuple[ChangeOfMeasure, PointSet]:
    """Reweight ``ps`` so its values are bounded by its incompressibility.

    Atoms where every point vanishes are dropped. Raises
    :class:`AllZeroPoints` when nothing is left.
    """
    p = ps.p
    env = ps.envelope()
    top = env.max()
    if top == 0:
        raise AllZeroPoints("every point is the zero function")
    # factor out the largest envelope value so M_k**p cannot under/overflow
    rel_p = (env / top) ** p
    S = float(ps.weights @ rel_p)
    density = rel_p / S
    # atoms whose new mass underflows carry no measurable distance either
    kept = np.flatnonzero(ps.weights * density > 0)
    density = density[kept]
    Z = top**p * S
    out = new_point_set(
        p,
        ps.weights[kept] * density,
        ps.values[:, kept] * (top * S ** (1.0 / p) / env[kept]),
    )
    com = ChangeOfMeasure(
        p=p,
        source_atoms_kept=kept,
        density=density,
        new_weights=out.weights,
        scale_Z=Z,
    )
    return com, out
