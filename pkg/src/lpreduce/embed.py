"""Low-dimensional points from chosen atoms, plus verification.

The output map is linear: first each atom column is rescaled by the change
of measure (``density**(-1/p)``), then output coordinate ``s`` reads atom
``atoms[s]`` and multiplies by ``scale = d**(-1/p)``. :class:`SelectionOperator`
stores exactly that pair and can be applied to any values on the same atoms.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .cone import decompose
from .core import (
    EXACT_TOL,
    PointSet,
    distance_matrix,
    incompressibility,
    lp_distance_matrix,
    pair_index,
    sup_additive_distortion,
)
from .errors import (
    DimensionMismatch,
    GuaranteeViolated,
    InvalidParameter,
    RetriesExhausted,
)
from .measure import change_of_measure
from .sampler import (
    Mode,
    SampleResult,
    SamplerConfig,
    adaptive_sample,
    greedy_sample,
    random_sample,
    required_dimension,
    smooth_exponent,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SelectionOperator:
    p: float
    density: np.ndarray  # per source atom; only entries at ``atoms`` are used
    atoms: np.ndarray
    scale: float

    def __post_init__(self):
        if self.atoms.size and np.any(self.density[self.atoms] <= 0):
            raise InvalidParameter("selected atoms must have positive density")

    @property
    def d(self) -> int:
        return int(self.atoms.shape[0])

    def coordinate_factors(self) -> np.ndarray:
        return self.scale * self.density[self.atoms] ** (-1.0 / self.p)

    def apply(self, values) -> np.ndarray:
        """Image of the rows of ``values`` (functions on the source atoms)."""
        values = np.asarray(values, dtype=np.float64)
        return values[..., self.atoms] * self.coordinate_factors()

    def as_matrix(self, m: int) -> np.ndarray:
        """Dense ``d x m`` matrix of the operator."""
        mat = np.zeros((self.d, m))
        mat[np.arange(self.d), self.atoms] = self.coordinate_factors()
        return mat


@dataclass(eq=False)
class Embedding:
    p: float
    d: int
    points: np.ndarray
    operator: SelectionOperator
    achieved_epsilon: float
    epsilon: float | None = None
    mode: str = "exact"
    K: float | None = None
    theoretical_d: int | None = None
    fallback: bool = False
    sample: SampleResult | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def eps_outside_unit(self) -> bool:
        """Target error outside (0, 1), where the dimension bound is stated."""
        return self.epsilon is not None and self.epsilon >= 1


def _achieved(ps: PointSet, points: np.ndarray) -> float:
    return sup_additive_distortion(distance_matrix(ps), lp_distance_matrix(points, ps.p))


def _zero_embedding(ps: PointSet, epsilon, mode) -> Embedding:
    op = SelectionOperator(ps.p, np.ones(ps.m), np.zeros(1, dtype=np.int64), 0.0)
    points = op.apply(ps.values)
    return Embedding(ps.p, 1, points, op, _achieved(ps, points), epsilon, mode,
                     K=incompressibility(ps))


def exact_embed(ps: PointSet) -> Embedding:
    """Isometric embedding into l_p^m: ``y_i(k) = w_k**(1/p) * a(i, k)``."""
    op = SelectionOperator(ps.p, 1.0 / ps.weights, np.arange(ps.m), 1.0)
    points = op.apply(ps.values)
    return Embedding(ps.p, ps.m, points, op, _achieved(ps, points), mode="exact",
                     K=incompressibility(ps))


def reduce(ps: PointSet, cfg: SamplerConfig) -> Embedding:
    """Embed ``ps`` into l_p^d with additive error on p-th power distances.

    Runs change of measure, cone decomposition and atom sampling per
    ``cfg.mode``. ``d`` is ``cfg.d_override`` or the worst-case dimension for
    ``K = incompressibility(ps)``.
    """
    if ps.p < 1:
        raise InvalidParameter(f"reduction needs p >= 1, got {ps.p}")
    if ps.n < 2:
        raise InvalidParameter("reduction needs at least two points")
    eps = cfg.epsilon
    mode = cfg.mode.value
    if eps >= 1:
        log.warning("epsilon=%g is outside (0, 1); the dimension bound assumes eps < 1", eps)
    K = incompressibility(ps)
    src = distance_matrix(ps)
    if K == 0 or not np.any(src.packed):
        # all points coincide: the zero map is exact
        return _zero_embedding(ps, eps, mode)

    com, tps = change_of_measure(ps)
    dec = decompose(tps)
    q = cfg.q_exponent if cfg.q_exponent is not None else smooth_exponent(ps.n)
    theoretical = required_dimension(ps.p, K, ps.n, eps)
    d = cfg.d_override if cfg.d_override is not None else theoretical

    def assemble(res: SampleResult) -> Embedding:
        d_out = res.d
        scale = d_out ** (-1.0 / ps.p)
        op = SelectionOperator(ps.p, com.density_on(ps.m),
                               com.source_atoms_kept[res.chosen_atoms], scale)
        points = tps.values[:, res.chosen_atoms] / d_out ** (1.0 / ps.p)
        return Embedding(ps.p, d_out, points, op, _achieved(ps, points), eps, mode,
                         K=K, theoretical_d=theoretical, sample=res)

    if cfg.mode is Mode.RANDOM:
        try:
            res = random_sample(dec, tps, d, cfg.seed, cfg.max_retries, epsilon=eps)
        except RetriesExhausted as exc:
            exc.embedding = assemble(exc.best)
            raise
        return assemble(res)

    if cfg.mode is Mode.ADAPTIVE:
        cap = cfg.d_cap if cfg.d_cap is not None else d
        res = adaptive_sample(dec, tps, eps, cap, q=q)
        if not res.converged:
            emb = exact_embed(ps)
            emb.epsilon, emb.mode, emb.K = eps, mode, K
            emb.theoretical_d, emb.fallback, emb.sample = theoretical, True, res
            return emb
        return assemble(res)

    res = greedy_sample(dec, tps, d, q=q)
    emb = assemble(res)
    if d >= theoretical and emb.achieved_epsilon > eps:
        raise GuaranteeViolated(
            f"greedy error {emb.achieved_epsilon:.6g} exceeds {eps} at d={d}", embedding=emb
        )
    return emb


@dataclass
class VerificationReport:
    max_over_eps: float  # sup over pairs of the additive error
    eps: float
    pairs_violating: int
    pairs: np.ndarray  # structured: i, j, source, embedded, deviation

    @property
    def ok(self) -> bool:
        return self.pairs_violating == 0


def verify(ps: PointSet, emb: Embedding, eps: float | None = None) -> VerificationReport:
    """Recompute both distance matrices and compare them pair by pair.

    ``eps`` defaults to the target recorded in ``emb`` (or, if none, its
    achieved error). A pair violates when its deviation exceeds
    ``eps + 1e-12``.
    """
    if emb.points.shape[0] != ps.n:
        raise DimensionMismatch(f"embedding has {emb.points.shape[0]} points, set has {ps.n}")
    if emb.p != ps.p:
        raise InvalidParameter(f"embedding uses p={emb.p}, point set p={ps.p}")
    if eps is None:
        eps = emb.epsilon if emb.epsilon is not None else emb.achieved_epsilon
    src = distance_matrix(ps)
    dst = lp_distance_matrix(emb.points, ps.p)
    dev = dst.packed - src.packed
    i, j = pair_index(ps.n)
    table = np.zeros(i.shape[0], dtype=[("i", "i8"), ("j", "i8"), ("source", "f8"),
                                         ("embedded", "f8"), ("deviation", "f8")])
    table["i"], table["j"] = i, j
    table["source"], table["embedded"], table["deviation"] = src.packed, dst.packed, dev
    return VerificationReport(
        max_over_eps=sup_additive_distortion(src, dst),
        eps=float(eps),
        pairs_violating=int(np.count_nonzero(np.abs(dev) > eps + EXACT_TOL)),
        pairs=table,
    )


def root_distortion_bound(emb: Embedding) -> float:
    """Bound on the additive error of plain (non-powered) distances: ``eps**(1/p)``."""
    return emb.achieved_epsilon ** (1.0 / emb.p)

