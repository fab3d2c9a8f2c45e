"""Pick atoms whose averaged distance matrices approximate the target.

Two selection rules are provided. :func:`random_sample` draws atoms i.i.d.
from the decomposition weights (Maurey's empirical method). :func:`greedy_sample`
is the deterministic variant: at every step it adds the atom that minimizes
the l_q distance of the running average to the target, with
``q = ln C(n, 2)``. On C(n, 2) coordinates that norm is within a factor e of
the sup norm, and l_q is 2-uniformly smooth.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .cone import ConeDecomposition, extreme_rows
from .core import PointSet, num_pairs, pth_power_distances
from .errors import InvalidParameter, RetriesExhausted

# m * C(n, 2) entries above which the greedy table is refused
GREEDY_TABLE_LIMIT = 50_000_000


class Mode(str, enum.Enum):
    RANDOM = "random"
    GREEDY = "greedy"
    ADAPTIVE = "adaptive"


@dataclass
class SamplerConfig:
    mode: Mode = Mode.GREEDY
    epsilon: float = 0.25
    d_override: int | None = None
    q_exponent: float | None = None  # None: smooth_exponent(n) at run time
    seed: int = 0
    max_retries: int = 16
    d_cap: int | None = None  # adaptive mode only; None: worst-case dimension

    def __post_init__(self):
        self.mode = Mode(self.mode)
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise InvalidParameter(f"epsilon must be positive, got {self.epsilon}")
        if self.q_exponent is not None and not self.q_exponent >= 2:
            raise InvalidParameter(f"q_exponent must be >= 2, got {self.q_exponent}")
        if self.d_override is not None and self.d_override < 1:
            raise InvalidParameter(f"d_override must be >= 1, got {self.d_override}")
        if self.max_retries < 0:
            raise InvalidParameter("max_retries must be nonnegative")


@dataclass
class SampleResult:
    chosen_atoms: np.ndarray
    achieved_sup_error: float
    certificate_error: float
    converged: bool = True
    potentials: list = field(default=None, repr=False)

    @property
    def d(self) -> int:
        return int(self.chosen_atoms.shape[0])


def smooth_exponent(n: int) -> float:
    """``max(2, ln C(n, 2))``; 2 when there is at most one pair."""
    pairs = num_pairs(n)
    if pairs <= 1:
        return 2.0
    return max(2.0, math.log(pairs))


def lq_norm(v, q: float, axis=None):
    """l_q norm computed as ``vmax * (sum (|v| / vmax)**q)**(1/q)``."""
    a = np.abs(np.asarray(v, dtype=np.float64))
    vmax = a.max(axis=axis, keepdims=True) if a.size else np.zeros((1,) * a.ndim)
    safe = np.where(vmax > 0, vmax, 1.0)
    s = np.sum((a / safe) ** q, axis=axis, keepdims=True)
    out = np.where(vmax > 0, vmax * s ** (1.0 / q), 0.0)
    if axis is None:
        return float(out.reshape(()))
    return np.squeeze(out, axis=axis)


def dimension_bound(p: float, K: float, n: float, epsilon: float) -> float:
    """Real-valued worst-case dimension ``32 e^2 (2K)^(2p) ln n / eps^2``."""
    if not p >= 1:
        raise InvalidParameter(f"p must be >= 1, got {p}")
    if not K > 0:
        raise InvalidParameter(f"K must be positive, got {K}")
    if not n >= 2:
        raise InvalidParameter(f"n must be >= 2, got {n}")
    if not epsilon > 0:
        raise InvalidParameter(f"epsilon must be positive, got {epsilon}")
    try:
        return 32 * math.e**2 * (2 * K) ** (2 * p) * math.log(n) / epsilon**2
    except OverflowError:
        return math.inf


def required_dimension(p: float, K: float, n: float, epsilon: float) -> int:
    """:func:`dimension_bound` rounded up, at least 1."""
    val = dimension_bound(p, K, n, epsilon)
    if not math.isfinite(val):
        raise InvalidParameter("dimension bound overflows")
    return max(1, math.ceil(val))


def certificate(radius_R: float, q: float, d: int) -> float:
    """A priori bound ``4 R T / sqrt(d)`` with type-2 constant ``T = e sqrt(q - 1)``."""
    return 4 * radius_R * math.e * math.sqrt(q - 1) / math.sqrt(d)


def _check_d(d):
    if d < 1:
        raise InvalidParameter(f"d must be >= 1, got {d}")
    return int(d)


def empirical_mean(ps: PointSet, atoms) -> np.ndarray:
    """Packed average of the atom matrices of ``atoms`` (with multiplicity)."""
    atoms = np.asarray(atoms)
    counts = np.bincount(atoms, minlength=ps.m)
    used = np.flatnonzero(counts)
    return pth_power_distances(ps.values[:, used], counts[used] / atoms.size, ps.p)


def _sup_error(mean: np.ndarray, target: np.ndarray) -> float:
    return float(np.max(np.abs(mean - target))) if target.size else 0.0


def random_sample(
    dec: ConeDecomposition,
    ps: PointSet,
    d: int,
    seed: int = 0,
    max_retries: int = 16,
    epsilon: float | None = None,
) -> SampleResult:
    """Draw ``d`` atoms i.i.d. with probabilities ``dec.lam``.

    Without ``epsilon`` a single draw is returned. With it, up to
    ``max_retries`` redraws are made until the sup error is at most
    ``epsilon``; failing that, :class:`RetriesExhausted` carries the best draw.
    """
    d = _check_d(d)
    rng = np.random.default_rng(seed)
    target = dec.target.packed
    cert = certificate(dec.radius_R, smooth_exponent(ps.n), d)
    attempts = 1 if epsilon is None else 1 + max_retries
    best = None
    for _ in range(attempts):
        atoms = rng.choice(dec.atom_count, size=d, p=dec.lam)
        err = _sup_error(empirical_mean(ps, atoms), target)
        if best is None or err < best.achieved_sup_error:
            best = SampleResult(atoms, err, cert)
        if epsilon is not None and err <= epsilon:
            return best
    if epsilon is None:
        return best
    best.converged = False
    raise RetriesExhausted(
        f"no draw reached error {epsilon} in {attempts} attempts "
        f"(best {best.achieved_sup_error:.6g})",
        best=best,
    )


class GreedySampler:
    """Incremental greedy selection; ``advance`` can be called repeatedly.

    The choice at step ``s`` depends only on the running sum, so the atoms
    chosen for ``d`` steps are a prefix of those for any larger ``d``.
    """

    def __init__(self, dec: ConeDecomposition, ps: PointSet, q: float | None = None,
                 check: bool = False):
        m, pairs = ps.m, num_pairs(ps.n)
        if m * max(pairs, 1) > GREEDY_TABLE_LIMIT:
            raise InvalidParameter(
                f"greedy table of {m} atoms x {pairs} pairs exceeds {GREEDY_TABLE_LIMIT}"
            )
        self.q = smooth_exponent(ps.n) if q is None else float(q)
        if self.q < 2:
            raise InvalidParameter(f"q must be >= 2, got {self.q}")
        self.table = extreme_rows(ps)
        self.target = np.ascontiguousarray(dec.target.packed)
        self.radius = float(self.table.max()) if self.table.size else 0.0
        self.cert_radius = dec.radius_R
        self.total = np.zeros(pairs)
        self.steps = 0
        self.check = check
        self.potentials = [] if check else None
        self._chosen = []
        self._buf = np.empty_like(self.table)
        self._scores = np.empty(m)

    def _step(self) -> int:
        table, buf = self.table, self._buf
        if table.shape[1] == 0:
            return 0
        s = self.steps
        # (s+1) * (average with atom k - target) = resid + table[k]
        resid = self.total - (s + 1.0) * self.target
        scale = float(np.abs(resid).max()) + self.radius
        if scale == 0.0:
            scale = 1.0
        np.add(resid, table, out=buf)
        np.abs(buf, out=buf)
        buf *= 1.0 / scale
        np.power(buf, self.q, out=buf)
        buf.sum(axis=1, out=self._scores)
        k = int(np.argmin(self._scores))  # first minimum: smallest index wins ties
        if self.check:
            self._check_step(k)
        return k

    def _check_step(self, k: int):
        phi = lq_norm((self.total + self.table) / (self.steps + 1) - self.target,
                      self.q, axis=1)
        self.potentials.append(float(phi[k]))
        assert phi[k] <= phi.min() * (1 + 1e-9) + 1e-300, (k, phi[k], phi.min())

    def advance(self, count: int):
        chosen = np.empty(count, dtype=np.int64)
        for t in range(count):
            k = self._step()
            chosen[t] = k
            self.total += self.table[k]
            self.steps += 1
        self._chosen.append(chosen)

    def sup_error(self) -> float:
        if self.steps == 0:
            raise InvalidParameter("no atoms chosen yet")
        return _sup_error(self.total / self.steps, self.target)

    def result(self, converged: bool = True) -> SampleResult:
        atoms = np.concatenate(self._chosen) if self._chosen else np.empty(0, np.int64)
        return SampleResult(
            chosen_atoms=atoms,
            achieved_sup_error=self.sup_error(),
            certificate_error=certificate(self.cert_radius, self.q, self.steps),
            converged=converged,
            potentials=self.potentials,
        )


def greedy_sample(dec: ConeDecomposition, ps: PointSet, d: int, q: float | None = None,
                  check: bool = False) -> SampleResult:
    """Deterministic greedy selection of ``d`` atoms (repeats allowed).

    With ``check=True`` every step also recomputes the l_q potential of all
    candidates directly and asserts the chosen one is minimal.
    """
    d = _check_d(d)
    g = GreedySampler(dec, ps, q, check=check)
    g.advance(d)
    return g.result()


def adaptive_sample(dec: ConeDecomposition, ps: PointSet, epsilon: float, d_cap: int,
                    q: float | None = None) -> SampleResult:
    """Greedy with ``d = 1, 2, 4, ...`` until the sup error is at most ``epsilon``.

    Returns the first success. If ``d`` would exceed ``d_cap`` the last
    attempt is returned with ``converged=False``; callers then fall back to
    the exact embedding.
    """
    if not epsilon >= 0:
        raise InvalidParameter(f"epsilon must be nonnegative, got {epsilon}")
    d_cap = _check_d(d_cap)
    g = GreedySampler(dec, ps, q)
    d = 1
    while d <= d_cap:
        g.advance(d - g.steps)
        if g.sup_error() <= epsilon:
            return g.result()
        d *= 2
    return g.result(converged=False)
