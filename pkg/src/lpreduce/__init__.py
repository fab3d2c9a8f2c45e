"""Additive-error dimension reduction of incompressible point sets in L_p.

Typical use::

    from lpreduce import random_ball, reduce, SamplerConfig
    ps = random_ball(n=8, N=64, p=1, seed=0)
    emb = reduce(ps, SamplerConfig(mode="greedy", epsilon=0.5))
"""
from .bound import (
    ModuliPair,
    audit_linear_map,
    bound_report,
    eps_isometric_moduli,
    linear_lower_bound,
)
from .cone import ConeDecomposition, decompose, extreme_matrix, reconstruct
from .core import (
    DistanceMatrix,
    PointSet,
    distance_matrix,
    incompressibility,
    lp_distance_matrix,
    new_point_set,
    sup_additive_distortion,
)
from .embed import Embedding, SelectionOperator, exact_embed, reduce, verify
from .gen import haar_rotate, random_ball, spike_sphere, walsh_set
from .measure import ChangeOfMeasure, change_of_measure
from .sampler import (
    Mode,
    SampleResult,
    SamplerConfig,
    adaptive_sample,
    greedy_sample,
    lq_norm,
    random_sample,
    required_dimension,
    smooth_exponent,
)

__version__ = "0.1.0"
