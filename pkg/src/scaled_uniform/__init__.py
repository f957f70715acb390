"""Estimation, fiducial inference and risk analysis for the scaled uniform model."""

from ._validation import InfeasibleSampleError
from .base import ScaledUniformScale
from .estimators import (
    Estimator,
    bayes_p,
    catalog,
    conditional_unbiased,
    get_estimator,
    gm,
    linear_unbiased,
    mle,
    opt,
    rao_blackwell,
    sc,
    unbias_factor,
)
from .fiducial import (
    FiducialDist,
    LossKind,
    confidence_interval,
    fiducial_dist,
    fiducial_sample_via_conditioning,
    point_estimate,
)
from .model import (
    Design,
    Sample,
    SuffStat,
    likelihood,
    log_likelihood,
    order_stat_density,
    sample_scaled_uniform,
    suff_stat,
)
from .pareto import TruncPareto

__version__ = "0.1.0"
