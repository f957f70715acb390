"""The scaled uniform model U[theta(1-k), theta(1+k)].

Observations are generated as ``y = theta * u`` with ``u`` iid uniform on
``[1-k, 1+k]``.  The pair ``(min y, max y)`` is minimal sufficient, and the
sure interval ``[y_max/(1+k), y_min/(1-k)]`` contains ``theta`` with
probability one.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import (
    InfeasibleSampleError,
    check_k,
    check_n,
    check_observations,
    check_positive,
)

# Relative slack on the feasibility check; absorbs rounding in y = theta*u only.
_FEASIBILITY_RTOL = 1e-12


@dataclass(frozen=True)
class Design:
    """Known spread ``k`` in (0, 1) and sample size ``n``."""

    k: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "k", check_k(self.k))
        object.__setattr__(self, "n", check_n(self.n))

    @property
    def lower(self):
        return 1.0 - self.k

    @property
    def upper(self):
        return 1.0 + self.k


@dataclass(frozen=True)
class Sample:
    design: Design
    values: np.ndarray

    def __post_init__(self):
        values = check_observations(self.values)
        if values.size != self.design.n:
            raise ValueError(
                f"sample has {values.size} values but design.n = {self.design.n}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values, k):
        values = check_observations(values)
        return cls(Design(k, values.size), values)

    def scaled(self, c):
        c = check_positive(c, "c")
        return Sample(self.design, c * self.values)


def _scalarize(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class SuffStat:
    """Minimal sufficient summary ``(y_min, y_max)`` and derived quantities.

    Every field may be a NumPy array of a common shape, in which case the
    object describes a batch of independent samples sharing one design.
    The estimator rules and risk engines rely on that batched form.
    """

    y_min: float
    y_max: float
    theta_ml: float
    theta_mu: float
    s2: float
    b_star: float
    design: Design

    @classmethod
    def from_extremes(cls, y_min, y_max, design):
        y_min = np.asarray(y_min, dtype=float)
        y_max = np.asarray(y_max, dtype=float)
        if np.any(~np.isfinite(y_min) | ~np.isfinite(y_max)):
            raise ValueError("extremes must be finite")
        if np.any(y_min <= 0.0):
            raise ValueError("observations must be strictly positive")
        if np.any(y_min > y_max):
            raise ValueError("y_min must not exceed y_max")
        k = design.k
        theta_ml = y_max / (1.0 + k)
        theta_mu = y_min / (1.0 - k)
        bad = theta_ml > theta_mu * (1.0 + _FEASIBILITY_RTOL)
        if np.any(bad):
            i = np.flatnonzero(np.atleast_1d(bad))[0]
            ml = np.atleast_1d(theta_ml)[i]
            mu = np.atleast_1d(theta_mu)[i]
            raise InfeasibleSampleError(
                "data inconsistent with k={:g}: y_max/(1+k) = {:.10g} exceeds "
                "y_min/(1-k) = {:.10g}".format(k, ml, mu)
            )
        theta_mu = np.maximum(theta_mu, theta_ml)
        return cls(
            y_min=_scalarize(y_min),
            y_max=_scalarize(y_max),
            theta_ml=_scalarize(theta_ml),
            theta_mu=_scalarize(theta_mu),
            s2=_scalarize(y_min / y_max),
            b_star=_scalarize(theta_mu / theta_ml),
            design=design,
        )

    @property
    def log_b_star(self):
        """``ln(theta_mu/theta_ml)``, computed without forming the ratio first."""
        return _scalarize(np.log1p((np.asarray(self.theta_mu) - self.theta_ml) / self.theta_ml))

    @property
    def sure_interval(self):
        return self.theta_ml, self.theta_mu

    def scaled(self, c):
        c = check_positive(c, "c")
        return SuffStat.from_extremes(c * np.asarray(self.y_min), c * np.asarray(self.y_max), self.design)


def suff_stat(sample):
    """Sufficient statistic of a :class:`Sample`.

    Raises
    ------
    InfeasibleSampleError
        If ``y_max/(1+k) > y_min/(1-k)``, i.e. no theta is compatible with the data.
    """
    return SuffStat.from_extremes(sample.values.min(), sample.values.max(), sample.design)


def sample_scaled_uniform(theta, design, rng=None):
    """Draw ``design.n`` observations from U[theta(1-k), theta(1+k)].

    ``rng`` is anything accepted by :func:`numpy.random.default_rng`.
    """
    theta = check_positive(theta, "theta")
    rng = np.random.default_rng(rng)
    u = design.lower + 2.0 * design.k * rng.random(design.n)
    return Sample(design, theta * u)


def sample_extremes(theta, design, size, rng):
    """Draw ``size`` independent samples and return their ``(y_min, y_max)`` arrays.

    Each row is a full sample of ``n`` inverse-transformed uniforms, so the
    result is the same as calling :func:`sample_scaled_uniform` ``size`` times
    on the same stream.
    """
    u = design.lower + 2.0 * design.k * rng.random((size, design.n))
    y = theta * u
    return y.min(axis=1), y.max(axis=1)


def likelihood(theta, s):
    theta = check_positive(theta, "theta")
    n, k = s.design.n, s.design.k
    inside = (s.theta_ml <= theta) & (theta <= s.theta_mu)
    return _scalarize(np.where(inside, (2.0 * k * theta) ** (-n), 0.0))


def log_likelihood(theta, s):
    theta = check_positive(theta, "theta")
    n, k = s.design.n, s.design.k
    inside = (s.theta_ml <= theta) & (theta <= s.theta_mu)
    return _scalarize(np.where(inside, -n * np.log(2.0 * k * theta), -np.inf))


def order_stat_density(u1, un, design):
    """Joint density of (min, max) of ``n >= 2`` iid U[1-k, 1+k] variables."""
    n, k = design.n, design.k
    if n < 2:
        raise ValueError("the joint density of (min, max) needs n >= 2")
    u1 = np.asarray(u1, dtype=float)
    un = np.asarray(un, dtype=float)
    inside = (design.lower <= u1) & (u1 <= un) & (un <= design.upper)
    gap = np.where(inside, un - u1, 0.0)
    dens = n * (n - 1) * gap ** (n - 2) / (2.0 * k) ** n
    return _scalarize(np.where(inside, dens, 0.0))
