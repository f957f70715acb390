"""Fiducial (confidence) distribution of theta and the decisions built on it.

Given data, theta is distributed as Pareto(n, [theta_ml, theta_mu]).  The
same law arises as ``y_max / V`` with ``V`` drawn from the conditional law of
the normalized maximum given the ancillary ratio ``s2``; both samplers are
provided.
"""

import enum
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import estimators
from ._validation import check_probability
from .pareto import TruncPareto


class LossKind(str, enum.Enum):
    DIRAC = "dirac"
    SQUARED = "squared"
    WEIGHTED = "weighted"
    SCALED_SQUARED = "scaled_squared"
    LOG_SQUARED = "log_squared"

    def __call__(self, theta, estimate):
        """Loss of ``estimate`` when the scale is ``theta``."""
        theta = np.asarray(theta, dtype=float)
        t = np.asarray(estimate, dtype=float)
        if self is LossKind.SQUARED:
            return (t - theta) ** 2
        if self is LossKind.WEIGHTED:
            return (t - theta) ** 2 / theta
        if self is LossKind.SCALED_SQUARED:
            return (1.0 - t / theta) ** 2
        if self is LossKind.LOG_SQUARED:
            return (np.log(t) - np.log(theta)) ** 2
        raise ValueError("the Dirac loss has no pointwise value; use the fiducial density")

    @property
    def theta_power(self):
        """Frequentist risk at theta equals theta**power times the risk at 1."""
        powers = {"squared": 2, "weighted": 1, "scaled_squared": 0, "log_squared": 0}
        if self.value not in powers:
            raise ValueError("the Dirac loss has no frequentist risk")
        return powers[self.value]


@dataclass(frozen=True)
class FiducialDist:
    dist: TruncPareto
    source: object

    def cdf(self, theta):
        return self.dist.cdf(theta)

    def quantile(self, p):
        return self.dist.quantile(p)

    def pdf(self, theta):
        return self.dist.pdf(theta)

    def moment(self, m):
        return self.dist.moment(m)

    def mean(self):
        return self.dist.mean()

    def median(self):
        return self.dist.quantile(0.5)

    def sample(self, rng, size=None):
        return self.dist.sample(rng, size)


def fiducial_dist(s):
    return FiducialDist(TruncPareto(s.design.n, s.theta_ml, s.theta_mu), s)


def conditional_max_law(s):
    """Law of ``y_max/theta`` given ``S2 = s2``: Pareto(-n, [(1-k)/s2, 1+k])."""
    k = s.design.k
    upper = 1.0 + k
    lower = np.minimum((1.0 - k) / np.asarray(s.s2), upper)
    return TruncPareto(-s.design.n, lower, upper)


def fiducial_sample_via_conditioning(s, rng, size=None):
    """Draw ``y_max / V`` with ``V`` from :func:`conditional_max_law`."""
    v = conditional_max_law(s).sample(rng, size)
    return np.asarray(s.y_max) / v


def confidence_interval(s, gamma, kind="equal_tailed"):
    """Fiducial interval with coverage ``1 - gamma``.

    ``kind="hdi"`` returns the highest-density interval, which for this
    decreasing density is ``[theta_ml, quantile(1 - gamma)]``.
    """
    gamma = float(check_probability(gamma, "gamma", open_interval=True))
    fd = fiducial_dist(s)
    if kind == "equal_tailed":
        return fd.quantile(gamma / 2), fd.quantile(1 - gamma / 2)
    if kind == "hdi":
        return s.theta_ml, fd.quantile(1 - gamma)
    raise ValueError(f"unknown interval kind {kind!r}")


_OPTIMAL_RULE = {
    LossKind.DIRAC: estimators.mle,
    LossKind.SQUARED: lambda s: estimators.bayes_p(s, 1),
    LossKind.WEIGHTED: estimators.gm,
    LossKind.SCALED_SQUARED: estimators.opt,
    LossKind.LOG_SQUARED: estimators.sc,
}


def point_estimate(s, loss):
    """Estimate minimizing the fiducial expected ``loss``."""
    return _OPTIMAL_RULE[LossKind(loss)](s)


def _expect(fd, func):
    a, b = float(fd.dist.a), float(fd.dist.b)
    if a == b:
        return float(func(a))
    val, _ = integrate.quad(
        lambda t: func(t) * fd.pdf(t), a, b, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return val


def expected_loss(s, loss, estimates):
    """Fiducial expected loss at each candidate estimate, by direct quadrature.

    The loss is expanded as a quadratic in ``t`` (or ``ln t``) whose
    coefficients are fiducial moments obtained by numerical integration of
    the density, so this path shares no closed forms with the estimators.
    For the Dirac loss the value is minus the fiducial density.
    """
    loss = LossKind(loss)
    fd = fiducial_dist(s)
    t = np.asarray(estimates, dtype=float)
    if loss is LossKind.DIRAC:
        return -fd.pdf(t)
    # each loss is written in vertex form c * (u - u0)**2 + floor so that the
    # location of the minimum does not drown in cancellation
    if loss is LossKind.LOG_SQUARED:
        m1 = _expect(fd, np.log)
        spread = _expect(fd, lambda x: (np.log(x) - m1) ** 2)
        return (np.log(t) - m1) ** 2 + spread
    if loss is LossKind.SQUARED:
        c0, c1, c2 = _expect(fd, lambda x: x * x), _expect(fd, lambda x: x), 1.0
    elif loss is LossKind.WEIGHTED:
        c0, c1, c2 = _expect(fd, lambda x: x), 1.0, _expect(fd, lambda x: 1.0 / x)
    else:
        c0, c1, c2 = 1.0, _expect(fd, lambda x: 1.0 / x), _expect(fd, lambda x: x**-2)
    vertex = c1 / c2
    return c2 * (t - vertex) ** 2 + (c0 - c1 * vertex)


def grid_argmin(s, loss, resolution=1e-6, points=2001):
    """Brute-force minimizer of :func:`expected_loss` over the sure interval.

    A uniform grid is refined around the running minimizer until its spacing
    is below ``resolution``.
    """
    lo, hi = float(s.theta_ml), float(s.theta_mu)
    if lo == hi:
        return lo
    while True:
        grid = np.linspace(lo, hi, points)
        values = expected_loss(s, loss, grid)
        i = int(np.argmin(values))
        step = grid[1] - grid[0]
        if step <= resolution:
            return float(grid[i])
        lo = max(float(s.theta_ml), grid[i] - 2 * step)
        hi = min(float(s.theta_mu), grid[i] + 2 * step)
