"""Truncated Pareto laws with density proportional to theta**(-alpha-1) on [a, b].

The index ``alpha`` may be negative; ``alpha = -n`` gives the conditional
law of the sample maximum given the ancillary ratio.  All functionals are
written in terms of ``L = ln(b/a)`` and the relative exponential
``exprel(x) = (exp(x) - 1)/x`` so that nothing cancels when ``alpha*L`` is
small and nothing overflows when it is large.  ``a == b`` is a point mass.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import exprel

from ._validation import check_probability


def _log_exprel(x):
    """``log((exp(x) - 1)/x)`` for any real ``x`` (value 0 at ``x = 0``)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        small = np.log(exprel(x))
        pos = x + np.log(-np.expm1(-x)) - np.log(x)
        neg = np.log(-np.expm1(x)) - np.log(-x)
    return np.where(np.abs(x) <= 1.0, small, np.where(x > 0.0, pos, neg))


def _half_minus(x):
    """``1/x - 1/expm1(x)``; equals 1/2 at 0 and decreases monotonically."""
    x = np.asarray(x, dtype=float)
    # Bernoulli series; truncation error below 1e-17 for |x| < 0.1.
    x2 = x * x
    series = 0.5 - x / 12.0 + x * x2 / 720.0 - x * x2 * x2 / 30240.0 + x * x2**3 / 1209600.0
    safe = np.where(np.abs(x) < 0.1, 1.0, x)
    with np.errstate(over="ignore"):
        direct = 1.0 / safe - 1.0 / np.expm1(safe)
    return np.where(np.abs(x) < 0.1, series, direct)


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _log_span(a, b):
    """``ln(b/a)`` without the cancellation of ``log(b) - log(a)`` when b is close to a."""
    a = np.asarray(a, dtype=float)
    return np.log1p((np.asarray(b, dtype=float) - a) / a)


def pareto_moment(alpha, a, b, m):
    """E[Theta**m]; continuous in ``m`` through ``m == alpha``."""
    L = _log_span(a, b)
    log_val = m * np.log(a) + _log_exprel((m - alpha) * L) - _log_exprel(-alpha * L)
    return _out(np.exp(log_val))


def pareto_log_moment(alpha, a, b):
    """E[ln Theta] = ln a + 1/alpha - L/(exp(alpha*L) - 1)."""
    L = _log_span(a, b)
    return _out(np.log(a) + L * _half_minus(alpha * L))


def pareto_cdf(alpha, a, b, theta):
    """``expm1(-alpha*l)/expm1(-alpha*L)`` with ``l = ln(theta/a)``.

    The plain ratio is monotone in ``theta`` in floating point; the rescaled
    form is used only where ``expm1`` would overflow.
    """
    a = np.asarray(a, dtype=float)
    theta = np.asarray(theta, dtype=float)
    L = _log_span(a, b)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        l = np.clip(_log_span(a, np.maximum(theta, a)), 0.0, L)
        x, y = -alpha * l, -alpha * L
        plain = np.expm1(x) / np.expm1(y)
        rescaled = np.exp(x - y) * np.expm1(-x) / np.expm1(-y)
        val = np.where(y > 700.0, rescaled, plain)
    val = np.where(theta >= b, 1.0, val)
    val = np.where(theta < a, 0.0, val)
    return _out(np.clip(val, 0.0, 1.0))


def _log1p_p_expm1(p, y):
    """``log(1 + p*expm1(y))`` for p in [0, 1], without cancellation or overflow."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        direct = np.log1p(p * np.expm1(np.minimum(y, 1.0)))
        # y < 0, p > 1/2: e^y + (1-p)(1-e^y) is a sum of positive terms
        upper = np.logaddexp(y, np.log1p(-p) + np.log(-np.expm1(np.minimum(y, 0.0))))
        # y > 1: (1-p) + p e^y, kept in log space
        large = np.logaddexp(np.log1p(-p), np.log(p) + y)
    return np.where(y > 1.0, large, np.where((y < 0.0) & (p > 0.5), upper, direct))


def pareto_quantile(alpha, a, b, p):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = np.asarray(p, dtype=float)
    L = _log_span(a, b)
    log_r = -_log1p_p_expm1(p, -alpha * L) / alpha
    theta = np.clip(a * np.exp(log_r), a, b)
    theta = np.where(p <= 0.0, a, np.where(p >= 1.0, b, theta))
    return _out(theta)


def pareto_pdf(alpha, a, b, theta):
    a = np.asarray(a, dtype=float)
    theta = np.asarray(theta, dtype=float)
    L = _log_span(a, b)
    inside = (a <= theta) & (theta <= b)
    with np.errstate(divide="ignore", invalid="ignore"):
        l = _log_span(a, np.where(inside, theta, a))
        val = np.exp((-alpha - 1.0) * l - _log_exprel(-alpha * L)) / (a * L)
    val = np.where(L > 0.0, val, np.inf)
    return _out(np.where(inside, val, 0.0))


@dataclass(frozen=True)
class TruncPareto:
    """Pareto(alpha, [a, b]) with real nonzero index ``alpha`` and ``0 < a <= b``.

    ``a`` and ``b`` may be arrays of a common shape (a batch of laws).
    """

    alpha: float
    a: float
    b: float

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha == 0:
            raise ValueError(f"alpha must be finite and nonzero, got {self.alpha!r}")
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if np.any(~(a > 0.0)) or np.any(~(b >= a)) or np.any(~np.isfinite(b)):
            raise ValueError("require 0 < a <= b < inf")

    @property
    def is_point_mass(self):
        return bool(np.all(np.asarray(self.a) == np.asarray(self.b)))

    def pdf(self, theta):
        return pareto_pdf(self.alpha, self.a, self.b, theta)

    def cdf(self, theta):
        return pareto_cdf(self.alpha, self.a, self.b, theta)

    def quantile(self, p):
        p = check_probability(p)
        return pareto_quantile(self.alpha, self.a, self.b, p)

    ppf = quantile

    def moment(self, m):
        return pareto_moment(self.alpha, self.a, self.b, m)

    def mean(self):
        return self.moment(1.0)

    def log_moment(self):
        return pareto_log_moment(self.alpha, self.a, self.b)

    def sample(self, rng, size=None):
        """Inverse-transform draws; ``rng`` is a :class:`numpy.random.Generator`."""
        u = rng.random(size)
        return pareto_quantile(self.alpha, self.a, self.b, u)

    def scaled(self, c):
        return TruncPareto(self.alpha, c * np.asarray(self.a), c * np.asarray(self.b))

    def reciprocal(self, y):
        """Law of ``y/Theta``: Pareto(-alpha, [y/b, y/a])."""
        return TruncPareto(-self.alpha, y / np.asarray(self.b), y / np.asarray(self.a))
