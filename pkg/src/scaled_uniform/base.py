"""scikit-learn compatible front end."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import estimators as est
from ._validation import check_k, check_observations
from .fiducial import confidence_interval, fiducial_dist
from .model import Design, SuffStat, log_likelihood


class ScaledUniformScale(BaseEstimator):
    """Estimate theta from observations of U[theta(1-k), theta(1+k)].

    Parameters
    ----------
    k : float
        Known relative half-width of the support, in (0, 1).
    estimator : str
        Catalog name of the point estimator (``"opt"``, ``"sc"``, ``"gm"``,
        ``"rb"``, ``"lv"``, ``"mle"``, ``"map"`` or ``"bayes<p>"``).
    gamma : float
        Miss probability of the stored fiducial interval.

    Attributes
    ----------
    theta_ : float
    suff_stat_ : SuffStat
    fiducial_ : FiducialDist
    sure_interval_ : tuple of float
    interval_ : tuple of float
        Equal-tailed fiducial interval with coverage ``1 - gamma``.
    n_samples_ : int
    """

    def __init__(self, k=0.5, estimator="opt", gamma=0.05):
        self.k = k
        self.estimator = estimator
        self.gamma = gamma

    def fit(self, X, y=None):
        k = check_k(self.k)
        rule = est.get_estimator(self.estimator)
        values = check_observations(X)
        design = Design(k=k, n=values.size)
        s = SuffStat.from_extremes(values.min(), values.max(), design)
        self.suff_stat_ = s
        self.n_samples_ = values.size
        self.theta_ = float(rule(s))
        self.fiducial_ = fiducial_dist(s)
        self.sure_interval_ = (s.theta_ml, s.theta_mu)
        self.interval_ = confidence_interval(s, self.gamma)
        return self

    def predict(self, X=None):
        """Return the fitted theta, broadcast to ``len(X)`` when ``X`` is given."""
        check_is_fitted(self, "theta_")
        if X is None:
            return self.theta_
        return np.full(len(X), self.theta_)

    def interval(self, gamma=None, kind="equal_tailed"):
        check_is_fitted(self, "theta_")
        return confidence_interval(self.suff_stat_, self.gamma if gamma is None else gamma, kind)

    def score(self, X, y=None):
        """Log-likelihood of ``X`` at the fitted theta (``-inf`` if outside the support)."""
        check_is_fitted(self, "theta_")
        values = check_observations(X)
        design = Design(k=check_k(self.k), n=values.size)
        lo, hi = values.min(), values.max()
        inside = lo >= self.theta_ * design.lower and hi <= self.theta_ * design.upper
        if not inside:
            return -np.inf
        s = SuffStat.from_extremes(lo, hi, design)
        return log_likelihood(self.theta_, s)
