"""Point estimators of the scale theta, all functions of the sufficient statistic.

Every rule accepts a :class:`~scaled_uniform.model.SuffStat`, scalar or
batched, and returns an estimate of the same shape.  All rules are scale
equivariant: ``rule(s.scaled(c)) == c * rule(s)``.
"""

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .pareto import pareto_log_moment, pareto_moment


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def mle(s):
    """Maximum likelihood estimate, the lower end of the sure interval."""
    return _out(s.theta_ml)


def rao_blackwell(s):
    """Midpoint ``(y_min + y_max)/2``; unbiased and always feasible."""
    return _out(0.5 * (np.asarray(s.y_min) + np.asarray(s.y_max)))


def linear_coefficients(design):
    """Weights ``(c_minus, c_plus)`` of the minimum-variance linear unbiased rule."""
    n, k = design.n, design.k
    denom = 1.0 + k * k * (n - 1) / (n + 1)
    return 0.5 * (1.0 - k) / denom, 0.5 * (1.0 + k) / denom


def linear_unbiased(s):
    """``c_minus*y_min + c_plus*y_max``.  Unbiased but may leave the sure interval."""
    c_minus, c_plus = linear_coefficients(s.design)
    return _out(c_minus * np.asarray(s.y_min) + c_plus * np.asarray(s.y_max))


def bayes_p(s, p):
    """Posterior mean under the improper prior ``theta**(-p)``.

    The posterior is Pareto(n+p-1, [theta_ml, theta_mu]).  Its mean is taken
    from the general moment functional, which also covers index 1.
    """
    alpha = s.design.n + p - 1
    if alpha == 0:
        raise ValueError(f"p = {p} gives posterior index n+p-1 = 0, which is not supported")
    return pareto_moment(alpha, s.theta_ml, s.theta_mu, 1.0)


def gm(s):
    """Bayes rule for prior ``theta**-2``: unbiased, and optimal for Theta^-1-weighted loss."""
    return bayes_p(s, 2)


def opt(s):
    """Best scale-equivariant rule under squared error (posterior mean for ``p = 3``)."""
    return bayes_p(s, 3)


def opt_moment_ratio(s):
    """``E[Theta^-1]/E[Theta^-2]`` under the fiducial law; equals :func:`opt`."""
    n = s.design.n
    num = pareto_moment(n, s.theta_ml, s.theta_mu, -1.0)
    den = pareto_moment(n, s.theta_ml, s.theta_mu, -2.0)
    return _out(np.asarray(num) / np.asarray(den))


def sc(s):
    """Geometric mean of the fiducial law; optimal for squared log error."""
    return _out(np.exp(pareto_log_moment(s.design.n, s.theta_ml, s.theta_mu)))


def unbias_factor(s2, design):
    """Factor ``phi(s2)`` making ``phi(S2)*y_max`` conditionally unbiased.

    Given the ratio ``S2 = s2``, ``y_max/theta`` follows
    Pareto(-n, [(1-k)/s2, 1+k]); ``phi`` is the reciprocal of its mean.
    """
    s2 = np.asarray(s2, dtype=float)
    lo = (1.0 - design.k) / (1.0 + design.k)
    if np.any(~((s2 >= lo * (1 - 1e-12)) & (s2 <= 1.0))):
        raise ValueError(f"s2 must lie in [{lo:g}, 1], got {s2!r}")
    upper = 1.0 + design.k
    lower = np.minimum((1.0 - design.k) / s2, upper)
    return _out(1.0 / np.asarray(pareto_moment(-design.n, lower, upper, 1.0)))


def conditional_unbiased(s):
    """``phi(S2) * y_max``; coincides with :func:`gm`."""
    return _out(np.asarray(unbias_factor(s.s2, s.design)) * np.asarray(s.y_max))


@dataclass(frozen=True)
class Estimator:
    name: str
    rule: Callable
    feasible_by_construction: bool
    description: str = ""

    def __call__(self, s):
        return self.rule(s)


def _bayes_estimator(p):
    p = float(p)
    label = f"{p:g}"
    return Estimator(
        f"bayes{label}",
        lambda s: bayes_p(s, p),
        True,
        f"posterior mean under prior theta^-{label}",
    )


_BASE = (
    Estimator("mle", mle, True, "maximum likelihood, lower end of the sure interval"),
    Estimator("rb", rao_blackwell, True, "Rao-Blackwellized first observation (midpoint)"),
    Estimator("lv", linear_unbiased, False, "minimum-variance linear unbiased"),
    Estimator("gm", gm, True, "posterior mean under prior theta^-2 (unbiased)"),
    Estimator("opt", opt, True, "optimal equivariant under squared error"),
    Estimator("sc", sc, True, "optimal equivariant under squared log error"),
    Estimator("map", mle, True, "fiducial mode (Dirac loss)"),
)

_BAYES_NAME = re.compile(r"^bayes(-?\d+(?:\.\d+)?)$")


def catalog(bayes_ps=(1,)):
    """Named registry of estimators, with one ``bayes<p>`` entry per requested ``p``."""
    registry = {e.name: e for e in _BASE}
    for p in bayes_ps:
        e = _bayes_estimator(p)
        registry[e.name] = e
    return registry


def get_estimator(name):
    """Look up a catalog rule by name; ``bayes<p>`` builds the rule for any ``p``."""
    registry = catalog()
    if name in registry:
        return registry[name]
    m = _BAYES_NAME.match(name)
    if m:
        return _bayes_estimator(float(m.group(1)))
    raise KeyError(
        f"unknown estimator {name!r}; choose from {', '.join(registry)} or bayes<p>"
    )
