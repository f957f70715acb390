"""Independent reference computations used by the tests.

Nothing here calls the closed forms under test: expectations come from
adaptive quadrature (scipy or mpmath) of the defining densities.
"""

import math

import mpmath as mp
import numpy as np
from scipy import integrate


def pareto_density(alpha, a, b):
    """Unnormalized density theta**(-alpha-1) and its numeric normalizer."""
    z = mp.quad(lambda t: t ** (-alpha - 1), [a, b])
    return lambda t: t ** (-alpha - 1) / z


def pareto_expect(alpha, a, b, g, dps=30):
    with mp.workdps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        f = pareto_density(alpha, a, b)
        return float(mp.quad(lambda t: g(t) * f(t), [a, b]))


def pareto_moment_quad(alpha, a, b, m):
    return pareto_expect(alpha, a, b, lambda t: t**m)


def pareto_log_moment_quad(alpha, a, b):
    return pareto_expect(alpha, a, b, mp.log)


def bayes_p_closed_form(theta_ml, b_star, n, p):
    """Posterior mean as a literal ratio of powers; valid for index != 1."""
    alpha = n + p - 1
    return alpha / (alpha - 1) * (1 - b_star ** (1 - alpha)) / (1 - b_star ** (-alpha)) * theta_ml


def triangle_expectation(g, n, k, eps=1e-12):
    """E[g(U_(1), U_(n))] for n >= 2 iid U[1-k, 1+k] by scipy.dblquad."""
    c = n * (n - 1) / (2 * k) ** n
    val, err = integrate.dblquad(
        lambda un, u1: c * (un - u1) ** (n - 2) * g(u1, un),
        1 - k, 1 + k,
        lambda u1: u1, lambda u1: 1 + k,
        epsabs=eps, epsrel=eps,
    )
    return val


def expected_max(n, k):
    """E U_(n) for n iid U[1-k, 1+k]."""
    return 1 - k + 2 * k * n / (n + 1)


def midrange_variance(n, k):
    """Var((U_(1)+U_(n))/2) for n iid U[1-k, 1+k]."""
    return (2 * k) ** 2 / (2 * (n + 1) * (n + 2))


def ks_critical_1pct(m):
    """Asymptotic one-sample KS critical value at the 1% level."""
    return 1.628 / math.sqrt(m)


def binomial_se(p, reps):
    return math.sqrt(p * (1 - p) / reps)


def feasible_stats(rng, size, design):
    """Random (y_min, y_max) pairs from the model at random scales."""
    theta = 10.0 ** rng.uniform(-2, 2, size)
    u = design.lower + 2 * design.k * rng.random((size, design.n))
    y = theta[:, None] * u
    return y.min(axis=1), y.max(axis=1)


__all__ = [name for name in dir() if not name.startswith("_")] + ["np"]
