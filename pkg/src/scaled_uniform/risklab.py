"""Frequentist evaluation: exact quadrature and Monte Carlo risk, coverage studies.

Quadrature works at theta = 1 in coordinates ``(range, offset)`` of the
normalized order statistics ``x = (u1 - (1-k))/(2k)``, ``z = x + w``.  The
joint density ``n(n-1) w^(n-2)`` is absorbed into a Gauss-Jacobi rule in
``w`` and the offset ``x in [0, 1-w]`` gets a Gauss-Legendre rule.  Every
catalog rule is analytic in ``(u1, un)`` on the feasible triangle, so the
tensor rule converges geometrically; the order is doubled until successive
values agree to the requested tolerance.

Monte Carlo splits replications into fixed blocks of ``BLOCK_SIZE``; block
``i`` draws from a Philox stream keyed by ``(seed, i)``, and block summaries
are merged in block order.  Results therefore do not depend on how many
workers ran the blocks.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from . import estimators as est
from .fiducial import LossKind, fiducial_dist
from .model import Design, SuffStat, sample_extremes
from .pareto import pareto_cdf, pareto_quantile

BLOCK_SIZE = 8192
QUAD_TOL = 1e-8
MIN_REPS = 1000
_MIN_ORDER = 16
_MAX_ORDER = 1024

DEFAULT_NS = (2, 3, 5, 10, 30)
DEFAULT_KS = (0.1, 0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class RiskReport:
    estimator: str
    n: int
    k: float
    theta: float
    loss: str
    value: float
    stderr: float
    method: str
    reps: int | None = None
    tol: float | None = None
    seed: int | None = None


@dataclass(frozen=True)
class CoverageReport:
    gamma: float
    theta: float
    n: int
    k: float
    reps: int
    hits: int
    seed: int | None = None
    kind: str = "equal_tailed"

    @property
    def coverage(self):
        return self.hits / self.reps

    @property
    def stderr(self):
        c = self.coverage
        return math.sqrt(c * (1.0 - c) / self.reps)


@dataclass
class ExperimentGrid:
    designs: list = field(default_factory=lambda: [(n, k) for n in DEFAULT_NS for k in DEFAULT_KS])
    thetas: list = field(default_factory=lambda: [1.0])
    losses: list = field(default_factory=lambda: [LossKind.SQUARED])
    estimators: list = field(default_factory=lambda: ["mle", "rb", "lv", "gm", "opt", "sc", "bayes1"])
    reps: int = 100_000
    seed: int = 0

    def __post_init__(self):
        self.designs = [(d.n, d.k) for d in (Design(k=k, n=n) for n, k in self.designs)]
        self.losses = [LossKind(loss) for loss in self.losses]
        for name in self.estimators:
            est.get_estimator(name)


def _resolve(estimator):
    return est.get_estimator(estimator) if isinstance(estimator, str) else estimator


# -- quadrature -------------------------------------------------------------


@lru_cache(maxsize=256)
def _nodes(n, k, order):
    """Nodes ``(u1, un)`` and weights for E[g(U_(1), U_(n))] at theta = 1."""
    if n == 1:
        x, w = roots_legendre(order)
        u = 1.0 + k * x
        return u, u, w / 2.0
    xj, wj = roots_jacobi(order, 0.0, n - 2.0)
    r = (xj + 1.0) / 2.0
    wr = wj / 2.0 ** (n - 1)
    xl, wl = roots_legendre(order)
    t = (xl + 1.0) / 2.0
    R = r[:, None]
    X = t[None, :] * (1.0 - R)
    W = n * (n - 1) * wr[:, None] * (wl / 2.0)[None, :] * (1.0 - R)
    u1 = (1.0 - k) + 2.0 * k * X
    un = (1.0 - k) + 2.0 * k * (X + R)
    return u1.ravel(), un.ravel(), W.ravel()


def quad_expectation(func, design, tol=QUAD_TOL):
    """``E[func(S)]`` at theta = 1 and an error estimate.

    ``func`` receives a batched :class:`SuffStat` and returns an array of the
    same length (or a 2-D array with one column per output).
    """
    prev = None
    order = _MIN_ORDER
    while True:
        u1, un, w = _nodes(design.n, design.k, order)
        s = SuffStat.from_extremes(u1, un, design)
        vals = np.asarray(func(s), dtype=float)
        cur = np.tensordot(w, vals, axes=(0, 0))
        if prev is not None:
            err = float(np.max(np.abs(cur - prev)))
            if err <= tol or order >= _MAX_ORDER:
                return cur, err
        prev = cur
        order *= 2


def quad_risks(estimators, design, loss, theta=1.0, tol=QUAD_TOL):
    """Exact risks of several estimators, scaled to ``theta`` by the loss's power law."""
    loss = LossKind(loss)
    rules = [_resolve(e) for e in estimators]
    scale = theta ** loss.theta_power

    def losses(s):
        return np.stack([loss(1.0, e(s)) for e in rules], axis=-1)

    values, err = quad_expectation(losses, design, tol)
    return {
        e.name: RiskReport(
            e.name, design.n, design.k, float(theta), loss.value,
            float(scale * v), float(scale * err), "quad", tol=tol,
        )
        for e, v in zip(rules, np.atleast_1d(values))
    }


def quad_risk(estimator, design, loss, theta=1.0, tol=QUAD_TOL):
    e = _resolve(estimator)
    return quad_risks([e], design, loss, theta, tol)[e.name]


def quad_mean(estimator, design, tol=QUAD_TOL):
    e = _resolve(estimator)
    value, _ = quad_expectation(e, design, tol)
    return float(value)


def quad_bias(estimator, design, tol=QUAD_TOL):
    """``E[psi(S)] - 1`` at theta = 1."""
    return quad_mean(estimator, design, tol) - 1.0


def quad_variance(estimator, design, tol=QUAD_TOL):
    e = _resolve(estimator)
    mu = quad_mean(e, design, tol)
    value, _ = quad_expectation(lambda s: (np.asarray(e(s)) - mu) ** 2, design, tol)
    return float(value)


# -- Monte Carlo ------------------------------------------------------------


def block_rng(seed, block):
    """Independent counter-based stream for replication block ``block``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _blocks(reps):
    full, rest = divmod(reps, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _run_blocks(fn, reps, workers):
    sizes = _blocks(reps)
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(sizes) == 1:
        return [fn(i, m) for i, m in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(len(sizes)), sizes))


def _merge(parts):
    """Chan's pairwise update of (count, mean, centered cross-products), in order."""
    count, mean, m2 = parts[0]
    for c, mu, s in parts[1:]:
        total = count + c
        delta = mu - mean
        mean = mean + delta * (c / total)
        m2 = m2 + s + np.outer(delta, delta) * (count * c / total)
        count = total
    return count, mean, m2


@dataclass(frozen=True)
class MCResult:
    names: tuple
    reps: int
    mean: np.ndarray
    cov: np.ndarray
    theta: float
    design: Design
    loss: LossKind
    seed: int

    def report(self, name):
        i = self.names.index(name)
        return RiskReport(
            name, self.design.n, self.design.k, self.theta, self.loss.value,
            float(self.mean[i]), float(math.sqrt(self.cov[i, i] / self.reps)),
            "mc", reps=self.reps, seed=self.seed,
        )

    def paired_diff(self, a, b):
        """Risk difference ``a - b`` and its standard error under common random numbers."""
        i, j = self.names.index(a), self.names.index(b)
        var = self.cov[i, i] + self.cov[j, j] - 2.0 * self.cov[i, j]
        return float(self.mean[i] - self.mean[j]), float(math.sqrt(max(var, 0.0) / self.reps))


def mc_risks(estimators, theta, design, loss, reps, seed, workers=None):
    """Monte Carlo risks of several estimators on common simulated samples."""
    loss = LossKind(loss)
    if loss is LossKind.DIRAC:
        raise ValueError("Monte Carlo risk is undefined for the Dirac loss")
    if reps < MIN_REPS:
        raise ValueError(f"reps must be at least {MIN_REPS}, got {reps}")
    rules = [_resolve(e) for e in estimators]

    def block(i, size):
        rng = block_rng(seed, i)
        y_min, y_max = sample_extremes(theta, design, size, rng)
        s = SuffStat.from_extremes(y_min, y_max, design)
        L = np.stack([loss(theta, e(s)) for e in rules], axis=1)
        mu = L.mean(axis=0)
        centered = L - mu
        return size, mu, centered.T @ centered

    count, mean, m2 = _merge(_run_blocks(block, reps, workers))
    return MCResult(
        tuple(e.name for e in rules), count, mean, m2 / (count - 1),
        float(theta), design, loss, seed,
    )


def mc_risk(estimator, theta, design, loss, reps, seed, workers=None):
    e = _resolve(estimator)
    return mc_risks([e], theta, design, loss, reps, seed, workers).report(e.name)


def coverage(gamma, theta, design, reps, seed, workers=None, kind="equal_tailed"):
    """Fraction of simulated fiducial intervals (coverage ``1 - gamma``) containing ``theta``.

    ``gamma = 0`` gives the sure interval itself.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma!r}")
    if reps < MIN_REPS:
        raise ValueError(f"reps must be at least {MIN_REPS}, got {reps}")
    if kind == "equal_tailed":
        p_lo, p_hi = gamma / 2.0, 1.0 - gamma / 2.0
    elif kind == "hdi":
        p_lo, p_hi = 0.0, 1.0 - gamma
    else:
        raise ValueError(f"unknown interval kind {kind!r}")
    n = design.n

    def block(i, size):
        y_min, y_max = sample_extremes(theta, design, size, block_rng(seed, i))
        s = SuffStat.from_extremes(y_min, y_max, design)
        lo = pareto_quantile(n, s.theta_ml, s.theta_mu, p_lo)
        hi = pareto_quantile(n, s.theta_ml, s.theta_mu, p_hi)
        return int(np.count_nonzero((lo <= theta) & (theta <= hi)))

    hits = sum(_run_blocks(block, reps, workers))
    return CoverageReport(float(gamma), float(theta), n, design.k, reps, hits, seed, kind)


def pit_values(theta, design, reps, seed, workers=None):
    """Fiducial CDF evaluated at the true theta, one value per simulated data set."""

    def block(i, size):
        y_min, y_max = sample_extremes(theta, design, size, block_rng(seed, i))
        s = SuffStat.from_extremes(y_min, y_max, design)
        return pareto_cdf(design.n, s.theta_ml, s.theta_mu, theta)

    return np.concatenate(_run_blocks(block, reps, workers))


# -- comparisons ------------------------------------------------------------


@dataclass
class DominanceTable:
    method: str
    risks: list
    pairs: list

    def risk(self, n, k, loss, estimator):
        for r in self.risks:
            if (r.n, r.k, r.loss, r.estimator) == (n, k, LossKind(loss).value, estimator):
                return r
        raise KeyError((n, k, loss, estimator))


def dominance_table(grid, method="quad", workers=None):
    """Risks at theta = 1 for every (n, k, loss) cell plus pairwise differences.

    A difference is flagged significant when it exceeds three standard errors
    (MC, paired under common random numbers) or twice the combined quadrature
    error bound.
    """
    risks, pairs = [], []
    names = list(grid.estimators)
    for n, k in grid.designs:
        design = Design(k=k, n=n)
        for loss in grid.losses:
            if method == "quad":
                reports = quad_risks(names, design, loss)
                for a, b in combinations(names, 2):
                    ra, rb = reports[a], reports[b]
                    diff = ra.value - rb.value
                    err = ra.stderr + rb.stderr + QUAD_TOL
                    pairs.append(dict(n=n, k=k, loss=loss.value, a=a, b=b, diff=diff,
                                      err=err, significant=abs(diff) > 2 * err))
            elif method == "mc":
                res = mc_risks(names, 1.0, design, loss, grid.reps, grid.seed, workers)
                reports = {name: res.report(name) for name in names}
                for a, b in combinations(names, 2):
                    diff, se = res.paired_diff(a, b)
                    pairs.append(dict(n=n, k=k, loss=loss.value, a=a, b=b, diff=diff,
                                      err=se, significant=abs(diff) > 3 * se))
            else:
                raise ValueError(f"unknown method {method!r}")
            risks.extend(reports[name] for name in names)
    return DominanceTable(method, risks, pairs)


@dataclass(frozen=True)
class AuditReport:
    estimator: str
    trials: int
    max_rel_error: float
    rtol: float

    @property
    def passed(self):
        return self.max_rel_error <= self.rtol

    def __bool__(self):
        return self.passed


def equivariance_audit(estimator, trials=200, seed=0, rtol=1e-12, log10_c=(-6.0, 6.0)):
    """Check ``psi(c*y) == c*psi(y)`` on random samples, designs and factors ``c``."""
    e = _resolve(estimator)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        design = Design(k=float(rng.uniform(0.02, 0.98)), n=int(rng.integers(1, 40)))
        theta = float(10.0 ** rng.uniform(-3, 3))
        y_min, y_max = sample_extremes(theta, design, 1, rng)
        s = SuffStat.from_extremes(y_min[0], y_max[0], design)
        c = float(10.0 ** rng.uniform(*log10_c))
        lhs = e(s.scaled(c))
        rhs = c * e(s)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return AuditReport(e.name, trials, worst, rtol)


def fiducial_mean_check(s, rng, size):
    """Mean of fiducial draws and its MC standard error (for checks against ``bayes1``)."""
    draws = fiducial_dist(s).sample(rng, size)
    return float(draws.mean()), float(draws.std(ddof=1) / math.sqrt(size))
