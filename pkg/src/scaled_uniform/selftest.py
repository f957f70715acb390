"""Reduced-scale consistency checks run by ``scaled-uniform selftest``."""

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from . import estimators as est
from . import risklab
from .fiducial import fiducial_dist, fiducial_sample_via_conditioning
from .model import Design, SuffStat, sample_extremes
from .pareto import TruncPareto


@dataclass
class CheckResult:
    name: str
    tolerance: str
    passed: bool
    detail: str
    seconds: float = 0.0


def random_suff_stats(size, seed, n_max=40):
    """Batches of feasible statistics over random designs, grouped by design."""
    rng = np.random.default_rng(seed)
    out = []
    remaining = size
    while remaining > 0:
        m = min(remaining, 500)
        design = Design(k=float(rng.uniform(0.02, 0.98)), n=int(rng.integers(1, n_max + 1)))
        theta = float(10.0 ** rng.uniform(-2, 2))
        out.append(SuffStat.from_extremes(*sample_extremes(theta, design, m, rng), design))
        remaining -= m
    return out


def _max_rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def check_log_moment_sign():
    d = TruncPareto(3, 0.8, 1.8)
    num, _ = integrate.quad(lambda t: np.log(t) * d.pdf(t), 0.8, 1.8, epsabs=1e-14, epsrel=1e-14)
    err = abs(d.log_moment() - num)
    # Opposite sign on the last term: tends to ln a + 2/alpha instead of ln a as b -> a.
    b = 2.25
    flipped = math.log(0.8) + 1 / 3 - math.log(b) / (1 - b**3)
    return err <= 1e-10 and abs(flipped - num) > 1e-3, f"|closed - quad| = {err:.2e}; flipped-sign form off by {abs(flipped - num):.3f}"


def check_sc_tie_limit():
    worst = 0.0
    for n, k in [(1, 0.5), (3, 0.5), (30, 0.1), (1000, 0.9)]:
        design = Design(k=k, n=n)
        s = SuffStat.from_extremes(1.0 - k, 1.0 + k, design)
        worst = max(worst, abs(est.sc(s) / s.theta_ml - 1))
        for eps in (1e-12, 1e-9, 1e-6):
            s = SuffStat.from_extremes((1.0 - k) * (1 + eps), 1.0 + k, design)
            # sc sits between theta_ml and theta_mu, so its gap is at most eps
            worst = max(worst, abs(est.sc(s) / s.theta_ml - 1) - eps)
    return worst <= 1e-12, f"max deviation from theta_ml = {worst:.2e}"


def check_opt_identity():
    worst = 0.0
    for s in random_suff_stats(10_000, seed=11):
        worst = max(worst, _max_rel(est.opt(s), est.opt_moment_ratio(s)))
    return worst <= 1e-12, f"max rel diff = {worst:.2e}"


def check_unbias_factor_identity():
    worst = 0.0
    for s in random_suff_stats(10_000, seed=12):
        worst = max(worst, _max_rel(est.conditional_unbiased(s), est.gm(s)))
    return worst <= 1e-12, f"max rel diff = {worst:.2e}"


def check_fiducial_two_paths():
    design = Design(k=0.5, n=3)
    s = SuffStat.from_extremes(0.9, 1.2, design)
    rng = np.random.default_rng(5)
    direct = fiducial_dist(s).sample(rng, 20_000)
    via = fiducial_sample_via_conditioning(s, rng, 20_000)
    res = stats.ks_2samp(direct, via)
    return res.pvalue > 0.01, f"two-sample KS p = {res.pvalue:.3f}"


def check_unbiasedness():
    worst = 0.0
    for n in (2, 5, 30):
        for k in (0.1, 0.9):
            design = Design(k=k, n=n)
            for name in ("rb", "lv", "gm"):
                worst = max(worst, abs(risklab.quad_bias(name, design)))
    return worst <= 1e-8, f"max |bias| = {worst:.2e}"


def check_oracle_agreement():
    design = Design(k=0.5, n=5)
    names = list(est.catalog())
    quad = risklab.quad_risks(names, design, "squared")
    mc = risklab.mc_risks(names, 1.0, design, "squared", 100_000, seed=3)
    z = max(abs(mc.report(n).value - quad[n].value) / mc.report(n).stderr for n in names)
    return z <= 3.0, f"max |z| = {z:.2f}"


def check_equivariance():
    reports = [risklab.equivariance_audit(e, trials=100, seed=4) for e in est.catalog().values()]
    worst = max(r.max_rel_error for r in reports)
    return all(reports), f"max rel error = {worst:.2e}"


def check_coverage():
    rep = risklab.coverage(0.1, 1.0, Design(k=0.5, n=5), 20_000, seed=6)
    se = math.sqrt(0.1 * 0.9 / rep.reps)
    return abs(rep.coverage - 0.9) <= 3 * se, f"coverage = {rep.coverage:.4f} (se {se:.4f})"


CHECKS = [
    ("log-moment closed form vs quadrature", "1e-10 abs", check_log_moment_sign),
    ("sc tends to theta_ml as b* -> 1", "1e-12 rel", check_sc_tie_limit),
    ("opt == E[1/Theta]/E[1/Theta^2]", "1e-12 rel", check_opt_identity),
    ("phi(S2)*S1 == gm", "1e-12 rel", check_unbias_factor_identity),
    ("fiducial: direct vs conditioning sampler", "KS p > 0.01", check_fiducial_two_paths),
    ("unbiased: rb, lv, gm", "1e-8 abs", check_unbiasedness),
    ("MC risk vs quadrature risk", "3 s.e.", check_oracle_agreement),
    ("scale equivariance of catalog", "1e-12 rel", check_equivariance),
    ("coverage of 90% fiducial interval", "3 s.e.", check_coverage),
]


def run_selftest():
    results = []
    for name, tol, fn in CHECKS:
        start = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # report, don't abort the remaining checks
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, tol, bool(passed), detail, time.perf_counter() - start))
    return results
