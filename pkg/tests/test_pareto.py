import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from oracles import ks_critical_1pct, pareto_log_moment_quad, pareto_moment_quad
from scaled_uniform.pareto import TruncPareto

ALPHAS = [-10, -3, -1, 1, 3, 10]
SUPPORTS = [(0.8, 1.8), (1.0, 1.05), (2.0, 38.0), (0.01, 0.02)]

alphas = st.one_of(st.floats(-50, -0.05), st.floats(0.05, 50))
supports = st.tuples(st.floats(1e-3, 1e3), st.floats(1.0 + 1e-6, 50.0)).map(lambda t: (t[0], t[0] * t[1]))


def test_rejects_zero_alpha():
    with pytest.raises(ValueError):
        TruncPareto(0, 1, 2)


def test_rejects_bad_support():
    with pytest.raises(ValueError):
        TruncPareto(2, 2, 1)
    with pytest.raises(ValueError):
        TruncPareto(2, 0, 1)


class TestPdf:
    def test_value(self):
        assert TruncPareto(2, 1, 2).pdf(1.0) == pytest.approx(8 / 3, rel=1e-14)

    def test_zero_outside(self):
        d = TruncPareto(3, 0.8, 1.8)
        assert d.pdf(0.7) == 0.0 and d.pdf(1.9) == 0.0

    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("a,b", SUPPORTS)
    def test_normalized(self, alpha, a, b):
        d = TruncPareto(alpha, a, b)
        total, _ = integrate.quad(d.pdf, a, b, epsabs=0, epsrel=1e-12, limit=200)
        assert total == pytest.approx(1.0, abs=1e-8)


class TestCdfQuantile:
    def test_endpoints(self):
        d = TruncPareto(3, 0.8, 1.8)
        assert d.cdf(0.8) == 0.0 and d.cdf(1.8) == 1.0
        assert d.quantile(0.0) == 0.8 and d.quantile(1.0) == 1.8

    def test_worked_values(self):
        assert TruncPareto(1, 1, 2).cdf(4 / 3) == pytest.approx(0.5, abs=1e-14)
        assert TruncPareto(1, 1, 2).quantile(0.5) == pytest.approx(4 / 3, rel=1e-14)
        # root of a^-3 - t^-3 = (a^-3 - b^-3)/2, solved to 30 digits with mpmath
        assert TruncPareto(3, 0.8, 1.8).quantile(0.5) == pytest.approx(0.980057220258694, rel=1e-13)

    def test_quantile_domain(self):
        with pytest.raises(ValueError):
            TruncPareto(3, 0.8, 1.8).quantile(1.2)

    @pytest.mark.parametrize("alpha", ALPHAS + [-1000, 1000])
    @pytest.mark.parametrize("a,b", SUPPORTS)
    def test_inverse_pair(self, alpha, a, b):
        d = TruncPareto(alpha, a, b)
        p = np.linspace(0, 1, 101)
        np.testing.assert_allclose(d.cdf(d.quantile(p)), p, atol=1e-12)

    @given(alpha=alphas, support=supports, t=st.floats(0, 1), u=st.floats(0, 1))
    @settings(max_examples=300, deadline=None)
    def test_monotone(self, alpha, support, t, u):
        d = TruncPareto(alpha, *support)
        x, y = sorted([support[0] + t * (support[1] - support[0]), support[0] + u * (support[1] - support[0])])
        assert d.cdf(x) <= d.cdf(y)

    def test_matches_integrated_pdf(self):
        d = TruncPareto(-3, 0.5, 1.5)
        for t in (0.6, 1.0, 1.4):
            num, _ = integrate.quad(d.pdf, 0.5, t, epsabs=1e-14)
            assert d.cdf(t) == pytest.approx(num, abs=1e-12)


class TestClosure:
    @given(alpha=alphas, support=supports, c=st.floats(1e-4, 1e4), p=st.floats(0, 1))
    @settings(max_examples=300, deadline=None)
    def test_scale(self, alpha, support, c, p):
        d = TruncPareto(alpha, *support)
        theta = d.quantile(p)
        assert d.scaled(c).cdf(c * theta) == pytest.approx(d.cdf(theta), abs=1e-9)

    @given(alpha=alphas, support=supports, y=st.floats(1e-2, 1e2), i=st.integers(0, 2**20))
    @settings(max_examples=300, deadline=None)
    def test_reciprocal(self, alpha, support, y, i):
        # y/V is decreasing in V, so its p-quantile is y over V's (1-p)-quantile;
        # dyadic p keeps 1 - p exact
        p = i / 2**20
        v = TruncPareto(alpha, *support)
        w = v.reciprocal(y)
        assert w.alpha == -alpha
        assert w.quantile(p) == pytest.approx(y / v.quantile(1 - p), rel=1e-9)


class TestMoments:
    def test_worked_values(self):
        d = TruncPareto(2, 1, 2)
        assert d.moment(1) == pytest.approx(4 / 3, rel=1e-14)
        assert d.moment(2) == pytest.approx(8 / 3 * math.log(2), rel=1e-14)
        assert d.moment(0) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("a,b", SUPPORTS)
    def test_against_quadrature(self, alpha, a, b):
        d = TruncPareto(alpha, a, b)
        for m in (-2, -1, 0, 1, 2, alpha):
            assert d.moment(m) == pytest.approx(pareto_moment_quad(alpha, a, b, m), rel=1e-8)

    @pytest.mark.parametrize("alpha", [-3.0, 1.0, 2.0, 7.0])
    def test_continuous_across_index(self, alpha):
        d = TruncPareto(alpha, 0.8, 1.8)
        at = d.moment(alpha)
        for eps in (1e-12, 1e-10, 1e-9, 1e-8, 1e-6):
            assert d.moment(alpha + eps) == pytest.approx(at, rel=10 * eps + 1e-14)
            assert d.moment(alpha - eps) == pytest.approx(at, rel=10 * eps + 1e-14)

    @pytest.mark.parametrize("alpha", [-1000, -30, 30, 1000])
    def test_large_index_is_finite(self, alpha):
        d = TruncPareto(alpha, 2.0, 38.0)
        assert np.isfinite(d.moment(1)) and 2.0 <= d.moment(1) <= 38.0

    def test_tight_support(self):
        # naive (a^-n - b^-n) loses every digit here
        d = TruncPareto(30, 1.0, 1.0 + 1e-13)
        assert d.moment(1) == pytest.approx(1.0 + 0.5e-13, rel=1e-15)

    def test_point_mass(self):
        d = TruncPareto(5, 1.7, 1.7)
        assert d.is_point_mass
        assert d.moment(1) == pytest.approx(1.7) and d.moment(-2) == pytest.approx(1.7**-2)
        assert d.log_moment() == pytest.approx(math.log(1.7))
        assert d.quantile(0.3) == 1.7
        assert d.sample(np.random.default_rng(0)) == 1.7


class TestLogMoment:
    def test_worked_value(self):
        # mpmath quadrature of ln(t) * pdf at 30 digits: 0.0321453702328904888...
        d = TruncPareto(3, 0.8, 1.8)
        assert d.log_moment() == pytest.approx(0.03214537023289049, abs=1e-15)

    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("a,b", SUPPORTS)
    def test_against_quadrature(self, alpha, a, b):
        d = TruncPareto(alpha, a, b)
        assert d.log_moment() == pytest.approx(pareto_log_moment_quad(alpha, a, b), abs=1e-10)

    @pytest.mark.parametrize("alpha", [-5, 1, 3, 40])
    def test_shrinking_support(self, alpha):
        prev = None
        for eps in (1e-2, 1e-4, 1e-8, 1e-12, 1e-15, 0.0):
            value = TruncPareto(alpha, 2.0, 2.0 * (1 + eps)).log_moment()
            assert value == pytest.approx(math.log(2.0) + eps / 2, abs=eps * abs(alpha) + 1e-15)
            prev = value
        assert prev == math.log(2.0)


class TestSampling:
    def test_ks(self, rng):
        d = TruncPareto(3, 0.8, 1.8)
        draws = d.sample(rng, 100_000)
        assert stats.kstest(draws, d.cdf).statistic < ks_critical_1pct(draws.size)

    def test_mean(self, rng):
        d = TruncPareto(3, 0.8, 1.8)
        draws = d.sample(rng, 10**6)
        se = draws.std() / math.sqrt(draws.size)
        assert abs(draws.mean() - d.moment(1)) < 3 * se

    def test_negative_index_ks(self, rng):
        d = TruncPareto(-4, 0.5, 1.5)
        draws = d.sample(rng, 50_000)
        assert stats.kstest(draws, d.cdf).pvalue > 0.01
