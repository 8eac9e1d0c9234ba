#!/usr/bin/env python
# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest
from scipy import integrate, stats

from dfc_mvsv.distributions import (
    LOG_HALF, ScaledBetaParams, ShiftedGammaParams, beta_prop_param, chain_seeds,
    fresh_seed, logpdf_mvn_zero, logpdf_prior_d, logpdf_prior_nu, logpdf_scaled_beta,
    logpdf_shifted_gamma, logpdf_wishart, make_rng, sample_mvn_zero, sample_scaled_beta,
    sample_shifted_gamma, sample_std_normal_vec, sample_wishart, shifted_gamma_params,
)
from dfc_mvsv.errors import DomainError, NotPositiveDefinite
from dfc_mvsv.matrix import cholesky, mv_log_gamma


def test_std_normal_moments(rng):
    draws = np.array([sample_std_normal_vec(rng, 1)[0] for _ in range(100000)])
    assert abs(draws.mean()) < 0.02
    assert abs(draws.var() - 1.0) < 0.03


def test_same_seed_same_stream():
    first = make_rng(7)
    second = make_rng(7)
    np.testing.assert_array_equal(sample_std_normal_vec(first, 3), sample_std_normal_vec(second, 3))
    np.testing.assert_array_equal(sample_wishart(first, 4.0, np.eye(2)), sample_wishart(second, 4.0, np.eye(2)))
    params = shifted_gamma_params(5.0, 0.1, 2)
    assert sample_shifted_gamma(first, params) == sample_shifted_gamma(second, params)
    assert sample_scaled_beta(first, ScaledBetaParams(2.0)) == sample_scaled_beta(second, ScaledBetaParams(2.0))


def test_std_normal_needs_positive_length(rng):
    with pytest.raises(DomainError):
        sample_std_normal_vec(rng, 0)


def test_chain_seeds():
    assert chain_seeds(42, 1) == [42]
    seeds = chain_seeds(42, 4)
    assert seeds == chain_seeds(42, 4)
    assert len(set(seeds)) == 4
    with pytest.raises(DomainError):
        chain_seeds(42, 0)
    assert 0 <= fresh_seed() < 2 ** 64


def test_mvn_identity_covariance(rng):
    draws = np.array([sample_mvn_zero(rng, np.eye(2)) for _ in range(100000)])
    np.testing.assert_allclose(np.cov(draws.T), np.eye(2), atol=0.03)


def test_mvn_correlation(rng):
    draws = np.array([sample_mvn_zero(rng, np.array([[1.0, 0.9], [0.9, 1.0]])) for _ in range(20000)])
    assert np.corrcoef(draws.T)[0, 1] == pytest.approx(0.9, abs=0.02)


def test_mvn_degenerate_rejected(rng):
    with pytest.raises(NotPositiveDefinite):
        sample_mvn_zero(rng, np.diag([0.0, 1.0]))


def test_logpdf_mvn_against_scipy(rng, spd):
    for _ in range(20):
        sigma = spd(3)
        y = rng.standard_normal(3)
        expected = stats.multivariate_normal(mean=np.zeros(3), cov=sigma).logpdf(y)
        assert logpdf_mvn_zero(y, sigma) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize('nu,scale', [
    (5.0, np.eye(2)),
    (3.5, np.array([[2.0, 0.5], [0.5, 1.0]])),
    (8.0, np.array([[0.3, -0.1], [-0.1, 0.2]])),
])
def test_wishart_mean(rng, nu, scale):
    n = 100000
    draws = np.array([sample_wishart(rng, nu, scale) for _ in range(n)])
    diag = np.diag(scale)
    stderr = np.sqrt(nu * (scale ** 2 + np.outer(diag, diag)) / n)
    assert np.all(np.abs(draws.mean(axis=0) - nu * scale) < 3 * stderr)
    for draw in draws[:1000]:
        cholesky(draw)


def test_wishart_univariate_is_chi_square(rng):
    nu, n = 3.5, 50000
    draws = np.array([sample_wishart(rng, nu, np.eye(1))[0, 0] for _ in range(n)])
    assert abs(draws.mean() - nu) < 3 * math.sqrt(2 * nu / n)
    assert draws.var() == pytest.approx(2 * nu, rel=0.05)
    assert np.all(draws > 0)


def test_wishart_degrees_of_freedom(rng):
    with pytest.raises(DomainError):
        sample_wishart(rng, 1.0, np.eye(2))
    with pytest.raises(DomainError):
        logpdf_wishart(np.eye(3), 2.0, np.eye(3))


def test_logpdf_wishart_example():
    expected = -5 * math.log(2) - mv_log_gamma(2, 2.5) - 1.0
    assert logpdf_wishart(np.eye(2), 5.0, np.eye(2)) == pytest.approx(expected, abs=1e-12)
    assert logpdf_wishart(np.eye(2), 5.0, np.eye(2)) == pytest.approx(-5.0367, abs=1e-4)


def test_logpdf_wishart_against_scipy(rng, spd):
    for _ in range(20):
        x, scale = spd(2), spd(2) / 4
        nu = 1.5 + 6.0 * rng.random()
        expected = stats.wishart(df=nu, scale=scale).logpdf(x)
        assert logpdf_wishart(x, nu, scale) == pytest.approx(expected, abs=1e-9)


def test_logpdf_wishart_univariate_is_gamma():
    for x in (0.1, 1.0, 4.5):
        expected = stats.gamma(a=2.5, scale=2 * 0.7).logpdf(x)
        assert logpdf_wishart(np.array([[x]]), 5.0, np.array([[0.7]])) == pytest.approx(expected, abs=1e-12)


def test_logpdf_wishart_integrates_to_one():
    for nu, s in ((2.5, 1.0), (4.0, 0.3)):
        total, _ = integrate.quad(lambda x: math.exp(logpdf_wishart(np.array([[x]]), nu, np.array([[s]]))),
                                  0, np.inf)
        assert total == pytest.approx(1.0, abs=1e-6)


def test_logpdf_wishart_stack(spd):
    xs = np.stack([spd(2) for _ in range(4)])
    scales = np.stack([spd(2) for _ in range(4)])
    values = logpdf_wishart(xs, 6.0, scales)
    assert values.shape == (4,)
    for x, s, value in zip(xs, scales, values):
        assert logpdf_wishart(x, 6.0, s) == pytest.approx(value, abs=1e-12)


def test_shifted_gamma_params_example():
    params = shifted_gamma_params(3.0, 0.1, 2)
    assert params.beta_p == pytest.approx((1 + math.sqrt(1.4)) / 0.2, abs=1e-12)
    assert params.beta_p == pytest.approx(10.9161, abs=1e-4)
    assert params.alpha_p == pytest.approx(11.9161, abs=1e-4)
    assert (params.alpha_p - 1) / params.beta_p == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize('mode,var,m', [(3.0, 0.1, 2), (2.01, 0.1, 2), (12.0, 3.0, 4), (1.5, 0.5, 1)])
def test_shifted_gamma_identities(mode, var, m):
    params = shifted_gamma_params(mode, var, m)
    assert (params.alpha_p - 1) / params.beta_p == pytest.approx(mode - m, abs=1e-10)
    assert params.alpha_p / params.beta_p ** 2 == pytest.approx(var, abs=1e-10)
    assert params.alpha_p > 1
    assert params.shift == m


def test_shifted_gamma_params_domain():
    with pytest.raises(DomainError):
        shifted_gamma_params(2.0, 0.1, 2)
    with pytest.raises(DomainError):
        shifted_gamma_params(3.0, 0.0, 2)


def test_shifted_gamma_draws(rng):
    params = shifted_gamma_params(5.0, 0.1, 2)
    draws = np.array([sample_shifted_gamma(rng, params) for _ in range(100000)])
    assert np.all(draws > 2)
    assert draws.var() == pytest.approx(0.1, rel=0.05)
    mean = 2 + params.alpha_p / params.beta_p
    assert abs(draws.mean() - mean) < 3 * math.sqrt(0.1 / len(draws))
    counts, edges = np.histogram(draws, bins=np.arange(3.9, 6.11, 0.2))
    argmax = np.argmax(counts)
    assert edges[argmax] <= 5.0 <= edges[argmax + 1]


def test_logpdf_shifted_gamma():
    params = shifted_gamma_params(5.0, 0.1, 2)
    assert logpdf_shifted_gamma(2.0, params) == -math.inf
    assert logpdf_shifted_gamma(1.0, params) == -math.inf
    grid = np.linspace(2.5, 8.0, 5501)
    values = [logpdf_shifted_gamma(nu, params) for nu in grid]
    assert grid[int(np.argmax(values))] == pytest.approx(5.0, abs=1e-3)
    plain = ShiftedGammaParams(3.0, 2.0, 0.0)
    for x in (0.2, 1.0, 3.0):
        assert logpdf_shifted_gamma(x, plain) == pytest.approx(stats.gamma(a=3.0, scale=0.5).logpdf(x), abs=1e-12)


def test_beta_prop_param_examples():
    assert beta_prop_param(0.0, 5.0).a_p == 1.0
    assert beta_prop_param(0.6, 5.0).a_p == pytest.approx(2.0, abs=1e-12)
    assert beta_prop_param(0.9999, 5.0).a_p == 5.0
    assert beta_prop_param(1.0, 5.0).a_p == 5.0
    assert beta_prop_param(-1.0, 5.0).a_p == pytest.approx(0.2)


def test_beta_prop_param_mean_and_clamp():
    for d in np.linspace(-1.0, 1.0, 401):
        params = beta_prop_param(d, 5.0)
        assert 1 / 5.0 <= params.a_p <= 5.0
        assert params.a_p * params.b_p == pytest.approx(1.0, abs=1e-12)
        mu = 0.5 * (1 + d)
        if 0 < mu < 1 and 1 / 5.0 < math.sqrt(mu / (1 - mu)) < 5.0:
            assert params.mean == pytest.approx(d, abs=1e-12)


def test_beta_prop_param_domain():
    with pytest.raises(DomainError):
        beta_prop_param(1.5, 5.0)
    with pytest.raises(DomainError):
        beta_prop_param(0.0, 1.0)


def test_scaled_beta_draws(rng):
    draws = np.array([sample_scaled_beta(rng, ScaledBetaParams(2.0)) for _ in range(200000)])
    assert np.all((draws > -1) & (draws < 1))
    assert draws.mean() == pytest.approx(0.6, abs=0.005)
    uniform = np.array([sample_scaled_beta(rng, ScaledBetaParams(1.0)) for _ in range(20000)])
    assert abs(uniform.mean()) < 0.03


def test_logpdf_scaled_beta():
    uniform = ScaledBetaParams(1.0)
    for d in (-0.9, 0.0, 0.5):
        assert logpdf_scaled_beta(d, uniform) == pytest.approx(LOG_HALF, abs=1e-12)
    for d in (-1.5, 1.0, 1.2):
        assert logpdf_scaled_beta(d, uniform) == -math.inf
    for a_p in (0.7, 1.3, 3.0):
        total, _ = integrate.quad(lambda d: math.exp(logpdf_scaled_beta(d, ScaledBetaParams(a_p))), -1, 1,
                                  limit=200)
        assert total == pytest.approx(1.0, abs=1e-5)


def test_logpdf_prior_nu():
    assert logpdf_prior_nu(2.0, 4.0, 1.0, 2) == -math.inf
    assert logpdf_prior_nu(1.0, 4.0, 1.0, 2) == -math.inf
    grid = np.linspace(2.01, 10.0, 800)
    exponential = [logpdf_prior_nu(nu, 1.0, 1.0, 2) for nu in grid]
    assert np.all(np.diff(exponential) < 0)
    values = [logpdf_prior_nu(nu, 4.0, 1.0, 2) for nu in np.linspace(2.001, 12.0, 10000)]
    assert np.linspace(2.001, 12.0, 10000)[int(np.argmax(values))] == pytest.approx(5.0, abs=2e-3)


def test_logpdf_prior_d():
    assert logpdf_prior_d(0.0) == pytest.approx(math.log(0.5))
    assert logpdf_prior_d(1.0) == pytest.approx(math.log(0.5))
    assert logpdf_prior_d(-1.0) == pytest.approx(math.log(0.5))
    assert logpdf_prior_d(1.1) == -math.inf
