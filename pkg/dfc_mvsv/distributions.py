# -*- coding: utf-8 -*-
'''
Random variates and log densities used by the model and the sampler.

Random streams are ``numpy.random.Generator`` instances backed by PCG64.
Normal variates use numpy's ziggurat sampler, gamma variates the
Marsaglia-Tsang method (with the shape < 1 boost) and beta variates the
ratio of two gammas. Streams are reproducible within one numpy release.

Every log density returns ``-inf`` outside the support.
'''
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import betaln, gammaln

from dfc_mvsv.errors import DomainError
from dfc_mvsv.matrix import cholesky, log_det, mv_log_gamma, symmetrize

LOG_2 = math.log(2.0)
LOG_HALF = -LOG_2
LOG_2PI = math.log(2.0 * math.pi)


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def make_rng(seed=None):
    return np.random.default_rng(seed)


def fresh_seed():
    '''A 64-bit seed drawn from operating system entropy'''
    return int(np.random.SeedSequence().generate_state(1, np.uint64)[0])


def chain_seeds(seed, n):
    '''
    Seeds of ``n`` independent chains.

    A single chain keeps ``seed`` itself so that one-chain runs match
    ``run_chain`` called directly.
    '''
    if n < 1:
        raise DomainError('number of chains must be positive, got {}'.format(n))
    if n == 1:
        return [seed]
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(child.generate_state(1, np.uint64)[0]) for child in children]


@dataclass(frozen=True)
class ShiftedGammaParams:
    '''Gamma(alpha_p, rate beta_p) shifted right by ``shift``'''
    alpha_p: float
    beta_p: float
    shift: float

    def __post_init__(self):
        if not (self.alpha_p > 0 and self.beta_p > 0):
            raise DomainError('gamma shape and rate must be positive')


@dataclass(frozen=True)
class ScaledBetaParams:
    '''Beta(a_p, 1/a_p) mapped affinely onto [-1, 1]'''
    a_p: float

    def __post_init__(self):
        if not self.a_p > 0:
            raise DomainError('beta shape must be positive')

    @property
    def b_p(self):
        return 1.0 / self.a_p

    @property
    def mean(self):
        a2 = self.a_p * self.a_p
        return 2.0 * a2 / (a2 + 1.0) - 1.0


def sample_std_normal_vec(rng, m):
    if m < 1:
        raise DomainError('vector length must be positive, got {}'.format(m))
    return rng.standard_normal(m)


def sample_mvn_zero(rng, sigma):
    low = cholesky(sigma)
    return low @ sample_std_normal_vec(rng, low.shape[-1])


def logpdf_mvn_zero(y, sigma):
    '''Log density of N(0, sigma) at y, through the Cholesky factor of sigma'''
    low = cholesky(sigma)
    y = np.asarray(y, dtype=float)
    z = solve_triangular(low, y, lower=True)
    return float(-0.5 * len(y) * LOG_2PI - np.sum(np.log(np.diag(low))) - 0.5 * z @ z)


def sample_wishart(rng, nu, scale):
    '''
    Wishart draw by Bartlett decomposition.

    X = L A A^T L^T, where L L^T = scale, A lower triangular with
    chi-distributed diagonal (nu - i + 1 degrees of freedom) and standard
    normal entries below it.
    '''
    low = cholesky(scale)
    m = low.shape[-1]
    if nu <= m - 1:
        raise DomainError('wishart needs nu > {}, got {}'.format(m - 1, nu))
    bartlett = np.zeros((m, m))
    # chi-square(k) as twice a Gamma(k / 2, 1) variate
    chi2 = 2.0 * rng.standard_gamma(0.5 * (nu - np.arange(m)))
    bartlett[np.diag_indices(m)] = np.sqrt(chi2)
    bartlett[np.tril_indices(m, k=-1)] = rng.standard_normal(m * (m - 1) // 2)
    factor = low @ bartlett
    return symmetrize(factor @ factor.T)


def logpdf_wishart(x, nu, scale):
    '''
    Wishart log density, broadcasting over stacks of ``x`` and ``scale``.
    '''
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    if nu <= m - 1:
        raise DomainError('wishart needs nu > {}, got {}'.format(m - 1, nu))
    low = cholesky(scale)
    logdet_s = 2.0 * np.sum(np.log(np.diagonal(low, axis1=-2, axis2=-1)), axis=-1)
    low_inv = np.linalg.inv(low)
    scale_inv = np.swapaxes(low_inv, -1, -2) @ low_inv
    trace = np.sum(scale_inv * x, axis=(-2, -1))
    value = (
        -0.5 * nu * m * LOG_2
        - mv_log_gamma(m, 0.5 * nu)
        - 0.5 * nu * logdet_s
        + 0.5 * (nu - m - 1) * log_det(x)
        - 0.5 * trace
    )
    return _scalar(value)


def shifted_gamma_params(nu_mode, nu_var, m):
    '''
    Shifted gamma whose mode is ``nu_mode`` and whose variance is ``nu_var``.
    '''
    if not nu_mode > m:
        raise DomainError('proposal mode must exceed {}, got {}'.format(m, nu_mode))
    if not nu_var > 0:
        raise DomainError('proposal variance must be positive, got {}'.format(nu_var))
    excess = nu_mode - m
    beta_p = (excess + math.sqrt(excess * excess + 4.0 * nu_var)) / (2.0 * nu_var)
    return ShiftedGammaParams(alpha_p=1.0 + excess * beta_p, beta_p=beta_p, shift=m)


def sample_shifted_gamma(rng, params):
    return params.shift + rng.gamma(params.alpha_p, 1.0 / params.beta_p)


def logpdf_shifted_gamma(nu, params):
    excess = nu - params.shift
    if not excess > 0:
        return -math.inf
    alpha, beta = params.alpha_p, params.beta_p
    return (alpha * math.log(beta) - float(gammaln(alpha))
            + (alpha - 1.0) * math.log(excess) - beta * excess)


def beta_prop_param(d_mean, a_f):
    '''
    Beta proposal on [-1, 1] whose mean is ``d_mean``, shape clamped to
    [1/a_f, a_f].
    '''
    if not -1.0 <= d_mean <= 1.0:
        raise DomainError('d must lie in [-1, 1], got {}'.format(d_mean))
    if not a_f > 1.0:
        raise DomainError('a_f must exceed 1, got {}'.format(a_f))
    mu = 0.5 * (1.0 + d_mean)
    if mu >= 1.0:
        a_p = a_f
    else:
        a_p = max(min(math.sqrt(mu / (1.0 - mu)), a_f), 1.0 / a_f)
    return ScaledBetaParams(a_p=a_p)


def sample_scaled_beta(rng, params):
    return 2.0 * rng.beta(params.a_p, params.b_p) - 1.0


def logpdf_scaled_beta(d, params):
    if not -1.0 < d < 1.0:
        return -math.inf
    x = 0.5 * (d + 1.0)
    a, b = params.a_p, params.b_p
    return ((a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x)
            - float(betaln(a, b)) - LOG_2)


def logpdf_prior_nu(nu, alpha_nu, beta_nu, m):
    '''Gamma(alpha_nu, rate beta_nu) prior on nu - m'''
    return logpdf_shifted_gamma(nu, ShiftedGammaParams(alpha_nu, beta_nu, m))


def logpdf_prior_d(d):
    return LOG_HALF if -1.0 <= d <= 1.0 else -math.inf
