# -*- coding: utf-8 -*-
'''
Generative stochastic volatility model of a correlation trajectory.

The latent chain is stored as inverses Q_k^-1, Q_0 = I:

    Q_k^-1 = Q_{k-1}^{-d/2} E_k Q_{k-1}^{-d/2} / nu,   E_k ~ W_m(nu, I)
    Omega_k = correlation rescaling of Q_k
    y_k ~ N(0, Omega_k)

Channel variances are fixed to one; data are standardized beforehand.
'''
import logging
from dataclasses import dataclass

import numpy as np

from dfc_mvsv.distributions import sample_mvn_zero, sample_wishart
from dfc_mvsv.errors import ConfigError, DomainError, InvalidData
from dfc_mvsv.matrix import as_correlation, as_spd, frac_power, inv_spd, symmetrize, to_correlation

logger = logging.getLogger(__name__)


def off_diagonal_pairs(m):
    '''Upper triangle index pairs (i, j), i < j, in row-major order'''
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def upper_entries(mats):
    '''Entries above the diagonal of a stack of matrices, last axis over pairs'''
    pairs = off_diagonal_pairs(mats.shape[-1])
    rows = [i for i, _ in pairs]
    cols = [j for _, j in pairs]
    return mats[..., rows, cols]


@dataclass(frozen=True)
class ModelParams:
    nu: float
    d: float
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError('dimension must be a positive integer, got {}'.format(self.m))
        if not self.nu > self.m:
            raise DomainError('nu must exceed m = {}, got {}'.format(self.m, self.nu))
        if not -1.0 <= self.d <= 1.0:
            raise DomainError('d must lie in [-1, 1], got {}'.format(self.d))


@dataclass(frozen=True, eq=False)
class Trajectory:
    q_inv_seq: np.ndarray
    omega_seq: np.ndarray
    y_seq: np.ndarray

    def __post_init__(self):
        lengths = {len(self.q_inv_seq), len(self.omega_seq), len(self.y_seq)}
        if len(lengths) != 1:
            raise InvalidData('trajectory sequences differ in length: {}'.format(sorted(lengths)))

    @property
    def K(self):
        return len(self.y_seq)

    @property
    def m(self):
        return self.y_seq.shape[1]

    def correlations(self):
        '''Off-diagonal correlations, shape (K, number of pairs)'''
        return upper_entries(self.omega_seq)

    def validate(self):
        as_spd(self.q_inv_seq)
        as_correlation(self.omega_seq)
        if not np.all(np.isfinite(self.y_seq)):
            raise InvalidData('observations must be finite')
        return self


def step_latent(rng, q_prev_inv, params):
    '''Draw Q_k^-1 given Q_{k-1}^-1'''
    half = frac_power(q_prev_inv, 0.5 * params.d)
    innovation = sample_wishart(rng, params.nu, np.eye(params.m))
    return symmetrize(half @ innovation @ half) / params.nu


def simulate(rng, params, K):
    '''
    One realization of the latent chain, correlations and observations.
    '''
    if K < 1:
        raise ConfigError('number of time steps must be positive, got {}'.format(K))
    m = params.m
    q_inv_seq = np.empty((K, m, m))
    omega_seq = np.empty((K, m, m))
    y_seq = np.empty((K, m))
    q_inv = np.eye(m)
    for k in range(K):
        q_inv = step_latent(rng, q_inv, params)
        omega = to_correlation(inv_spd(q_inv))
        q_inv_seq[k] = q_inv
        omega_seq[k] = omega
        y_seq[k] = sample_mvn_zero(rng, omega)
    logger.debug('simulated %d steps with nu=%s d=%s m=%d', K, params.nu, params.d, m)
    return Trajectory(q_inv_seq=q_inv_seq, omega_seq=omega_seq, y_seq=y_seq)
