# -*- coding: utf-8 -*-
'''
Dense symmetric positive-definite matrix kernels.

Every function accepts a single ``(m, m)`` array or a stack ``(..., m, m)``
and works on the last two axes.
'''
import numpy as np
from scipy.special import multigammaln

from dfc_mvsv.errors import DomainError, NotPositiveDefinite

SYMMETRY_TOL = 1e-12
EIGEN_FLOOR = 1e-12


def _swap(a):
    return np.swapaxes(a, -1, -2)


def _square(a):
    a = np.asarray(a, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DomainError('expected square matrices, got shape {}'.format(a.shape))
    return a


def symmetrize(a):
    a = _square(a)
    return 0.5 * (a + _swap(a))


def as_spd(a):
    '''
    Build a symmetric positive-definite matrix (or stack) from array-like input.

    Asymmetry above the tolerance is rejected, the rest is averaged out.
    '''
    a = _square(a)
    if not np.all(np.isfinite(a)):
        raise NotPositiveDefinite('matrix has non-finite entries')
    if np.any(np.abs(a - _swap(a)) > SYMMETRY_TOL * np.maximum(1.0, np.abs(a))):
        raise NotPositiveDefinite('matrix is not symmetric')
    a = symmetrize(a)
    cholesky(a)
    return a


def as_correlation(a):
    '''Validate a correlation matrix (unit diagonal, symmetric, bounded)'''
    a = _square(a)
    diag = np.diagonal(a, axis1=-2, axis2=-1)
    if np.any(np.abs(diag - 1.0) > SYMMETRY_TOL):
        raise DomainError('correlation matrix must have a unit diagonal')
    if np.any(np.abs(a - _swap(a)) > SYMMETRY_TOL):
        raise DomainError('correlation matrix must be symmetric')
    if np.any(np.abs(a) > 1.0 + SYMMETRY_TOL):
        raise DomainError('correlations must lie in [-1, 1]')
    return a


def cholesky(m):
    '''
    Lower triangular factor L with L L^T = m.

    :raises NotPositiveDefinite: when a pivot is not strictly positive
    '''
    m = _square(m)
    try:
        low = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    if not np.all(np.isfinite(low)):
        raise NotPositiveDefinite('cholesky factorization produced non-finite values')
    return low


def log_det(m):
    low = cholesky(m)
    return 2.0 * np.sum(np.log(np.diagonal(low, axis1=-2, axis2=-1)), axis=-1)


def inv_spd(m):
    '''Inverse of a positive-definite matrix through its Cholesky factor'''
    low_inv = np.linalg.inv(cholesky(m))
    return _swap(low_inv) @ low_inv


def frac_power(m, p):
    '''
    Real power of a positive-definite matrix, V diag(w**p) V^T.

    Eigenvalues under ``EIGEN_FLOOR`` times the largest one are treated as
    a loss of definiteness, never clamped.
    '''
    m = _square(m)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    top = w[..., -1:]
    if not np.all(np.isfinite(w)) or np.any(top <= 0) or np.any(w <= EIGEN_FLOOR * top):
        raise NotPositiveDefinite('eigenvalues below the floor: {}'.format(w))
    return symmetrize((v * (w ** p)[..., None, :]) @ _swap(v))


def diag_sqrt(q):
    '''Diagonal matrix of the square roots of the diagonal of q'''
    q = _square(q)
    diag = np.diagonal(q, axis1=-2, axis2=-1)
    if np.any(diag <= 0):
        raise DomainError('diagonal entries must be strictly positive')
    return np.sqrt(diag)[..., :, None] * np.eye(q.shape[-1])


def to_correlation(q):
    '''Rescale a positive-definite matrix to unit diagonal'''
    q = _square(q)
    diag = np.diagonal(q, axis1=-2, axis2=-1)
    if np.any(diag <= 0):
        raise NotPositiveDefinite('diagonal entries must be strictly positive')
    scale = np.sqrt(diag)
    omega = np.clip(q / (scale[..., :, None] * scale[..., None, :]), -1.0, 1.0)
    idx = np.arange(q.shape[-1])
    omega[..., idx, idx] = 1.0
    return symmetrize(omega)


def mv_log_gamma(m, x):
    '''
    Log of the multivariate gamma function Gamma_m(x).

    Note the Wishart normalizer needs ``x = nu / 2``.
    '''
    if m < 1:
        raise DomainError('dimension must be positive, got {}'.format(m))
    if x - 0.5 * (m - 1) <= 0:
        raise DomainError('multivariate gamma needs x > {}, got {}'.format(0.5 * (m - 1), x))
    return float(multigammaln(x, m))
