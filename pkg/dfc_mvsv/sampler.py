# -*- coding: utf-8 -*-
'''
Metropolis-within-Gibbs estimation of the latent chain and of (nu, d).

A sweep updates Q_1^-1 ... Q_{K-1}^-1 in ascending order (each conditioned on
the freshly updated left neighbour and the previous sweep's right neighbour),
then Q_K^-1, then nu, then d. Every block is a Metropolis-Hastings step.

Target log densities are written as sums of log pdfs (likelihood plus the
Wishart transition densities touching the block); they differ from the
conditional posteriors only by terms constant in the updated block.
'''
import logging
import math
import numbers
from collections import namedtuple
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Callable, Optional

import numpy as np

from dfc_mvsv.distributions import (
    beta_prop_param, fresh_seed, logpdf_mvn_zero, logpdf_prior_nu, logpdf_scaled_beta,
    logpdf_shifted_gamma, logpdf_wishart, make_rng, sample_scaled_beta,
    sample_shifted_gamma, sample_wishart, shifted_gamma_params,
)
from dfc_mvsv.errors import ConfigError, DomainError, InvalidData, NotPositiveDefinite
from dfc_mvsv.matrix import diag_sqrt, frac_power, inv_spd, symmetrize, to_correlation

logger = logging.getLogger(__name__)

NUMERICAL_FAILURES = (NotPositiveDefinite, DomainError, FloatingPointError)

Proposal = namedtuple('Proposal', ['value', 'log_q_forward', 'scale'])

INT_SETTINGS = frozenset(('K', 'm', 'n_iters', 'burn_in_states', 'burn_in_params', 'thin_states',
                          'thin_params', 'seed', 'log_every'))
BOOL_SETTINGS = frozenset(('record_all_states', 'use_likelihood', 'sample_nu', 'sample_d'))


def _checked_setting(name, value):
    '''``value`` with the type of sampler setting ``name``; integers are accepted for floats'''
    if value is None:
        if name in BOOL_SETTINGS or SamplerConfig.__dataclass_fields__[name].default is not None:
            raise ConfigError('sampler setting {} cannot be null'.format(name))
        return None
    if name in BOOL_SETTINGS:
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        kind = 'a boolean'
    elif isinstance(value, (bool, np.bool_)):
        kind = 'a number'
    elif name in INT_SETTINGS:
        if isinstance(value, numbers.Integral):
            return int(value)
        kind = 'an integer'
    else:
        if isinstance(value, numbers.Real):
            return float(value)
        kind = 'a number'
    raise ConfigError('sampler setting {} must be {}, got {!r}'.format(name, kind, value))


@dataclass(frozen=True)
class SamplerConfig:
    '''
    Hyper-parameters, proposal constants and run schedule.

    Fields left to ``None`` are filled by ``resolve`` once the data
    dimensions are known. The unset burn-in and thinning values keep the
    10000 / 1000 / 4000 / 100 / 200 proportions.
    '''
    K: Optional[int] = None
    m: Optional[int] = None
    n_iters: int = 10000
    alpha_nu: Optional[float] = None
    beta_nu: float = 1.0
    nu_var: float = 0.1
    a_f: float = 5.0
    nu_init: Optional[float] = None
    d_init: float = 0.5
    burn_in_states: Optional[int] = None
    burn_in_params: Optional[int] = None
    thin_states: Optional[int] = None
    thin_params: Optional[int] = None
    seed: Optional[int] = None
    record_all_states: bool = False
    use_likelihood: bool = True
    sample_nu: bool = True
    sample_d: bool = True
    log_every: int = 1000

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def from_mapping(cls, mapping):
        unknown = set(mapping) - set(cls.field_names())
        if unknown:
            raise ConfigError('unknown sampler settings: {}'.format(', '.join(sorted(unknown))))
        return cls(**{name: _checked_setting(name, value) for name, value in mapping.items()})

    def to_dict(self):
        return asdict(self)

    def updated(self, **changes):
        '''Copy with the given settings, ``None`` values ignored'''
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def resolve(self, K, m):
        if self.K is not None and self.K != K:
            raise ConfigError('configured K = {} but data has {} time points'.format(self.K, K))
        if self.m is not None and self.m != m:
            raise ConfigError('configured m = {} but data has {} channels'.format(self.m, m))
        if self.n_iters < 1:
            raise ConfigError('n_iters must be positive, got {}'.format(self.n_iters))
        n = self.n_iters
        alpha_nu = self.alpha_nu if self.alpha_nu is not None else m + 2.0
        nu_init = self.nu_init
        if nu_init is None and self.beta_nu > 0:
            nu_init = m + (alpha_nu - 1.0) / self.beta_nu
        seed = self.seed
        if seed is None:
            seed = fresh_seed()
        resolved = replace(
            self, K=K, m=m, alpha_nu=alpha_nu, nu_init=nu_init, seed=seed,
            burn_in_states=n // 10 if self.burn_in_states is None else self.burn_in_states,
            burn_in_params=2 * n // 5 if self.burn_in_params is None else self.burn_in_params,
            thin_states=max(1, n // 100) if self.thin_states is None else self.thin_states,
            thin_params=max(1, n // 50) if self.thin_params is None else self.thin_params,
        )
        return resolved.validate()

    def validate(self):
        problems = []
        if self.K is None or self.K < 1:
            problems.append('K must be a positive integer')
        if self.m is None or self.m < 1:
            problems.append('m must be a positive integer')
        if self.n_iters <= max(self.burn_in_states, self.burn_in_params):
            problems.append('n_iters must exceed both burn-in lengths')
        if min(self.burn_in_states, self.burn_in_params) < 0:
            problems.append('burn-in lengths must be non-negative')
        if min(self.thin_states, self.thin_params) < 1:
            problems.append('thinning intervals must be at least 1')
        if not self.a_f > 1:
            problems.append('a_f must exceed 1')
        if not self.nu_var > 0:
            problems.append('nu_var must be positive')
        if not (self.alpha_nu > 0 and self.beta_nu > 0):
            problems.append('alpha_nu and beta_nu must be positive')
        if self.nu_init is None or (self.m is not None and not self.nu_init > self.m):
            problems.append('nu_init must exceed m')
        if self.sample_d and not -1 < self.d_init < 1:
            problems.append('d_init must lie in (-1, 1) when d is sampled')
        elif not -1 <= self.d_init <= 1:
            problems.append('d_init must lie in [-1, 1]')
        if self.log_every < 0:
            problems.append('log_every must be non-negative')
        if problems:
            raise ConfigError('; '.join(problems))
        return self

    def keeps_state(self, sweep):
        if self.record_all_states:
            return True
        return sweep >= self.burn_in_states and (sweep - self.burn_in_states) % self.thin_states == 0


@dataclass(frozen=True, eq=False)
class ChainState:
    q_inv_seq: np.ndarray
    nu: float
    d: float
    sweep_index: int = 0

    @classmethod
    def initial(cls, config):
        return cls(np.tile(np.eye(config.m), (config.K, 1, 1)), config.nu_init, config.d_init, 0)


@dataclass
class AcceptanceCounters:
    accept_q: np.ndarray
    propose_q: np.ndarray
    accept_nu: int = 0
    propose_nu: int = 0
    accept_d: int = 0
    propose_d: int = 0

    @classmethod
    def zeros(cls, K):
        return cls(np.zeros(K, dtype=np.int64), np.zeros(K, dtype=np.int64))

    def count(self, block, index, accepted):
        if block == 'q':
            self.propose_q[index] += 1
            self.accept_q[index] += int(accepted)
        elif block == 'nu':
            self.propose_nu += 1
            self.accept_nu += int(accepted)
        else:
            self.propose_d += 1
            self.accept_d += int(accepted)


@dataclass(frozen=True, eq=False)
class ChainRecord:
    '''
    Output of ``run_chain``: full parameter traces, latent states recorded
    at ``state_sweeps`` (0-based sweep numbers) and acceptance counters.
    '''
    config: SamplerConfig
    nu_trace: np.ndarray
    d_trace: np.ndarray
    state_sweeps: np.ndarray
    q_inv_trace: np.ndarray
    accept_q: np.ndarray
    propose_q: np.ndarray
    accept_nu: int
    propose_nu: int
    accept_d: int
    propose_d: int

    def __post_init__(self):
        for name in ('nu_trace', 'd_trace', 'state_sweeps', 'q_inv_trace', 'accept_q', 'propose_q'):
            getattr(self, name).setflags(write=False)


@dataclass(frozen=True, eq=False)
class Decision:
    '''One Metropolis-Hastings step as seen by ``SweepHooks.observe``'''
    block: str
    index: int
    old: object
    new: object
    left: Optional[np.ndarray]
    right: Optional[np.ndarray]
    chain: Optional[np.ndarray]
    nu: float
    d: float
    log_g_new: float
    log_g_old: float
    log_q_forward: float
    log_q_backward: float
    log_u: float
    accepted: bool


@dataclass(frozen=True)
class SweepHooks:
    '''
    Instrumentation of ``gibbs_sweep``: a constant added to every target
    log density, proposals pinned to the current value, and an observer
    called with every ``Decision``.
    '''
    log_offset: float = 0.0
    propose_current: bool = False
    observe: Optional[Callable[[Decision], None]] = field(default=None, compare=False)


NO_HOOKS = SweepHooks()


def _log_likelihood(y, q_inv):
    return logpdf_mvn_zero(y, to_correlation(inv_spd(q_inv)))


def _transition_scales(q_inv_seq, d):
    '''S_k = Q_{k-1}^-d for every k, with Q_0 = I'''
    m = q_inv_seq.shape[-1]
    previous = np.concatenate([np.eye(m)[None], q_inv_seq[:-1]])
    return frac_power(previous, d)


def log_g_qk(q_k_inv, q_km1_inv, q_kp1_inv, y_k, nu, d, use_likelihood=True):
    '''Unnormalized log conditional posterior of an interior Q_k^-1'''
    try:
        value = (logpdf_wishart(q_k_inv, nu, frac_power(q_km1_inv, d) / nu)
                 + logpdf_wishart(q_kp1_inv, nu, frac_power(q_k_inv, d) / nu))
        if use_likelihood:
            value += _log_likelihood(y_k, q_k_inv)
    except NUMERICAL_FAILURES:
        return -math.inf
    return value


def qk_proposal_scale(q_km1_inv, q_kp1_inv, y_k, nu, d):
    '''(nu S_k^-1 + Qt y y^T Qt)^-1 with Qt the mean of the neighbours' diag-sqrt'''
    q_tilde = 0.5 * (diag_sqrt(inv_spd(q_km1_inv)) + diag_sqrt(inv_spd(q_kp1_inv)))
    scaled_y = q_tilde @ np.asarray(y_k, dtype=float)
    precision = nu * frac_power(q_km1_inv, -d) + np.outer(scaled_y, scaled_y)
    return inv_spd(symmetrize(precision))


def propose_qk(rng, q_km1_inv, q_kp1_inv, y_k, nu, d):
    '''
    Independence proposal W(nu + 1, scale) for an interior Q_k^-1.

    The returned ``scale`` evaluates the backward density as well, since
    it does not involve the current Q_k^-1.
    '''
    scale = qk_proposal_scale(q_km1_inv, q_kp1_inv, y_k, nu, d)
    value = sample_wishart(rng, nu + 1.0, scale)
    return Proposal(value, logpdf_wishart(value, nu + 1.0, scale), scale)


def log_g_last_qk(q_K_inv, q_Km1_inv, y_K, nu, d, use_likelihood=True):
    '''
    Unnormalized log conditional posterior of the last Q_K^-1.

    The |S_K^-1|^(nu/2) factor does not depend on Q_K^-1 and is left out.
    '''
    try:
        value = logpdf_wishart(q_K_inv, nu, frac_power(q_Km1_inv, d) / nu)
        if use_likelihood:
            value += _log_likelihood(y_K, q_K_inv)
    except NUMERICAL_FAILURES:
        return -math.inf
    return value


def propose_last_qk(rng, q_Km1_inv, nu, d):
    '''W(nu + 1, S_K / nu); the data term is not part of this proposal'''
    scale = frac_power(q_Km1_inv, d) / nu
    value = sample_wishart(rng, nu + 1.0, scale)
    return Proposal(value, logpdf_wishart(value, nu + 1.0, scale), scale)


def log_g_nu(nu, q_inv_seq, d, alpha_nu, beta_nu):
    '''
    Unnormalized log conditional posterior of nu, -inf for nu <= m.

    ``q_inv_seq`` has shape (K, m, m); K may be zero.
    '''
    q_inv_seq = np.asarray(q_inv_seq, dtype=float)
    prior = logpdf_prior_nu(nu, alpha_nu, beta_nu, q_inv_seq.shape[-1])
    if prior == -math.inf or len(q_inv_seq) == 0:
        return prior
    try:
        scales = _transition_scales(q_inv_seq, d)
        return prior + float(np.sum(logpdf_wishart(q_inv_seq, nu, scales / nu)))
    except NUMERICAL_FAILURES:
        return -math.inf


def log_g_d(d, q_inv_seq, nu):
    '''
    Unnormalized log conditional posterior of d, -inf outside [-1, 1].

    Its d-dependent part is sum_k -(d nu / 2) ln|Q_{k-1}^-1| - (nu / 2) Tr(Q_{k-1}^d Q_k^-1).
    '''
    if not -1.0 <= d <= 1.0:
        return -math.inf
    q_inv_seq = np.asarray(q_inv_seq, dtype=float)
    if len(q_inv_seq) == 0:
        return 0.0
    try:
        scales = _transition_scales(q_inv_seq, d)
        return float(np.sum(logpdf_wishart(q_inv_seq, nu, scales / nu)))
    except NUMERICAL_FAILURES:
        return -math.inf


def mh_log_ratio(log_g_star, log_g_old, log_q_forward, log_q_backward):
    if log_g_star == -math.inf or log_q_forward == -math.inf:
        return -math.inf
    ratio = (log_g_star - log_g_old) + (log_q_backward - log_q_forward)
    return -math.inf if math.isnan(ratio) else ratio


def mh_decide(log_u, log_g_star, log_g_old, log_q_forward, log_q_backward):
    ratio = mh_log_ratio(log_g_star, log_g_old, log_q_forward, log_q_backward)
    return ratio >= 0 or log_u < ratio


def _log_uniform(rng):
    # log of a uniform variate on (0, 1]
    return math.log1p(-rng.random())


def mh_accept(rng, log_g_star, log_g_old, log_q_forward, log_q_backward):
    return mh_decide(_log_uniform(rng), log_g_star, log_g_old, log_q_forward, log_q_backward)


class _Sweep:
    '''State shared by the block updates of one sweep'''

    def __init__(self, rng, y_seq, config, counters, hooks):
        self.rng = rng
        self.y_seq = y_seq
        self.config = config
        self.counters = counters
        self.hooks = hooks

    def decide(self, block, index, old, new, log_g_new, log_g_old, log_q_forward, log_q_backward,
               nu, d, left=None, right=None, chain=None):
        offset = self.hooks.log_offset
        log_u = _log_uniform(self.rng)
        accepted = mh_decide(log_u, log_g_new + offset, log_g_old + offset, log_q_forward, log_q_backward)
        self.counters.count(block, index, accepted)
        if self.hooks.observe is not None:
            self.hooks.observe(Decision(
                block=block, index=index, old=old, new=new, left=left, right=right,
                chain=None if chain is None else chain.copy(), nu=nu, d=d,
                log_g_new=log_g_new + offset, log_g_old=log_g_old + offset,
                log_q_forward=log_q_forward, log_q_backward=log_q_backward,
                log_u=log_u, accepted=accepted,
            ))
        return accepted

    def reject(self, block, index, exc):
        logger.debug('%s[%s] proposal rejected on numerical failure: %s', block, index, exc)
        self.counters.count(block, index, False)

    def update_state(self, q, k, nu, d):
        K, m = q.shape[0], q.shape[-1]
        last = k == K - 1
        left = q[k - 1].copy() if k > 0 else np.eye(m)
        right = None if last else q[k + 1].copy()
        old = q[k].copy()
        y_k = self.y_seq[k]
        use_lik = self.config.use_likelihood
        try:
            if self.hooks.propose_current:
                new, log_q_forward, log_q_backward = old, 0.0, 0.0
            else:
                if last:
                    proposal = propose_last_qk(self.rng, left, nu, d)
                else:
                    proposal = propose_qk(self.rng, left, right, y_k, nu, d)
                new, log_q_forward = proposal.value, proposal.log_q_forward
                log_q_backward = logpdf_wishart(old, nu + 1.0, proposal.scale)
        except NUMERICAL_FAILURES as exc:
            self.reject('q', k, exc)
            return
        if last:
            log_g_new = log_g_last_qk(new, left, y_k, nu, d, use_lik)
            log_g_old = log_g_last_qk(old, left, y_k, nu, d, use_lik)
        else:
            log_g_new = log_g_qk(new, left, right, y_k, nu, d, use_lik)
            log_g_old = log_g_qk(old, left, right, y_k, nu, d, use_lik)
        if self.decide('q', k, old, new, log_g_new, log_g_old, log_q_forward, log_q_backward,
                       nu, d, left=left, right=right):
            q[k] = new

    def update_nu(self, q, nu, d):
        config = self.config
        m = q.shape[-1]
        try:
            if self.hooks.propose_current:
                nu_star, log_q_forward, log_q_backward = nu, 0.0, 0.0
            else:
                forward = shifted_gamma_params(nu, config.nu_var, m)
                nu_star = sample_shifted_gamma(self.rng, forward)
                log_q_forward = logpdf_shifted_gamma(nu_star, forward)
                backward = shifted_gamma_params(nu_star, config.nu_var, m)
                log_q_backward = logpdf_shifted_gamma(nu, backward)
        except NUMERICAL_FAILURES as exc:
            self.reject('nu', 0, exc)
            return nu
        log_g_new = log_g_nu(nu_star, q, d, config.alpha_nu, config.beta_nu)
        log_g_old = log_g_nu(nu, q, d, config.alpha_nu, config.beta_nu)
        if self.decide('nu', 0, nu, nu_star, log_g_new, log_g_old, log_q_forward, log_q_backward,
                       nu, d, chain=q):
            return nu_star
        return nu

    def update_d(self, q, nu, d):
        a_f = self.config.a_f
        try:
            if self.hooks.propose_current:
                d_star, log_q_forward, log_q_backward = d, 0.0, 0.0
            else:
                forward = beta_prop_param(d, a_f)
                d_star = sample_scaled_beta(self.rng, forward)
                log_q_forward = logpdf_scaled_beta(d_star, forward)
                log_q_backward = logpdf_scaled_beta(d, beta_prop_param(d_star, a_f))
        except NUMERICAL_FAILURES as exc:
            self.reject('d', 0, exc)
            return d
        log_g_new = log_g_d(d_star, q, nu)
        log_g_old = log_g_d(d, q, nu)
        if self.decide('d', 0, d, d_star, log_g_new, log_g_old, log_q_forward, log_q_backward,
                       nu, d, chain=q):
            return d_star
        return d


def gibbs_sweep(rng, state, y_seq, config, counters=None, hooks=NO_HOOKS):
    '''
    One Metropolis-within-Gibbs sweep; returns the next ``ChainState``.

    Rejected or failed proposals keep the previous value.
    '''
    q = np.array(state.q_inv_seq, dtype=float)
    if counters is None:
        counters = AcceptanceCounters.zeros(len(q))
    sweep = _Sweep(rng, y_seq, config, counters, hooks)
    nu, d = state.nu, state.d
    for k in range(len(q)):
        sweep.update_state(q, k, nu, d)
    if config.sample_nu:
        nu = sweep.update_nu(q, nu, d)
    if config.sample_d:
        d = sweep.update_d(q, nu, d)
    return ChainState(q_inv_seq=q, nu=nu, d=d, sweep_index=state.sweep_index + 1)


def as_observations(y_seq):
    '''Observation matrix (K, m) with finite entries'''
    try:
        y = np.array(y_seq, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidData('observations must be a rectangular numeric array: {}'.format(exc)) from exc
    if y.ndim != 2 or y.shape[0] < 1 or y.shape[1] < 1:
        raise InvalidData('observations must have shape (K, m) with K, m >= 1, got {}'.format(y.shape))
    if not np.all(np.isfinite(y)):
        row = int(np.argwhere(~np.isfinite(y))[0][0])
        raise InvalidData('observations must be finite (first offending row {})'.format(row))
    return y


def run_chain(y_seq, config, hooks=NO_HOOKS):
    '''
    Run ``config.n_iters`` sweeps from Q_k^-1 = I, nu = nu_init, d = d_init.
    '''
    y = as_observations(y_seq)
    K, m = y.shape
    config = config.resolve(K, m)
    if m >= K:
        logger.warning('short session: %d channels for %d time points', m, K)
    rng = make_rng(config.seed)
    state = ChainState.initial(config)
    counters = AcceptanceCounters.zeros(K)
    nu_trace = np.empty(config.n_iters)
    d_trace = np.empty(config.n_iters)
    sweeps, states = [], []
    logger.info('running %d sweeps on K=%d, m=%d (seed %s)', config.n_iters, K, m, config.seed)
    for j in range(config.n_iters):
        state = gibbs_sweep(rng, state, y, config, counters, hooks)
        nu_trace[j] = state.nu
        d_trace[j] = state.d
        if config.keeps_state(j):
            sweeps.append(j)
            states.append(state.q_inv_seq)
        if config.log_every and (j + 1) % config.log_every == 0:
            logger.info(
                'sweep %d/%d: nu=%.4f d=%.4f acceptance q=%.3f nu=%.3f d=%.3f',
                j + 1, config.n_iters, state.nu, state.d,
                counters.accept_q.sum() / max(1, counters.propose_q.sum()),
                counters.accept_nu / max(1, counters.propose_nu),
                counters.accept_d / max(1, counters.propose_d),
            )
    return ChainRecord(
        config=config,
        nu_trace=nu_trace,
        d_trace=d_trace,
        state_sweeps=np.array(sweeps, dtype=np.int64),
        q_inv_trace=np.array(states).reshape(len(states), K, m, m),
        accept_q=counters.accept_q,
        propose_q=counters.propose_q,
        accept_nu=counters.accept_nu,
        propose_nu=counters.propose_nu,
        accept_d=counters.accept_d,
        propose_d=counters.propose_d,
    )
