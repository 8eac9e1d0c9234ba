# -*- coding: utf-8 -*-
'''
Posterior summaries of a chain record: burn-in and thinning, percentile
trajectories of the correlations, empirical densities of nu and d and
acceptance rates.
'''
import logging
from dataclasses import dataclass

import numpy as np

from dfc_mvsv.errors import DomainError, EmptyResult
from dfc_mvsv.matrix import inv_spd, to_correlation
from dfc_mvsv.model import off_diagonal_pairs, upper_entries

logger = logging.getLogger(__name__)

DEFAULT_PROBS = (2.5, 50.0, 97.5)
DEFAULT_BINS = 20


def thin_and_burn(trace, burn_in, thin):
    '''Elements burn_in, burn_in + thin, burn_in + 2 thin, ...'''
    if burn_in < 0 or thin < 1:
        raise DomainError('burn-in must be >= 0 and thinning >= 1, got {} and {}'.format(burn_in, thin))
    kept = trace[burn_in::thin]
    if len(kept) == 0:
        raise EmptyResult('no sample left after a burn-in of {} on {} sweeps'.format(burn_in, len(trace)))
    return kept


def select_states(record, burn_in, thin):
    '''
    Recorded latent states lying on the (burn_in, thin) schedule.

    Same as ``thin_and_burn`` when every sweep was recorded.
    '''
    if burn_in < 0 or thin < 1:
        raise DomainError('burn-in must be >= 0 and thinning >= 1, got {} and {}'.format(burn_in, thin))
    sweeps = np.asarray(record.state_sweeps)
    mask = (sweeps >= burn_in) & ((sweeps - burn_in) % thin == 0)
    if not mask.any():
        raise EmptyResult('no recorded latent state on the schedule burn-in={} thin={}'.format(burn_in, thin))
    return record.q_inv_trace[mask]


def correlation_percentiles(q_inv_samples, probs=DEFAULT_PROBS):
    '''
    Percentiles of the off-diagonal correlations of sampled Q_k^-1.

    ``q_inv_samples`` has shape (n, K, m, m); the result has shape
    (len(probs), K, number of pairs). Percentiles interpolate linearly
    between order statistics at rank q / 100 * (n - 1).
    '''
    samples = np.asarray(q_inv_samples, dtype=float)
    if samples.ndim != 4 or len(samples) == 0:
        raise EmptyResult('expected a non-empty (n, K, m, m) sample array, got {}'.format(samples.shape))
    probs = np.asarray(probs, dtype=float)
    if np.any(probs <= 0) or np.any(probs >= 100):
        raise DomainError('percentiles must lie in (0, 100)')
    correlations = upper_entries(to_correlation(inv_spd(samples)))
    return np.percentile(correlations, probs, axis=0, method='linear')


@dataclass(frozen=True, eq=False)
class Histogram:
    edges: np.ndarray
    density: np.ndarray
    clipped: int = 0

    @property
    def widths(self):
        return np.diff(self.edges)

    @property
    def mass(self):
        return float(np.sum(self.density * self.widths))

    def to_dict(self):
        return {'edges': self.edges.tolist(), 'density': self.density.tolist(), 'clipped': self.clipped}

    @classmethod
    def from_dict(cls, doc):
        return cls(np.asarray(doc['edges'], dtype=float), np.asarray(doc['density'], dtype=float),
                   int(doc['clipped']))


def empirical_hist(samples, n_bins, support):
    '''
    Equal-width histogram normalized to a density on ``support``.

    Samples outside the support are put in the edge bins and counted.
    '''
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise EmptyResult('cannot build a histogram from zero samples')
    lo, hi = support
    if n_bins < 1 or not lo < hi:
        raise DomainError('need n_bins >= 1 and lo < hi, got {} on ({}, {})'.format(n_bins, lo, hi))
    clipped = int(np.sum((x < lo) | (x > hi)))
    if clipped:
        logger.warning('%d samples outside [%s, %s] counted in the edge bins', clipped, lo, hi)
    counts, edges = np.histogram(np.clip(x, lo, hi), bins=n_bins, range=(lo, hi))
    density = counts / (x.size * (hi - lo) / n_bins)
    return Histogram(edges=edges, density=density, clipped=clipped)


def acceptance_report(record):
    '''Acceptance rates per latent state, for nu and for d'''
    accept_q = np.asarray(record.accept_q, dtype=float)
    propose_q = np.asarray(record.propose_q, dtype=float)
    rates_q = np.divide(accept_q, propose_q, out=np.zeros_like(accept_q), where=propose_q > 0)

    def rate(accepted, proposed):
        return accepted / proposed if proposed else 0.0

    return {
        'q': rates_q,
        'nu': rate(record.accept_nu, record.propose_nu),
        'd': rate(record.accept_d, record.propose_d),
    }


def central_interval(samples, mass=0.95):
    tail = 50.0 * (1.0 - mass)
    lower, upper = np.percentile(np.asarray(samples, dtype=float), [tail, 100.0 - tail])
    return float(lower), float(upper)


def band_signs(low, high):
    '''+1 where the band lies above 0, -1 where it lies below 0, 0 where it holds 0'''
    low, high = np.asarray(low, dtype=float), np.asarray(high, dtype=float)
    return np.where(low > 0, 1, np.where(high < 0, -1, 0)).astype(np.int64)


def significant_epochs(signs, pairs):
    '''
    Maximal runs of time points with the same non-zero sign, per pair.

    ``signs`` has shape (K, number of pairs); ``start`` and ``end`` are
    1-based and inclusive.
    '''
    signs = np.asarray(signs)
    epochs = []
    for p, (i, j) in enumerate(pairs):
        column = signs[:, p]
        breaks = np.flatnonzero(np.diff(column)) + 1
        starts = np.concatenate(([0], breaks))
        ends = np.concatenate((breaks, [len(column)]))
        for start, end in zip(starts, ends):
            if column[start] != 0:
                epochs.append({'i': int(i), 'j': int(j), 'sign': int(column[start]),
                               'start': int(start) + 1, 'end': int(end)})
    return epochs


@dataclass(frozen=True, eq=False)
class PosteriorSummary:
    probs: tuple
    pairs: list
    corr_percentiles: np.ndarray
    nu_samples: np.ndarray
    d_samples: np.ndarray
    nu_hist: Histogram
    d_hist: Histogram
    acceptance_rates: dict
    sample_counts: dict

    def band(self, lower=2.5, upper=97.5):
        '''Lower and upper percentile trajectories, each (K, number of pairs)'''
        probs = list(self.probs)
        try:
            return self.corr_percentiles[probs.index(lower)], self.corr_percentiles[probs.index(upper)]
        except ValueError:
            raise DomainError('percentiles {} and {} were not computed'.format(lower, upper))

    def signs(self, lower=2.5, upper=97.5):
        '''Per time point and pair, whether the band excludes 0 and on which side'''
        return band_signs(*self.band(lower, upper))

    def has_band(self, lower=2.5, upper=97.5):
        return lower in self.probs and upper in self.probs

    def significance(self, lower=2.5, upper=97.5):
        signs = self.signs(lower, upper)
        return {
            'lower': lower,
            'upper': upper,
            'signs': signs.tolist(),
            'epochs': significant_epochs(signs, self.pairs),
        }

    def to_dict(self):
        doc = {
            'percentiles': {
                'probs': list(self.probs),
                'pairs': [list(pair) for pair in self.pairs],
                'values': self.corr_percentiles.tolist(),
                'sample_count': self.sample_counts['states'],
            },
            'nu_samples': self.nu_samples.tolist(),
            'd_samples': self.d_samples.tolist(),
            'nu_hist': self.nu_hist.to_dict(),
            'd_hist': self.d_hist.to_dict(),
            'acceptance': {
                'q': np.asarray(self.acceptance_rates['q']).tolist(),
                'nu': self.acceptance_rates['nu'],
                'd': self.acceptance_rates['d'],
            },
        }
        if self.has_band():
            doc['significance'] = self.significance()
        return doc

    @classmethod
    def from_dict(cls, doc):
        percentiles = doc['percentiles']
        nu_samples = np.asarray(doc['nu_samples'], dtype=float)
        acceptance = doc['acceptance']
        return cls(
            probs=tuple(percentiles['probs']),
            pairs=[tuple(pair) for pair in percentiles['pairs']],
            corr_percentiles=np.asarray(percentiles['values'], dtype=float),
            nu_samples=nu_samples,
            d_samples=np.asarray(doc['d_samples'], dtype=float),
            nu_hist=Histogram.from_dict(doc['nu_hist']),
            d_hist=Histogram.from_dict(doc['d_hist']),
            acceptance_rates={'q': np.asarray(acceptance['q'], dtype=float),
                              'nu': acceptance['nu'], 'd': acceptance['d']},
            sample_counts={'states': percentiles['sample_count'], 'params': len(nu_samples)},
        )


def summarize(record, config=None, probs=DEFAULT_PROBS, n_bins=DEFAULT_BINS):
    '''
    Summary of a chain record under the burn-in/thinning schedule of
    ``config`` (the record's own configuration by default).
    '''
    config = config or record.config
    states = select_states(record, config.burn_in_states, config.thin_states)
    nu_samples = np.array(thin_and_burn(record.nu_trace, config.burn_in_params, config.thin_params))
    d_samples = np.array(thin_and_burn(record.d_trace, config.burn_in_params, config.thin_params))
    lo, hi = float(nu_samples.min()), float(nu_samples.max())
    if not lo < hi:
        lo, hi = lo - 0.5, hi + 0.5
    m = record.q_inv_trace.shape[-1]
    return PosteriorSummary(
        probs=tuple(float(p) for p in probs),
        pairs=off_diagonal_pairs(m),
        corr_percentiles=correlation_percentiles(states, probs),
        nu_samples=nu_samples,
        d_samples=d_samples,
        nu_hist=empirical_hist(nu_samples, n_bins, (lo, hi)),
        d_hist=empirical_hist(d_samples, n_bins, (-1.0, 1.0)),
        acceptance_rates=acceptance_report(record),
        sample_counts={'states': len(states), 'params': len(nu_samples)},
    )


def band_coverage(summary, truth, lower=2.5, upper=97.5):
    '''Fraction of (time, pair) points whose percentile band contains ``truth``'''
    low, high = summary.band(lower, upper)
    truth = np.asarray(truth, dtype=float).reshape(low.shape)
    return float(np.mean((low <= truth) & (truth <= high)))
