# -*- coding: utf-8 -*-
'''
Serialization of simulations, chain traces and posterior summaries.

Structured documents are JSON (keys sorted, floats in shortest round-trip
form); tables are CSV whose first line is a ``#`` comment holding the
provenance of the file.
'''
import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from dfc_mvsv.errors import ConfigError, SchemaMismatch, StorageError
from dfc_mvsv.model import off_diagonal_pairs
from dfc_mvsv.posterior import PosteriorSummary
from dfc_mvsv.sampler import ChainRecord, SamplerConfig

logger = logging.getLogger(__name__)

SUMMARY_KEYS = ('config', 'percentiles', 'nu_samples', 'd_samples', 'nu_hist', 'd_hist',
                'acceptance', 'provenance')
TRACE_KEYS = ('config', 'nu_trace', 'd_trace', 'state_sweeps', 'q_inv_trace', 'counters', 'provenance')


def provenance(seed, **extra):
    from dfc_mvsv import __version__
    doc = {'package': 'dfc_mvsv', 'version': __version__, 'seed': seed}
    doc.update(extra)
    return doc


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False)


def write_json(path, doc):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(doc) + '\n', encoding='utf-8')
    except OSError as exc:
        raise StorageError(path, exc.strerror or exc) from exc
    logger.debug('wrote %s', path)
    return path


def read_json(path):
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding='utf-8'))
    except OSError as exc:
        raise StorageError(path, exc.strerror or exc) from exc
    except ValueError as exc:
        raise SchemaMismatch('{} is not valid JSON: {}'.format(path, exc)) from exc


def write_csv(path, frame, prov):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', encoding='utf-8', newline='') as f:
            f.write('# {}\n'.format(json.dumps(prov, sort_keys=True)))
            frame.to_csv(f, index=False, float_format='%.17g', lineterminator='\n')
    except OSError as exc:
        raise StorageError(path, exc.strerror or exc) from exc
    logger.debug('wrote %s', path)
    return path


def _require(doc, keys, what):
    if not isinstance(doc, dict):
        raise SchemaMismatch('{} must be a JSON object'.format(what))
    missing = [key for key in keys if key not in doc]
    if missing:
        raise SchemaMismatch('{} lacks {}'.format(what, ', '.join(missing)))


def observations_frame(values, channel_names):
    return pd.DataFrame(np.asarray(values), columns=list(channel_names))


def truth_document(trajectory, params, config, prov):
    '''Ground truth of a simulation: parameters and correlation trajectory'''
    return {
        'config': config,
        'nu': params.nu,
        'd': params.d,
        'm': params.m,
        'K': trajectory.K,
        'seed': prov['seed'],
        'pairs': [list(pair) for pair in off_diagonal_pairs(params.m)],
        'correlations': trajectory.correlations().tolist(),
        'provenance': prov,
    }


def summary_document(summary, config, prov):
    doc = summary.to_dict()
    doc['config'] = config.to_dict()
    doc['provenance'] = prov
    return doc


def parse_summary_document(doc):
    '''
    :returns: (PosteriorSummary, SamplerConfig, provenance)
    '''
    _require(doc, SUMMARY_KEYS, 'summary document')
    try:
        return (PosteriorSummary.from_dict(doc), SamplerConfig.from_mapping(doc['config']),
                doc['provenance'])
    except (ConfigError, KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatch('malformed summary document: {}'.format(exc)) from exc


def trace_document(record, prov):
    return {
        'config': record.config.to_dict(),
        'nu_trace': record.nu_trace.tolist(),
        'd_trace': record.d_trace.tolist(),
        'state_sweeps': record.state_sweeps.tolist(),
        'q_inv_trace': record.q_inv_trace.tolist(),
        'counters': {
            'accept_q': record.accept_q.tolist(),
            'propose_q': record.propose_q.tolist(),
            'accept_nu': record.accept_nu,
            'propose_nu': record.propose_nu,
            'accept_d': record.accept_d,
            'propose_d': record.propose_d,
        },
        'provenance': prov,
    }


def record_from_trace(doc):
    '''
    :returns: (ChainRecord, provenance)
    '''
    _require(doc, TRACE_KEYS, 'trace document')
    try:
        config = SamplerConfig.from_mapping(doc['config'])
        counters = doc['counters']
        K, m = config.K, config.m
        q_inv_trace = np.asarray(doc['q_inv_trace'], dtype=float).reshape(-1, K, m, m)
        record = ChainRecord(
            config=config,
            nu_trace=np.asarray(doc['nu_trace'], dtype=float),
            d_trace=np.asarray(doc['d_trace'], dtype=float),
            state_sweeps=np.asarray(doc['state_sweeps'], dtype=np.int64),
            q_inv_trace=q_inv_trace,
            accept_q=np.asarray(counters['accept_q'], dtype=np.int64),
            propose_q=np.asarray(counters['propose_q'], dtype=np.int64),
            accept_nu=int(counters['accept_nu']),
            propose_nu=int(counters['propose_nu']),
            accept_d=int(counters['accept_d']),
            propose_d=int(counters['propose_d']),
        )
    except (ConfigError, KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatch('malformed trace document: {}'.format(exc)) from exc
    if len(record.state_sweeps) != len(record.q_inv_trace) or len(record.nu_trace) != len(record.d_trace):
        raise SchemaMismatch('trace document sequences differ in length')
    return record, doc['provenance']


def percentile_frame(summary):
    '''
    One row per (time point, pair), one column per percentile, and a
    ``sign`` column when the 95% band was computed
    '''
    rows = []
    values = summary.corr_percentiles
    signs = summary.signs() if summary.has_band() else None
    for k in range(values.shape[1]):
        for p, (i, j) in enumerate(summary.pairs):
            row = {'k': k + 1, 'i': i, 'j': j}
            for q, prob in enumerate(summary.probs):
                row['p{:g}'.format(prob)] = values[q, k, p]
            if signs is not None:
                row['sign'] = signs[k, p]
            rows.append(row)
    columns = ['k', 'i', 'j'] + ['p{:g}'.format(prob) for prob in summary.probs]
    if signs is not None:
        columns.append('sign')
    return pd.DataFrame(rows, columns=columns)


def histogram_frame(hist):
    return pd.DataFrame({'lo': hist.edges[:-1], 'hi': hist.edges[1:], 'density': hist.density})


def parameter_frame(summary, config):
    sweeps = config.burn_in_params + config.thin_params * np.arange(len(summary.nu_samples))
    return pd.DataFrame({'sweep': sweeps, 'nu': summary.nu_samples, 'd': summary.d_samples})


def write_summary_outputs(out_dir, summary, config, prov):
    '''summary.json and the plot-ready tables'''
    out_dir = Path(out_dir)
    return [
        write_json(out_dir / 'summary.json', summary_document(summary, config, prov)),
        write_csv(out_dir / 'correlation_percentiles.csv', percentile_frame(summary), prov),
        write_csv(out_dir / 'nu_hist.csv', histogram_frame(summary.nu_hist), prov),
        write_csv(out_dir / 'd_hist.csv', histogram_frame(summary.d_hist), prov),
    ]
