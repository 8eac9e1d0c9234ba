# -*- coding: utf-8 -*-
'''
Command line interface.

    dfc-mvsv simulate --nu 5 --d 0.8 --K 150 --seed 42 --out sim/
    dfc-mvsv fit sim/observations.csv --out fit/ --seed 7
    dfc-mvsv summarize fit/trace.json --out resummary/ --burn-in-params 2000
    dfc-mvsv serve --settings conf/dfc_mvsv.yml

Settings are taken from the built-in defaults, then from the ``sampler``
and ``simulation`` sections of ``--config FILE``, then from flags.
Exit status is 0 on success, 2 on invalid settings, 3 on invalid data and
4 on file errors.
'''
import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from itertools import repeat
from pathlib import Path
from typing import Optional

import yaml

from dfc_mvsv import LOG_LEVELS, create_app, load_yaml_config
from dfc_mvsv.dataset import as_dataset, default_channel_names, load_csv, standardize
from dfc_mvsv.distributions import chain_seeds, fresh_seed, make_rng
from dfc_mvsv.errors import ConfigError, DfcError, StorageError
from dfc_mvsv.model import ModelParams, simulate
from dfc_mvsv.posterior import DEFAULT_BINS, summarize
from dfc_mvsv.results import (
    observations_frame, parameter_frame, provenance, read_json, record_from_trace,
    trace_document, truth_document, write_csv, write_json, write_summary_outputs,
)
from dfc_mvsv.sampler import SamplerConfig, run_chain

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

SCHEDULE_FLAGS = (
    ('--burn-in-states', 'burn_in_states', int, 'sweeps discarded before keeping states (n_iters / 10)'),
    ('--burn-in-params', 'burn_in_params', int, 'sweeps discarded before keeping nu and d (2 n_iters / 5)'),
    ('--thin-states', 'thin_states', int, 'thinning interval of latent states (n_iters / 100)'),
    ('--thin-params', 'thin_params', int, 'thinning interval of nu and d (n_iters / 50)'),
)

SAMPLER_FLAGS = (
    ('--iters', 'n_iters', int, 'number of sweeps (10000)'),
    ('--alpha-nu', 'alpha_nu', float, 'shape of the gamma prior on nu - m (m + 2)'),
    ('--beta-nu', 'beta_nu', float, 'rate of the gamma prior on nu - m (1)'),
    ('--nu-var', 'nu_var', float, 'variance of the nu proposal (0.1)'),
    ('--a-f', 'a_f', float, 'clamp of the d proposal shape (5)'),
    ('--nu-init', 'nu_init', float, 'initial nu (prior mode)'),
    ('--d-init', 'd_init', float, 'initial d (0.5)'),
    ('--log-every', 'log_every', int, 'sweeps between progress messages, 0 for none (1000)'),
) + SCHEDULE_FLAGS

SAMPLER_SWITCHES = (
    ('--record-all-states', 'record_all_states', True, 'keep the latent states of every sweep'),
    ('--no-likelihood', 'use_likelihood', False, 'sample from the prior only'),
    ('--fixed-nu', 'sample_nu', False, 'hold nu at its initial value'),
    ('--fixed-d', 'sample_d', False, 'hold d at its initial value'),
)


@dataclass(frozen=True)
class RunConfig:
    '''
    Settings of one command: sampler settings, simulation parameters,
    paths and output selectors.
    '''
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    out_dir: Optional[str] = None
    input_path: Optional[str] = None
    trace_path: Optional[str] = None
    standardize: bool = True
    dump_traces: bool = False
    chains: int = 1
    n_bins: int = DEFAULT_BINS
    nu: float = 5.0
    d: float = 0.8
    m: int = 2
    K: int = 150

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls) if f.name != 'sampler']

    def updated(self, **changes):
        '''Copy with the given settings, ``None`` values ignored'''
        unknown = set(changes) - set(self.field_names())
        if unknown:
            raise ConfigError('unknown settings: {}'.format(', '.join(sorted(unknown))))
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def validate(self, *paths):
        for name in paths:
            if not getattr(self, name):
                raise ConfigError('{} must be set'.format(name.replace('_', ' ')))
        if self.chains < 1:
            raise ConfigError('number of chains must be positive, got {}'.format(self.chains))
        if self.n_bins < 1:
            raise ConfigError('number of histogram bins must be positive, got {}'.format(self.n_bins))
        return self


def simulation_config(run, seed):
    return {'nu': run.nu, 'd': run.d, 'm': run.m, 'K': run.K, 'seed': seed}


def cmd_simulate(run):
    '''
    Simulate observations; writes observations.csv and truth.json.
    '''
    run.validate('out_dir')
    params = ModelParams(nu=run.nu, d=run.d, m=run.m)
    seed = run.sampler.seed if run.sampler.seed is not None else fresh_seed()
    trajectory = simulate(make_rng(seed), params, run.K)
    config = simulation_config(run, seed)
    prov = provenance(seed, config=config)
    out = Path(run.out_dir)
    names = default_channel_names(params.m)
    return [
        write_csv(out / 'observations.csv', observations_frame(trajectory.y_seq, names), prov),
        write_json(out / 'truth.json', truth_document(trajectory, params, config, prov)),
    ]


def run_chains(values, configs):
    '''One record per configuration, chains run in separate processes'''
    if len(configs) == 1:
        return [run_chain(values, configs[0])]
    with ProcessPoolExecutor(max_workers=len(configs)) as pool:
        return list(pool.map(run_chain, repeat(values), configs))


def write_fit_outputs(out, record, prov, run):
    summary = summarize(record, n_bins=run.n_bins)
    written = write_summary_outputs(out, summary, record.config, prov)
    written.append(write_json(out / 'trace.json', trace_document(record, prov)))
    if run.dump_traces:
        written.append(write_csv(out / 'parameters.csv', parameter_frame(summary, record.config), prov))
    return written


def cmd_fit(run):
    '''
    Fit the observations of ``run.input_path``; one output directory per
    chain when more than one chain runs.
    '''
    run.validate('input_path', 'out_dir')
    raw, header = load_csv(run.input_path)
    dataset = standardize(raw, header) if run.standardize else as_dataset(raw, header)
    base_seed = run.sampler.seed if run.sampler.seed is not None else fresh_seed()
    configs = [
        run.sampler.updated(seed=seed).resolve(dataset.K, dataset.m)
        for seed in chain_seeds(base_seed, run.chains)
    ]
    records = run_chains(dataset.values, configs)
    written = []
    for i, record in enumerate(records):
        out = Path(run.out_dir)
        prov = provenance(record.config.seed, config=record.config.to_dict(), source=str(run.input_path),
                          channels=dataset.channel_names, standardized=run.standardize)
        if run.chains > 1:
            out = out / 'chain-{}'.format(i)
            prov.update(chain=i, base_seed=base_seed)
        written.extend(write_fit_outputs(out, record, prov, run))
    return written


def cmd_summarize(run):
    '''
    Summarize a stored trace again, with the burn-in and thinning of
    ``run.sampler`` where they are set.
    '''
    run.validate('trace_path', 'out_dir')
    record, prov = record_from_trace(read_json(run.trace_path))
    schedule = {name: getattr(run.sampler, name) for _, name, _, _ in SCHEDULE_FLAGS}
    config = record.config.updated(**schedule)
    summary = summarize(record, config, n_bins=run.n_bins)
    return write_summary_outputs(run.out_dir, summary, config, prov)


COMMANDS = {
    'simulate': cmd_simulate,
    'fit': cmd_fit,
    'summarize': cmd_summarize,
}


def _add_flags(parser, flags):
    for flag, dest, kind, help in flags:
        parser.add_argument(flag, dest=dest, type=kind, default=None, help=help)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='dfc-mvsv',
        description='Dynamic functional connectivity by multivariate stochastic volatility.')
    parser.add_argument('--log-level', choices=list(LOG_LEVELS), default='info')
    parser.add_argument('--config', help='YAML settings file with sampler and simulation sections')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    sim = commands.add_parser('simulate', help='simulate observations and their true correlations')
    sim.add_argument('--out', dest='out_dir', default=None, help='output directory')
    sim.add_argument('--nu', type=float, default=None, help='degrees of freedom (5)')
    sim.add_argument('--d', type=float, default=None, help='persistence in [-1, 1] (0.8)')
    sim.add_argument('--m', type=int, default=None, help='number of channels (2)')
    sim.add_argument('--K', type=int, default=None, help='number of time points (150)')
    sim.add_argument('--seed', type=int, default=None)

    fit = commands.add_parser('fit', help='estimate the correlation trajectories of a CSV file')
    fit.add_argument('input_path', metavar='INPUT', help='CSV file, one column per channel')
    fit.add_argument('--out', dest='out_dir', default=None, help='output directory')
    fit.add_argument('--no-standardize', dest='standardize', action='store_const', const=False,
                     default=None, help='use the observations as they are')
    fit.add_argument('--dump-traces', dest='dump_traces', action='store_const', const=True,
                     default=None, help='also write the retained nu and d samples as CSV')
    fit.add_argument('--chains', type=int, default=None, help='number of independent chains (1)')
    fit.add_argument('--bins', dest='n_bins', type=int, default=None, help='histogram bins (20)')
    fit.add_argument('--seed', type=int, default=None)
    _add_flags(fit, SAMPLER_FLAGS)
    for flag, dest, const, help in SAMPLER_SWITCHES:
        fit.add_argument(flag, dest=dest, action='store_const', const=const, default=None, help=help)

    again = commands.add_parser('summarize', help='summarize a stored trace with another schedule')
    again.add_argument('trace_path', metavar='TRACE', help='trace.json written by fit')
    again.add_argument('--out', dest='out_dir', default=None, help='output directory')
    again.add_argument('--bins', dest='n_bins', type=int, default=None, help='histogram bins (20)')
    _add_flags(again, SCHEDULE_FLAGS)

    serve = commands.add_parser('serve', help='run the http service')
    serve.add_argument('--settings', default=None, help='settings file ($DFC_MVSV_SETTINGS)')
    serve.add_argument('--host', default='127.0.0.1')
    serve.add_argument('--port', type=int, default=5000)
    return parser


def load_settings(filename):
    '''``sampler`` and ``simulation`` sections of a YAML settings file'''
    if not filename:
        return {}, {}
    try:
        return load_yaml_config(filename, 'sampler'), load_yaml_config(filename, 'simulation')
    except OSError as exc:
        raise StorageError(filename, exc.strerror or exc) from exc
    except (yaml.YAMLError, AttributeError) as exc:
        raise ConfigError('cannot read settings from {}: {}'.format(filename, exc)) from exc


def run_config(args):
    sampler_section, simulation_section = load_settings(args.config)
    options = vars(args)
    sampler_names = [dest for _, dest, _, _ in SAMPLER_FLAGS + SAMPLER_SWITCHES] + ['seed']
    sampler = SamplerConfig.from_mapping(sampler_section).updated(
        **{name: options[name] for name in sampler_names if name in options})
    run = RunConfig(sampler=sampler).updated(**simulation_section)
    return run.updated(**{name: options[name] for name in RunConfig.field_names() if name in options})


def serve(args):
    app = create_app(args.settings)
    app.run(host=args.host, port=args.port)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=LOG_LEVELS[args.log_level], format=LOG_FORMAT)
    if args.command == 'serve':
        return serve(args)
    try:
        written = COMMANDS[args.command](run_config(args))
    except DfcError as exc:
        logger.error('%s: %s', type(exc).__name__, exc)
        return exc.exit_code
    for path in written:
        logger.info('wrote %s', path)
    return 0


if __name__ == '__main__':
    sys.exit(main())
