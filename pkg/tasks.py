# -*- coding: utf-8 -*-
from os.path import join, abspath, dirname
from pathlib import Path

from invoke import run, task

HERE = abspath(join(dirname(__file__)))


@task
def clean(ctx):
    '''Cleanup all build artifacts'''
    patterns = ['build', 'dist', 'cover', '**/*.pyc', '*.egg-info', '.tox', 'results']
    for pattern in patterns:
        print('Removing {0}'.format(pattern))
        run('cd {0} && rm -rf {1}'.format(HERE, pattern))


@task
def test(ctx, slow=False):
    '''Run tests suite, estimation benchmarks included with --slow'''
    run('cd {0} && py.test{1}'.format(HERE, ' --runslow' if slow else ''), pty=True)


@task
def tox(ctx):
    '''Run test in all Python versions'''
    run('tox',
        pty=True,
        env={'DFC_MVSV_SETTINGS': str((Path(__file__).parent / 'conf' / 'dfc_mvsv.yml').resolve())})


@task
def benchmark(ctx, out='benchmark', seed=42):
    '''Simulate the synthetic benchmark and fit it with the default protocol'''
    run('dfc-mvsv simulate --nu 5 --d 0.8 --m 2 --K 150 --seed {1} --out {0}/simulation'.format(out, seed), pty=True)
    run('dfc-mvsv fit {0}/simulation/observations.csv --seed {1} --dump-traces --out {0}/fit'.format(out, seed + 1),
        pty=True)


@task
def dist(ctx):
    '''Package for distribution'''
    run('cd {0} && python setup.py sdist bdist_wheel'.format(HERE), pty=True)


@task(tox, dist, default=True)
def all(ctx):
    pass
