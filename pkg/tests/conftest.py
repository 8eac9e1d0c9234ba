import numpy as np
import pytest

from dfc_mvsv import create_app
from dfc_mvsv.distributions import make_rng

API_KEY = 'test-api-key-0123456789'


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run the long estimation benchmarks')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def settings(tmp_path):
    path = tmp_path / 'dfc_mvsv.yml'
    path.write_text(
        'flask:\n'
        '    DEBUG: False\n'
        '    TESTING: True\n'
        '    HEADER_API_KEY: {}\n'
        '    RESULTS_DIR: {}\n'
        'sampler:\n'
        '    n_iters: 30\n'
        '    log_every: 0\n'.format(API_KEY, tmp_path / 'results')
    )
    return path


@pytest.fixture
def app(settings):
    app = create_app(str(settings))
    return app


@pytest.fixture
def headers():
    return {'X-API-KEY': API_KEY}


@pytest.fixture
def rng():
    return make_rng(20170917)


def random_spd(rng, m, jitter=None):
    '''A A^T + m I from a standard normal A'''
    a = rng.standard_normal((m, m))
    return a @ a.T + (m if jitter is None else jitter) * np.eye(m)


@pytest.fixture
def spd(rng):
    return lambda m=2, jitter=None: random_spd(rng, m, jitter)
