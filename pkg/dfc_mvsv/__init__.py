# -*- coding: utf-8 -*-
import io
import os
import sys
import logging
from pathlib import Path

import yaml
from flask import Flask

from dfc_mvsv.app import api, init_apis
from dfc_mvsv.store import Store

__version__ = '0.1.dev0'


LOG_LEVELS = {
    'debug': logging.DEBUG,
    'info': logging.INFO,
    'warning': logging.WARNING,
    'error': logging.ERROR,
    'critical': logging.CRITICAL
}

SETTINGS_ENV = 'DFC_MVSV_SETTINGS'
DEFAULT_SETTINGS = Path(__file__).parent.parent / 'conf' / 'dfc_mvsv.yml'


def load_yaml_config(filename, section='flask'):
    """
    Open Yaml file and return one of its sections as a python dict
    """
    with io.open(filename, 'r', encoding='utf-8') as f:
        content = yaml.safe_load(f) or {}
    return content.get(section) or {}


def create_app(cfgfile=None):
    """
    Creates application.

    :param cfgfile: settings file, defaults to $DFC_MVSV_SETTINGS
                    then to conf/dfc_mvsv.yml
    :returns: flask application instance
    """
    app = Flask(__name__)
    cfgfile = cfgfile or os.environ.get(SETTINGS_ENV) or DEFAULT_SETTINGS
    if not Path(cfgfile).is_file():
        app.logger.fatal('no config file found at {}'.format(cfgfile))
        sys.exit(1)
    app.config.update(load_yaml_config(str(cfgfile)))
    app.config.setdefault('SAMPLER', load_yaml_config(str(cfgfile), 'sampler'))

    # setting log level
    if app.config.get('DEBUG'):
        app.logger.setLevel(LOG_LEVELS['debug'])
    else:
        app.logger.setLevel(LOG_LEVELS['info'])

    app.logger.debug('loading config from {}'.format(cfgfile))

    if 'HEADER_API_KEY' not in app.config:
        app.logger.fatal('HEADER_API_KEY missing')
        sys.exit(1)

    if not app.config['HEADER_API_KEY'] or len(app.config['HEADER_API_KEY']) < 12:
        app.logger.fatal('HEADER_API_KEY cannot be empty or '
                         'too short (at least 12 characters)')
        sys.exit(1)

    # apis must be registered before the api is bound to the app
    init_apis()
    api.init_app(app)
    Store.init_app(app)
    return app
