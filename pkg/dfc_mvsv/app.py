# -*- coding: utf-8 -*-
from functools import wraps

from flask import request, current_app
from flask_restx import Api, Resource as OrigResource

from dfc_mvsv.store import dfcexceptions

HEADER_API_KEY = 'X-API-KEY'


class Resource(OrigResource):
    # turn estimator errors into http errors for all api methods
    method_decorators = [dfcexceptions]


class DfcApi(Api):

    def secure(self, func):
        '''Enforce authentication'''

        @wraps(func)
        def wrapper(*args, **kwargs):
            if HEADER_API_KEY not in request.headers:
                self.abort(401, '{} required'.format(HEADER_API_KEY))
            if request.headers[HEADER_API_KEY] != current_app.config['HEADER_API_KEY']:
                # a single global key from the settings file
                self.abort(401, 'Unauthorized')
            return func(*args, **kwargs)

        return wrapper


api = DfcApi(
    version='1.0', title='Dynamic Functional Connectivity API',
    description='Simulate multivariate stochastic volatility trajectories '
                'and estimate time-varying correlations by MCMC',
    validate=True,
    authorizations={
        'apikey': {
            'type': 'apiKey',
            'in': 'header',
            'name': HEADER_API_KEY
        }
    }
)


def init_apis():
    from dfc_mvsv.apis.simulation import nssim
    from dfc_mvsv.apis.fit import nsfit
